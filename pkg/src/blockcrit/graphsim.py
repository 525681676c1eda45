"""Uniform G(n, M) sampling, block decomposition, and Monte-Carlo estimation
of the expected largest block.

Sampling draws a uniform M-subset of the C(n, 2) edge slots by rejection
(duplicates discarded in stream order, which is exactly sampling without
replacement).  Reproducibility contract: every trial i of a run derives its
own seed from the master seed by a splitmix64 counter step, so results are
identical for any parallelism degree and any chunking of the trials.  Small
instances (at most 64 edge slots) are sampled with a partial Fisher-Yates
shuffle driven directly by splitmix64; larger instances use a
philox4x64-keyed numpy generator and vectorised batch rejection.

The block statistic is the vertex count of the largest 2-connected subgraph
("block"): bridges count as blocks on 2 vertices, an edgeless graph scores
1.  Blocks of 3 or more vertices survive 2-core peeling, so for large graphs
the depth-first block search only runs on the (much smaller) 2-core; the
search itself is the iterative lowpoint algorithm with an explicit edge
stack, never recursion.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, sqrt
from multiprocessing import get_context

import numpy as np

GENERATOR_NAME = "splitmix64/philox4x64"

# instances with at most this many edge slots sample via pure-python
# Fisher-Yates; above it, numpy philox batch rejection
_SMALL_SLOT_LIMIT = 64

# graphs up to this many vertices run the block search directly; larger ones
# are peeled to their 2-core first
_DIRECT_BCC_LIMIT = 2048

_EXACT_ENUM_GUARD = 10 ** 7

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(z: int) -> int:
    z = (z + _GOLDEN) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, trial: int) -> int:
    """Per-trial seed: one splitmix64 mix of the master seed advanced by the
    trial counter.  A pure function, hence parallelism-independent."""
    return _splitmix64((master_seed + trial * _GOLDEN) & _MASK64)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _slot_keys(n: int) -> tuple[int, ...]:
    """Edge-slot keys i*n + j for all pairs i < j, lexicographic."""
    return tuple(i * n + j for i in range(n) for j in range(i + 1, n))


def _sample_keys_small(n: int, m: int, seed: int) -> list[int]:
    slots = list(_slot_keys(n))
    total = len(slots)
    state = seed
    for i in range(m):
        state = (state + _GOLDEN) & _MASK64
        z = state
        z ^= z >> 30
        z = (z * 0xBF58476D1CE4E5B9) & _MASK64
        z ^= z >> 27
        z = (z * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        j = i + z % (total - i)
        slots[i], slots[j] = slots[j], slots[i]
    return slots[:m]


def _sample_keys_large(n: int, m: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=seed))
    stream = np.empty(0, dtype=np.int64)
    have = 0
    while have < m:
        draw = int((m - have) * 1.1) + 16
        pair = rng.integers(0, n, size=(2, draw), dtype=np.int64)
        ok = pair[0] != pair[1]
        lo = np.minimum(pair[0], pair[1])[ok]
        hi = np.maximum(pair[0], pair[1])[ok]
        stream = np.concatenate([stream, lo * n + hi])
        have = np.unique(stream).size
    # first occurrences in draw order = sampling without replacement
    _, first = np.unique(stream, return_index=True)
    return stream[np.sort(first)[:m]]


def _sample_edge_keys(n: int, m: int, seed: int):
    if comb(n, 2) <= _SMALL_SLOT_LIMIT:
        return _sample_keys_small(n, m, seed)
    return _sample_keys_large(n, m, seed)


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with an explicit edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n = {self.n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency_csr(self) -> tuple[list[int], list[int], list[int]]:
        """(indptr, neighbors, edge_ids) with both directions of every edge."""
        return _csr_from_edges(self.n, self.edges)


def _csr_from_edges(n, edges):
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    indptr = [0] * (n + 1)
    for i in range(n):
        indptr[i + 1] = indptr[i] + deg[i]
    cursor = list(indptr[:n])
    adj = [0] * (2 * len(edges))
    eid = [0] * (2 * len(edges))
    for e, (u, v) in enumerate(edges):
        adj[cursor[u]] = v
        eid[cursor[u]] = e
        cursor[u] += 1
        adj[cursor[v]] = u
        eid[cursor[v]] = e
        cursor[v] += 1
    return indptr, adj, eid


def sample_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniformly random simple graph with n vertices and m edges."""
    if n < 1:
        raise ValueError("n must be >= 1")
    nc2 = comb(n, 2)
    if not 0 <= m <= nc2:
        raise ValueError(f"M = {m} out of range 0..{nc2} for n = {n}")
    keys = _sample_edge_keys(n, m, seed)
    return Graph(n, tuple((int(k) // n, int(k) % n) for k in keys))


# ---------------------------------------------------------------------------
# Block decomposition
# ---------------------------------------------------------------------------

def _bcc_edge_blocks(n, indptr, adj, eid):
    """Iterative lowpoint DFS; returns blocks as lists of edge indices."""
    disc = [-1] * n
    low = [0] * n
    parent_eid = [-1] * n
    pos = list(indptr[:n])
    blocks: list[list[int]] = []
    estack: list[int] = []
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [root]
        while stack:
            v = stack[-1]
            if pos[v] < indptr[v + 1]:
                w = adj[pos[v]]
                e = eid[pos[v]]
                pos[v] += 1
                if e == parent_eid[v]:
                    continue
                if disc[w] == -1:
                    parent_eid[w] = e
                    disc[w] = low[w] = timer
                    timer += 1
                    estack.append(e)
                    stack.append(w)
                elif disc[w] < disc[v]:
                    estack.append(e)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            else:
                stack.pop()
                if stack:
                    u = stack[-1]
                    if low[v] < low[u]:
                        low[u] = low[v]
                    if low[v] >= disc[u]:
                        block = []
                        while True:
                            e = estack.pop()
                            block.append(e)
                            if e == parent_eid[v]:
                                break
                        blocks.append(block)
    return blocks


def biconnected_components(g: Graph) -> list[list[int]]:
    """Blocks of g as lists of edge indices (every edge in exactly one block)."""
    indptr, adj, eid = g.adjacency_csr()
    return _bcc_edge_blocks(g.n, indptr, adj, eid)


def _max_block_vertices(n, edges) -> int:
    if not edges:
        return 1
    indptr, adj, eid = _csr_from_edges(n, edges)
    blocks = _bcc_edge_blocks(n, indptr, adj, eid)
    best = 2
    for block in blocks:
        verts = set()
        for e in block:
            verts.add(edges[e][0])
            verts.add(edges[e][1])
        if len(verts) > best:
            best = len(verts)
    return best


def _two_core_edges(n: int, u: np.ndarray, v: np.ndarray):
    """Boolean mask of the edges surviving iterated leaf removal."""
    alive = np.ones(u.size, dtype=bool)
    while True:
        deg = np.bincount(u[alive], minlength=n) + np.bincount(v[alive], minlength=n)
        leaf = deg == 1
        if not leaf.any():
            return alive
        kill = alive & (leaf[u] | leaf[v])
        if not kill.any():
            return alive
        alive &= ~kill


def _max_block_from_keys(n: int, keys) -> int:
    m = len(keys)
    if m == 0:
        return 1
    if n <= _DIRECT_BCC_LIMIT:
        edges = [(k // n, k % n) for k in (int(k) for k in keys)]
        return _max_block_vertices(n, edges)
    keys = np.asarray(keys, dtype=np.int64)
    u = keys // n
    v = keys % n
    core = _two_core_edges(n, u, v)
    if not core.any():
        return 2
    cu = u[core]
    cv = v[core]
    verts = np.unique(np.concatenate([cu, cv]))
    ru = np.searchsorted(verts, cu)
    rv = np.searchsorted(verts, cv)
    edges = list(zip(ru.tolist(), rv.tolist()))
    return max(2, _max_block_vertices(verts.size, edges))


def max_block_size(g: Graph) -> int:
    """Vertex count of the largest block; 1 for edgeless graphs, >= 2 once
    any edge exists (a bridge is a block on two vertices)."""
    if g.m == 0:
        return 1
    keys = [u * g.n + v if u < v else v * g.n + u for u, v in g.edges]
    return _max_block_from_keys(g.n, keys)


# ---------------------------------------------------------------------------
# Exact small-instance oracle
# ---------------------------------------------------------------------------

def exact_expectation(n: int, m: int) -> Fraction:
    """Exact E(max block size) of G(n, m) by enumerating all edge subsets."""
    nc2 = comb(n, 2)
    if not 0 <= m <= nc2:
        raise ValueError(f"M = {m} out of range 0..{nc2} for n = {n}")
    count = comb(nc2, m)
    if count > _EXACT_ENUM_GUARD:
        raise ValueError(
            f"{count} graphs exceed the enumeration guard of {_EXACT_ENUM_GUARD}"
        )
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    total = 0
    for combo in combinations(range(nc2), m):
        edges = [slots[ix] for ix in combo]
        total += _max_block_vertices(n, edges)
    return Fraction(total, count)


# ---------------------------------------------------------------------------
# Monte-Carlo driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimResult:
    """Summary of one Monte-Carlo run at a single (n, M) point."""

    n: int
    m: int
    lam: float
    trials: int
    mean: float
    stderr: float
    seed: int
    histogram: tuple[tuple[int, int], ...]
    generator: str = GENERATOR_NAME

    def to_json_dict(self) -> dict:
        return {
            "kind": "simresult",
            "n": self.n,
            "M": self.m,
            "lambda": self.lam,
            "trials": self.trials,
            "mean": self.mean,
            "stderr": self.stderr,
            "seed": self.seed,
            "histogram": {str(size): count for size, count in self.histogram},
            "generator": self.generator,
        }

    def to_csv_row(self) -> list:
        return [self.n, self.m, self.lam, self.trials, self.mean, self.stderr, self.seed]


SIM_CSV_COLUMNS = ["n", "M", "lambda", "trials", "mean", "stderr", "seed"]


def lambda_of_m(n: int, m: int) -> float:
    """Window coordinate lambda = (2M/n - 1) n^(1/3) of an (n, M) point."""
    return (2.0 * m / n - 1.0) * n ** (1.0 / 3.0)


def lambda_to_m(n: int, lam: float) -> int:
    """Edge count M = round((n/2)(1 + lambda n^(-1/3))), ties to even."""
    m = round(n / 2.0 * (1.0 + lam * n ** (-1.0 / 3.0)))
    return min(max(m, 0), comb(n, 2))


def _trial_value(n: int, m: int, master_seed: int, trial: int) -> int:
    keys = _sample_edge_keys(n, m, trial_seed(master_seed, trial))
    return _max_block_from_keys(n, keys)


def _trial_range(args) -> list[int]:
    n, m, master_seed, lo, hi = args
    return [_trial_value(n, m, master_seed, t) for t in range(lo, hi)]


def run_monte_carlo(
    n: int,
    m: int,
    trials: int,
    seed: int,
    parallelism: int | None = None,
) -> SimResult:
    """Estimate E(max block size) of G(n, m) over independent trials.

    The result is a pure function of (n, m, trials, seed): trials are seeded
    individually and re-assembled in trial order, so any parallelism degree
    produces identical output.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    nc2 = comb(n, 2)
    if not 0 <= m <= nc2:
        raise ValueError(f"M = {m} out of range 0..{nc2} for n = {n}")
    if parallelism is None:
        parallelism = os.cpu_count() or 1
    if parallelism <= 1 or trials < 8:
        values = _trial_range((n, m, seed, 0, trials))
    else:
        step = max(1, -(-trials // (parallelism * 4)))
        ranges = [
            (n, m, seed, lo, min(lo + step, trials))
            for lo in range(0, trials, step)
        ]
        with get_context("fork").Pool(processes=parallelism) as pool:
            chunks = pool.map(_trial_range, ranges)
        values = [x for chunk in chunks for x in chunk]
    arr = np.asarray(values, dtype=np.int64)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / sqrt(trials)) if trials > 1 else 0.0
    sizes, counts = np.unique(arr, return_counts=True)
    histogram = tuple(
        (int(s), int(c)) for s, c in zip(sizes.tolist(), counts.tolist())
    )
    return SimResult(
        n=n,
        m=m,
        lam=lambda_of_m(n, m),
        trials=trials,
        mean=mean,
        stderr=stderr,
        seed=seed,
        histogram=histogram,
    )
