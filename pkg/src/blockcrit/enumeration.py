"""Exact enumeration of the coefficient families feeding the limit constants.

Five interlocking counts, all over exact rationals:

* ``tree_count`` / ``tree_gf``: labeled trees by degree specification
  (m_1, ..., m_{n-1}) with m_i vertices of degree i, and their generating
  polynomials U_n, built by the leaf-attachment recurrence
  U_2 = d_1^2/2,  U_n = d_2 U_{n-1} + sum_i d_{i+1} int_0^{d_1} dU_{n-1}/dd_i.

* ``cubic_t`` / ``cubic_g``: connected simple cubic graph numbers t_n and the
  counts g(s, d) of 2-connected cubic multigraphs with s single and d double
  edges (Chae-Palmer-Robinson recurrences).

* ``block_b``: leading coefficients b_r of 2-connected smooth graphs of
  excess r with cubic cores; b_1 = 1/12 is special (its core is the
  two-vertex triple edge, which the single/double-edge classification does
  not reach), and for r >= 2, b_r = sum_{s+2d=3r} g(s,d) / (2^d (2r)!).

* ``beta_series`` / ``coeff_c``: pointed-block series beta_s(w) and the
  bridge-refined coefficients c_{r,d} extracted from U_{d+1} composed with
  Laurent arguments (w^-1 added in slot 3 for the unexpanded cubic vertex).

* ``poly_e``: the limit polynomials e_{r,d}(z) with their (1-z)^{d+1}
  block-size truncation factors, via the same-d convolution recurrence
  e_{r,d} = c_{r,d} (1-z)^{d+1} + (1/r) sum_j j c_{j,d} e_{r-j,d} (1-z)^{d+1}.

``tables_build`` computes everything once for a requested excess ceiling and
``tables_save``/``tables_load`` round-trip the result bit-exactly through a
versioned JSON cache.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exactalg import LaurentSeries, MultiPoly

TABLES_FORMAT = "blockcrit-tables"
TABLES_VERSION = 1

# Univariate polynomials in z are dense coefficient tuples, low degree first.
ZPoly = tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# Trees by degree specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeSpec:
    """Degree specification (m_1, ..., m_{n-1}) of a labeled tree on n vertices."""

    m: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("a degree specification needs n >= 2 vertices")
        if len(self.m) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} degree counts, got {len(self.m)}")
        if any(x < 0 for x in self.m):
            raise ValueError("degree counts must be nonnegative")
        if sum(self.m) != self.n:
            raise ValueError(f"degree counts sum to {sum(self.m)}, expected n = {self.n}")
        total_degree = sum(i * x for i, x in enumerate(self.m, start=1))
        if total_degree != 2 * self.n - 2:
            raise ValueError(
                f"total degree {total_degree} != 2n-2 = {2 * self.n - 2}"
            )


def tree_count(spec: DegreeSpec) -> int:
    """Number of labeled trees on spec.n vertices with the given degree counts."""
    n = spec.n
    count = Fraction(factorial(n - 2))
    for i, mi in enumerate(spec.m, start=1):
        count /= Fraction(factorial(i - 1)) ** mi
    multinomial = Fraction(factorial(n))
    for mi in spec.m:
        multinomial /= factorial(mi)
    result = count * multinomial
    assert result.denominator == 1
    return result.numerator


@lru_cache(maxsize=None)
def tree_gf(n: int) -> MultiPoly:
    """Degree-marked generating polynomial U_n; n! times each coefficient is
    the tree count of the corresponding degree specification."""
    if n < 2:
        raise ValueError("tree_gf requires n >= 2")
    if n == 2:
        return MultiPoly(1, {(2,): Fraction(1, 2)})
    prev = tree_gf(n - 1)            # arity n-2
    arity = n - 1
    prev_ext = prev.extended(arity)
    acc = MultiPoly.variable(arity, 2) * prev_ext
    for i in range(2, n - 1):
        bumped = prev_ext.partial(i).integrate_var1()
        acc = acc + MultiPoly.variable(arity, i + 1) * bumped
    return acc


# ---------------------------------------------------------------------------
# Cubic multigraph counts
# ---------------------------------------------------------------------------

def cubic_t(nmax: int) -> list[int]:
    """Sequence t_1..t_nmax of the connected simple cubic recurrence
    t_n = 3n t_{n-1} + 2 t_{n-2} + (3n-1) sum_{i=2}^{n-3} t_i t_{n-1-i}."""
    if nmax < 2:
        raise ValueError("cubic_t requires nmax >= 2")
    t = [0, 0, 1]                    # t[0] unused, t_1 = 0, t_2 = 1
    for n in range(3, nmax + 1):
        s = sum(t[i] * t[n - 1 - i] for i in range(2, n - 2))
        t.append(3 * n * t[n - 1] + 2 * t[n - 2] + (3 * n - 1) * s)
    return t[1:]


@lru_cache(maxsize=None)
def _t_value(s: int) -> int:
    return cubic_t(max(2, s))[s - 1]


@lru_cache(maxsize=None)
def cubic_g(s: int, d: int) -> int:
    """Number of 2-connected cubic labeled multigraphs with s single edges
    and d double edges (2n vertices and 3n edges where n = (s + 2d)/3).

    Simple-graph case (d = 0) comes from the closed formula in terms of t_n;
    the all-double case g(s, s) = (2s-1)!; everything else by the
    edge-deletion recurrence.  The two-vertex triple edge is not covered by
    this classification, so g(3, 0) = 0 (excess 1 is special-cased upstream).
    """
    if s < 0 or d < 0:
        raise ValueError("s and d must be nonnegative")
    if s < 2:
        # vanishes unconditionally, even for kernel-inconsistent (s, d)
        return 0
    if (s + 2 * d) % 3 != 0:
        raise ValueError(f"inconsistent (s, d) = ({s}, {d}): s + 2d must be divisible by 3")
    if d == s:
        return factorial(2 * s - 1)
    if d == 0:
        k = s // 3
        if k < 2:
            return 0
        coeff = Fraction(factorial(2 * k), 3 * k * 2 ** k)
        result = coeff * (_t_value(k) - 2 * _t_value(k - 1))
        assert result.denominator == 1
        return result.numerator
    n = (s + 2 * d) // 3
    value = (
        2 * n * (2 * n - 1)
        * (Fraction(s - 1, d) * cubic_g(s - 1, d - 1) + cubic_g(s - 3, d) if s >= 3
           else Fraction(s - 1, d) * cubic_g(s - 1, d - 1))
    )
    assert value.denominator == 1
    return value.numerator


def block_b(r: int) -> Fraction:
    """Leading coefficient b_r of 2-connected smooth graphs of excess r with
    cubic cores; b_1 = 1/12, else sum over kernels with s + 2d = 3r."""
    if r < 1:
        raise ValueError("block_b requires r >= 1")
    if r == 1:
        return Fraction(1, 12)
    total = Fraction(0)
    for d in range(0, (3 * r) // 2 + 1):
        s = 3 * r - 2 * d
        total += Fraction(cubic_g(s, d), 2 ** d)
    return total / factorial(2 * r)


# ---------------------------------------------------------------------------
# Pointed-block series and bridge-refined coefficients
# ---------------------------------------------------------------------------

def beta_series(s: int, rmax: int) -> LaurentSeries:
    """beta_s(w) = (s-1)!/2 + sum_{l=1}^{rmax-1} w^l b_l prod_{i=1}^{s} (3l + s - i),
    truncated at order rmax - 1 (blocks of excess >= rmax cannot occur in a
    c_{r,d} extraction with r <= rmax)."""
    if s < 1:
        raise ValueError("beta_series requires s >= 1")
    if rmax < 1:
        raise ValueError("beta_series requires rmax >= 1")
    order = rmax - 1
    pairs = [(0, Fraction(factorial(s - 1), 2))]
    for ell in range(1, rmax):
        prod = 1
        for j in range(s):
            prod *= 3 * ell + j
        pairs.append((ell, block_b(ell) * prod))
    return LaurentSeries.from_coeffs(pairs, order)


def _laurent_args(d: int, rmax: int) -> list[LaurentSeries]:
    """Arguments (beta_1, beta_2, beta_3 + w^-1, beta_4, ..., beta_d) for U_{d+1}."""
    args = [beta_series(s, rmax) for s in range(1, d + 1)]
    if d >= 3:
        args[2] = args[2] + LaurentSeries.monomial(Fraction(1), -1, rmax - 1)
    return args


def coeff_c(r: int, d: int, tables: "CoeffTables") -> Fraction:
    """Bridge-refined coefficient c_{r,d} = [w^r] U_{d+1}(laurent args) w^d.

    c_{r,0} = b_r; coefficients with d > 2r - 1 vanish identically and are
    returned as 0 without computation.
    """
    if r < 1:
        raise ValueError("coeff_c requires r >= 1")
    if d < 0:
        raise ValueError("coeff_c requires d >= 0")
    if r > tables.rmax:
        raise ValueError(
            f"c_{{{r},{d}}} requested but tables were built for rmax = {tables.rmax}"
        )
    if d > 2 * r - 1:
        return Fraction(0)
    if (r, d) in tables.c:
        return tables.c[(r, d)]
    if d == 0:
        return tables.b[r - 1]
    composed = tree_gf(d + 1).compose_laurent(_laurent_args(d, tables.rmax))
    return composed.shift(d).coefficient(r)


# ---------------------------------------------------------------------------
# Limit polynomials e_{r,d}(z)
# ---------------------------------------------------------------------------

def _zp_add(a: ZPoly, b: ZPoly) -> ZPoly:
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    )


def _zp_mul(a: ZPoly, b: ZPoly) -> ZPoly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def _zp_scale(a: ZPoly, factor: Fraction) -> ZPoly:
    return tuple(c * factor for c in a)


def _one_minus_z_pow(k: int) -> ZPoly:
    return tuple(Fraction((-1) ** i * comb(k, i)) for i in range(k + 1))


def zpoly_eval(p: ZPoly, z: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * z + c
    return acc


def poly_e(r: int, d: int, tables: "CoeffTables") -> ZPoly:
    """Limit polynomial e_{r,d}(z): e_{0,0} = 1, zero for d > 2r - 1, else
    e_{r,d} = c_{r,d} (1-z)^{d+1} + (1/r) sum_{j=1}^{r-1} j c_{j,d} e_{r-j,d} (1-z)^{d+1}."""
    if r < 0 or d < 0:
        raise ValueError("poly_e requires r >= 0 and d >= 0")
    if r == 0:
        return (Fraction(1),) if d == 0 else ()
    if d > 2 * r - 1:
        return ()
    if (r, d) in tables.e:
        return tables.e[(r, d)]
    inner: ZPoly = (coeff_c(r, d, tables),)
    for j in range(1, r):
        cj = coeff_c(j, d, tables)
        if cj == 0:
            continue
        inner = _zp_add(inner, _zp_scale(poly_e(r - j, d, tables), Fraction(j, r) * cj))
    return _zp_mul(inner, _one_minus_z_pow(d + 1))


# ---------------------------------------------------------------------------
# Coefficient tables and their on-disk cache
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class CoeffTables:
    """All enumeration output for excesses 1..rmax.

    ``b[i]`` holds b_{i+1}; ``c`` and ``e`` are keyed by (r, d) with
    1 <= r <= rmax and 0 <= d <= 2r - 1, plus e[(0, 0)] = 1.  Instances are
    treated as immutable once built.
    """

    rmax: int
    t: list[int] = field(default_factory=list)
    g: dict[tuple[int, int], int] = field(default_factory=dict)
    b: list[Fraction] = field(default_factory=list)
    c: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    e: dict[tuple[int, int], ZPoly] = field(default_factory=dict)


def tables_build(rmax: int) -> CoeffTables:
    """Compute every table for excesses up to rmax (practical ceiling ~10)."""
    if rmax < 1:
        raise ValueError("tables_build requires rmax >= 1")
    tables = CoeffTables(rmax=rmax)
    tables.t = cubic_t(max(2, rmax))
    for r in range(1, rmax + 1):
        for d in range(0, (3 * r) // 2 + 1):
            s = 3 * r - 2 * d
            tables.g[(s, d)] = cubic_g(s, d)
    tables.b = [block_b(r) for r in range(1, rmax + 1)]
    for r in range(1, rmax + 1):
        for d in range(0, 2 * r):
            tables.c[(r, d)] = coeff_c(r, d, tables)
    tables.e[(0, 0)] = (Fraction(1),)
    for r in range(1, rmax + 1):
        for d in range(0, 2 * r):
            tables.e[(r, d)] = poly_e(r, d, tables)
    return tables


def _fraction_to_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _fraction_from_json(obj: dict) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def tables_to_json(tables: CoeffTables) -> str:
    payload = {
        "format": TABLES_FORMAT,
        "version": TABLES_VERSION,
        "rmax": tables.rmax,
        "t": [str(x) for x in tables.t],
        "g": {f"{s},{d}": str(v) for (s, d), v in sorted(tables.g.items())},
        "b": [_fraction_to_json(x) for x in tables.b],
        "c": {f"{r},{d}": _fraction_to_json(v) for (r, d), v in sorted(tables.c.items())},
        "e": {
            f"{r},{d}": [_fraction_to_json(c) for c in p]
            for (r, d), p in sorted(tables.e.items())
        },
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def tables_save(tables: CoeffTables, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(tables_to_json(tables))


def tables_load(path) -> CoeffTables:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict) or payload.get("format") != TABLES_FORMAT:
        raise ValueError(f"{path}: not a {TABLES_FORMAT} file")
    if payload.get("version") != TABLES_VERSION:
        raise ValueError(
            f"{path}: format version {payload.get('version')} unsupported "
            f"(expected {TABLES_VERSION})"
        )
    tables = CoeffTables(rmax=int(payload["rmax"]))
    tables.t = [int(x) for x in payload["t"]]
    tables.g = {
        tuple(int(p) for p in key.split(",")): int(v)
        for key, v in payload["g"].items()
    }
    tables.b = [_fraction_from_json(x) for x in payload["b"]]
    tables.c = {
        tuple(int(p) for p in key.split(",")): _fraction_from_json(v)
        for key, v in payload["c"].items()
    }
    tables.e = {
        tuple(int(p) for p in key.split(",")): tuple(_fraction_from_json(c) for c in v)
        for key, v in payload["e"].items()
    }
    return tables
