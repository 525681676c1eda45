"""Enumeration pipeline against independent oracles and frozen exact values."""

import json
from collections import Counter
from fractions import Fraction as F
from itertools import product
from math import comb, factorial

import pytest

from blockcrit.enumeration import (
    CoeffTables,
    DegreeSpec,
    beta_series,
    block_b,
    coeff_c,
    cubic_g,
    cubic_t,
    poly_e,
    tables_build,
    tables_load,
    tables_save,
    tables_to_json,
    tree_count,
    tree_gf,
    zpoly_eval,
    _one_minus_z_pow,
    _zp_add,
    _zp_scale,
)


# ---------------------------------------------------------------------------
# Trees: fixed examples and the full Pruefer-code oracle
# ---------------------------------------------------------------------------

def test_tree_count_examples():
    assert tree_count(DegreeSpec((2, 1), 3)) == 3          # paths on 3 vertices
    assert tree_count(DegreeSpec((2, 2, 0), 4)) == 12      # paths on 4 vertices
    assert tree_count(DegreeSpec((3, 0, 1), 4)) == 4       # stars on 4 vertices


def test_degree_spec_validation():
    with pytest.raises(ValueError):
        DegreeSpec((1, 1), 3)              # sums to 2, not 3
    with pytest.raises(ValueError):
        DegreeSpec((3, 0), 3)              # total degree 3 != 2n-2
    with pytest.raises(ValueError):
        DegreeSpec((2, 1, 0), 3)           # wrong length


def test_tree_gf_small_cases():
    assert tree_gf(2).terms == {(2,): F(1, 2)}
    assert tree_gf(3).terms == {(2, 1): F(1, 2)}
    assert tree_gf(4).terms == {(2, 2, 0): F(1, 2), (3, 0, 1): F(1, 6)}
    with pytest.raises(ValueError):
        tree_gf(1)


def _prufer_spec_counts(n: int) -> Counter:
    """Degree-specification counts of all labeled trees on n vertices, read
    off Pruefer codes: deg(v) = multiplicity of v in the code, plus one."""
    counts = Counter()
    for code in product(range(n), repeat=n - 2):
        deg = [1] * n
        for v in code:
            deg[v] += 1
        m = [0] * (n - 1)
        for d in deg:
            m[d - 1] += 1
        counts[tuple(m)] += 1
    return counts


@pytest.mark.parametrize("n", range(3, 8))
def test_tree_gf_matches_prufer_enumeration(n):
    oracle = _prufer_spec_counts(n)
    gf = tree_gf(n)
    seen = {}
    for exps, coeff in gf.terms.items():
        count = coeff * factorial(n)
        assert count.denominator == 1
        seen[exps] = count.numerator
        assert tree_count(DegreeSpec(exps, n)) == count.numerator
    assert seen == dict(oracle)
    assert sum(seen.values()) == n ** (n - 2)   # Cayley total


# ---------------------------------------------------------------------------
# Cubic multigraph counts
# ---------------------------------------------------------------------------

def test_cubic_t_values():
    assert cubic_t(5) == [0, 1, 9, 110, 1682]
    with pytest.raises(ValueError):
        cubic_t(1)


def test_cubic_g_fixed_values():
    assert cubic_g(2, 2) == 6
    assert cubic_g(6, 0) == 1      # the complete graph on 4 vertices
    assert cubic_g(1, 0) == 0
    assert cubic_g(9, 0) == 70
    assert cubic_g(3, 0) == 0      # two-vertex triple edge is not single-edged
    assert cubic_g(4, 1) == 0      # no such multigraph: checked by hand


@pytest.mark.parametrize("s", range(2, 7))
def test_cubic_g_all_double_case(s):
    assert cubic_g(s, s) == factorial(2 * s - 1)


@pytest.mark.parametrize("s", range(2, 7))
def test_cubic_g_simple_case_matches_t_recurrence(s):
    t = cubic_t(s)
    assert cubic_g(3 * s, 0) * (3 * s * 2 ** s) == factorial(2 * s) * (t[s - 1] - 2 * t[s - 2])


def test_cubic_g_inconsistent_pair_raises():
    with pytest.raises(ValueError, match="divisible by 3"):
        cubic_g(4, 0)


def test_block_b_values():
    assert block_b(1) == F(1, 12)
    # sum over g(6,0)=1, g(4,1)=0, g(2,2)=6, g(0,3)=0 divided by 2^d 4!
    assert block_b(2) == F(5, 48)
    for r in range(1, 9):
        assert block_b(r) > 0


# ---------------------------------------------------------------------------
# Pointed-block series and c_{r,d}
# ---------------------------------------------------------------------------

def test_beta_series_examples():
    assert beta_series(1, 1).items() == [(0, F(1, 2))]
    assert beta_series(2, 1).items() == [(0, F(1, 2))]
    assert beta_series(1, 2).items() == [(0, F(1, 2)), (1, F(1, 4))]


def test_coeff_c_examples(tables3):
    assert coeff_c(1, 0, tables3) == F(1, 12)
    assert coeff_c(1, 1, tables3) == F(1, 8)
    for r in (1, 2, 3):
        assert coeff_c(r, 2 * r, tables3) == 0
    with pytest.raises(ValueError):
        coeff_c(0, 0, tables3)
    with pytest.raises(ValueError, match="rmax = 3"):
        coeff_c(4, 0, tables3)


def test_coeff_c_excess_two_grid(tables3):
    assert [tables3.c[(2, d)] for d in range(4)] == [F(5, 48), F(1, 8), F(1, 16), F(1, 48)]


def _connected_leading_constants(rmax):
    """Invert e_r = g_r + (1/r) sum j g_j e_{r-j} for the connected-graph
    constants g_r, starting from the closed form
    e_r = (6r)! / (2^(5r) 3^(2r) (3r)! (2r)!)."""
    def e_closed(r):
        return F(factorial(6 * r), 2 ** (5 * r) * 3 ** (2 * r) * factorial(3 * r) * factorial(2 * r))

    gamma = {}
    for r in range(1, rmax + 1):
        gamma[r] = e_closed(r) - F(1, r) * sum(
            j * gamma[j] * e_closed(r - j) for j in range(1, r)
        )
    return gamma


def test_bridge_sums_match_connected_constants(tables6):
    """Independent pipeline oracle: summing c_{r,d} over the bridge count d
    must reproduce the connected leading constants obtained by inverting the
    closed-form complex-graph constants (5/24, 5/16, 1105/1152, ...)."""
    gamma = _connected_leading_constants(5)
    assert gamma[1] == F(5, 24)
    assert gamma[2] == F(5, 16)
    for r in range(1, 6):
        assert sum(tables6.c[(r, d)] for d in range(0, 2 * r)) == gamma[r]


# ---------------------------------------------------------------------------
# e_{r,d}(z)
# ---------------------------------------------------------------------------

def test_poly_e_base_and_small_cases(tables3):
    assert poly_e(0, 0, tables3) == (F(1),)
    assert poly_e(1, 0, tables3) == (F(1, 12), F(-1, 12))             # (1-z)/12
    assert poly_e(1, 1, tables3) == (F(1, 8), F(-1, 4), F(1, 8))      # (1-z)^2/8
    assert poly_e(2, 5, tables3) == ()                                # d > 2r-1
    assert poly_e(0, 3, tables3) == ()


def test_poly_e_excess_two_golden(tables3):
    want = _zp_add(
        _zp_scale(_one_minus_z_pow(2), F(1, 8)),
        _zp_scale(_one_minus_z_pow(4), F(1, 128)),
    )
    assert poly_e(2, 1, tables3) == want


def test_poly_e_vanishes_at_one_and_nonnegative_at_zero(tables6):
    for (r, d), p in tables6.e.items():
        if (r, d) == (0, 0):
            continue
        assert zpoly_eval(p, F(1)) == 0
        assert zpoly_eval(p, F(0)) >= 0


# ---------------------------------------------------------------------------
# Tables: build, invariants, persistence
# ---------------------------------------------------------------------------

def test_tables_build_minimal():
    t = tables_build(1)
    assert t.c[(1, 0)] == F(1, 12)
    assert t.c[(1, 1)] == F(1, 8)
    assert t.e[(0, 0)] == (F(1),)


def test_tables_c_r0_equals_b(tables6):
    for r in range(1, 7):
        assert tables6.c[(r, 0)] == tables6.b[r - 1] == block_b(r)


def test_tables_build_deterministic(tables3):
    again = tables_build(3)
    assert again.t == tables3.t
    assert again.g == tables3.g
    assert again.b == tables3.b
    assert again.c == tables3.c
    assert again.e == tables3.e
    assert tables_to_json(again) == tables_to_json(tables3)


def test_tables_save_load_roundtrip(tables3, tmp_path):
    path = tmp_path / "tables.json"
    tables_save(tables3, path)
    first = path.read_bytes()
    loaded = tables_load(path)
    assert loaded.rmax == tables3.rmax
    assert loaded.t == tables3.t
    assert loaded.g == tables3.g
    assert loaded.b == tables3.b
    assert loaded.c == tables3.c
    assert loaded.e == tables3.e
    tables_save(loaded, path)
    assert path.read_bytes() == first


def test_tables_load_rejects_bad_format(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"format": "something-else"}))
    with pytest.raises(ValueError, match="not a blockcrit-tables file"):
        tables_load(path)
    payload = json.loads(tables_to_json(tables_build(1)))
    payload["version"] = 99
    path.write_text(json.dumps(payload))
    with pytest.raises(ValueError, match="version 99"):
        tables_load(path)


def test_tables_build_requires_positive_rmax():
    with pytest.raises(ValueError):
        tables_build(0)
