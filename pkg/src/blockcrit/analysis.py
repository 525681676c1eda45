"""Floating-point evaluation of the block-size limit constants.

The subcritical constant is

    c1 = int_0^inf (1 - exp(-E1(v))) dv,   E1(x) = (1/2) int_x^inf e^-t dt/t,

where E1 is HALF the standard exponential integral.  The critical-window
constant is

    c2(lam) = (1/alpha) int_0^inf (1 - sqrt(2 pi) sum_{r,d} A(3r+1/2, lam)
              e^{-E1(u)} e_{r,d}(e^-u)) du,

with alpha the positive root of lam = 1/alpha - alpha and A(y, lam) the
Airy-type entire function

    A(y, lam) = e^{-lam^3/6} / 3^{(y+1)/3}
                sum_{k>=0} ((3^{2/3} lam / 2)^k) / (k! Gamma((y+1-2k)/3)).

The A series suffers catastrophic cancellation in double precision: its
largest terms grow like e^{|lam|^3/6} while the value stays O(1), so the sum
is carried out in mpmath with working precision scaled to |lam|^3, and only
the final value is rounded to a float.

Truncating the (r, d) sum at a finite excess leaves the c2 integrand with a
nonzero limit at infinity (the mass of the discarded terms).  That limit is
reported as ``tail_mass`` and subtracted from the integrand before
quadrature, keeping the integral finite and the truncation defect visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
from scipy import special

from .enumeration import CoeffTables

SQRT_2PI = math.sqrt(2.0 * math.pi)

# |integrand - tail_mass| below this is considered flat when locating the
# effective upper integration limit u*.
FLAT_TOL = 1e-9


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to meet tolerance; carries the best estimate."""

    def __init__(self, message: str, best_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate


class TailMassError(ValueError):
    """Truncation defect too large for a meaningful c2 value."""


@dataclass(frozen=True)
class AnalysisConfig:
    """Truncation and tolerance knobs left open by the infinite sums/integrals."""

    quad_tol: float = 1e-8      # relative quadrature tolerance
    series_tol: float = 1e-14   # term-magnitude cutoff for the A series
    rmax: int = 6               # excess truncation for c2
    u_max: float = 50.0         # upper integration limit standing in for infinity

    def __post_init__(self):
        if not 0.0 < self.quad_tol < 1.0:
            raise ValueError("quad_tol must be in (0, 1)")
        if not 0.0 < self.series_tol < 1.0:
            raise ValueError("series_tol must be in (0, 1)")
        if self.rmax < 1:
            raise ValueError("rmax must be >= 1")
        if self.u_max <= 0.0:
            raise ValueError("u_max must be positive")


DEFAULT_CONFIG = AnalysisConfig()


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------

def exp_integral_E1(x: float) -> float:
    """(1/2) int_x^inf e^-t dt/t for x > 0 (half the standard E1)."""
    if not x > 0.0:
        raise ValueError("exp_integral_E1 requires x > 0 (logarithmic divergence at 0)")
    return 0.5 * float(special.exp1(x))


def alpha_of_lambda(lam: float) -> float:
    """Positive root alpha of lam = 1/alpha - alpha."""
    if lam >= 0.0:
        # avoid cancellation between sqrt(lam^2+4) and lam for large lam
        return 2.0 / (math.sqrt(lam * lam + 4.0) + lam)
    return (math.sqrt(lam * lam + 4.0) - lam) / 2.0


def _airy_dps(lam: float) -> int:
    # cancellation headroom: peak term magnitude ~ e^{|lam|^3/6} against an
    # O(1) result, twice over (series growth and the e^{-lam^3/6} prefactor)
    return 30 + int(0.15 * abs(lam) ** 3) + 2 * int(abs(lam))


def airy_A(y: float, lam: float, cfg: AnalysisConfig = DEFAULT_CONFIG) -> float:
    """Airy-type function A(y, lam), summed to cfg.series_tol relative accuracy.

    Terms are added until five consecutive ones fall below
    series_tol * |partial sum| (single small terms can be accidental zeros at
    reciprocal-Gamma poles); the reciprocal Gamma is exactly 0 at nonpositive
    integers.
    """
    if not (math.isfinite(y) and math.isfinite(lam)):
        raise ValueError("airy_A requires finite y and lambda")
    with mp.workdps(_airy_dps(lam)):
        ymp = mp.mpf(y)
        lmp = mp.mpf(lam)
        x = mp.mpf(3) ** mp.mpf("2/3") / 2 * lmp
        total = mp.mpf(0)
        power = mp.mpf(1)          # x^k / k!
        below = 0
        k = 0
        while below < 5:
            term = power * mp.rgamma((ymp + 1 - 2 * k) / 3)
            total += term
            if abs(term) <= mp.mpf(cfg.series_tol) * max(abs(total), mp.mpf("1e-300")):
                below += 1
            else:
                below = 0
            k += 1
            if k > 10_000:
                raise ArithmeticError("airy_A series failed to converge")
            power = power * x / k
        value = mp.e ** (-(lmp ** 3) / 6) / mp.mpf(3) ** ((ymp + 1) / 3) * total
    return float(value)


# ---------------------------------------------------------------------------
# Adaptive Simpson quadrature
# ---------------------------------------------------------------------------

def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)

_MAX_DEPTH = 60


def adaptive_simpson(f, a: float, b: float, rel_tol: float) -> float:
    """Adaptive Simpson with interval-halving Richardson check.

    The tolerance is relative to a first coarse estimate of the integral;
    exceeding the subdivision budget raises QuadratureError carrying the
    best estimate so far.
    """
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = _simpson(fa, fm, fb, b - a)
    scale = max(abs(whole), 1e-12)
    state = {"bad": 0.0}

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = _simpson(fa, flm, fm, m - a)
        right = _simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= _MAX_DEPTH:
            state["bad"] += abs(delta)
            return left + right + delta / 15.0
        half = 0.5 * tol
        return (
            recurse(a, m, fa, flm, fm, left, half, depth + 1)
            + recurse(m, b, fm, frm, fb, right, half, depth + 1)
        )

    result = recurse(a, b, fa, fm, fb, whole, rel_tol * scale, 0)
    if state["bad"] > rel_tol * max(abs(result), scale):
        raise QuadratureError(
            f"quadrature on [{a}, {b}] exhausted subdivision depth "
            f"{_MAX_DEPTH} with residual error {state['bad']:.3e}",
            best_estimate=result,
        )
    return result


# ---------------------------------------------------------------------------
# The subcritical constant c1
# ---------------------------------------------------------------------------

def c1_integrand(v: float) -> float:
    """1 - exp(-E1(v)), extended by continuity to 1 at v = 0."""
    if v <= 0.0:
        return 1.0
    return -math.expm1(-exp_integral_E1(v))


def compute_c1(cfg: AnalysisConfig = DEFAULT_CONFIG) -> float:
    """c1 = int_0^inf (1 - e^{-E1(v)}) dv by adaptive Simpson on (0, u_max];
    the tail beyond u_max is below (1/2) e^{-u_max}."""
    return adaptive_simpson(c1_integrand, 0.0, cfg.u_max, cfg.quad_tol)


def c1_error_estimate(cfg: AnalysisConfig = DEFAULT_CONFIG) -> float:
    """Crude upper bound on the c1 evaluation error (tail + tolerance)."""
    return 0.5 * math.exp(-cfg.u_max) + cfg.quad_tol


# ---------------------------------------------------------------------------
# The critical-window constant c2(lambda)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class C2Breakdown:
    """c2(lambda) together with its evaluation diagnostics.

    ``tail_mass`` is the value the truncated integrand approaches at
    infinity (1 minus the retained probability mass); ``per_r_mass[r]`` is
    the retained mass of excess r; ``tail_sensitivity`` = tail_mass * u_star
    measures how much the constant-subtraction tail handling moved the
    result.
    """

    lam: float
    alpha: float
    value: float
    tail_mass: float
    per_r_mass: tuple[float, ...]
    u_star: float
    tail_sensitivity: float


@lru_cache(maxsize=32)
def _compiled_mass_poly(
    tables: CoeffTables, lam: float, rmax: int, series_tol: float
) -> tuple[tuple[float, ...], float, tuple[float, ...]]:
    """Combined polynomial Q(z) = sqrt(2 pi) sum_r A_r sum_d e_{r,d}(z) as a
    float coefficient tuple, plus tail_mass = 1 - Q(0) and per-r masses."""
    cfg = AnalysisConfig(series_tol=series_tol, rmax=rmax)
    weights = [
        SQRT_2PI * airy_A(3 * r + 0.5, lam, cfg) for r in range(rmax + 1)
    ]
    coeffs: list[float] = []
    per_r = []
    for r in range(rmax + 1):
        d_range = (0,) if r == 0 else range(0, 2 * r)
        mass_r = 0.0
        for d in d_range:
            poly = tables.e.get((r, d), ())
            if not poly:
                continue
            if len(poly) > len(coeffs):
                coeffs.extend([0.0] * (len(poly) - len(coeffs)))
            for i, frac in enumerate(poly):
                coeffs[i] += weights[r] * float(frac)
            mass_r += weights[r] * float(poly[0])
        per_r.append(mass_r)
    tail_mass = 1.0 - sum(per_r)
    return tuple(coeffs), tail_mass, tuple(per_r)


def _eval_poly(coeffs: tuple[float, ...], z: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def c2_integrand(
    u: float, lam: float, tables: CoeffTables, cfg: AnalysisConfig = DEFAULT_CONFIG
) -> float:
    """1 - sqrt(2 pi) e^{-E1(u)} sum_{r<=rmax} sum_d A(3r+1/2, lam) e_{r,d}(e^-u)."""
    if not u > 0.0:
        raise ValueError("c2_integrand requires u > 0")
    if tables.rmax < cfg.rmax:
        raise ValueError(
            f"tables built for rmax = {tables.rmax} < requested cfg.rmax = {cfg.rmax}"
        )
    coeffs, _, _ = _compiled_mass_poly(tables, lam, cfg.rmax, cfg.series_tol)
    return 1.0 - math.exp(-exp_integral_E1(u)) * _eval_poly(coeffs, math.exp(-u))


def compute_c2(
    lam: float, tables: CoeffTables, cfg: AnalysisConfig = DEFAULT_CONFIG
) -> C2Breakdown:
    """Evaluate c2(lambda) with the truncation defect subtracted.

    The integrand tends to tail_mass at infinity, so the quadrature runs on
    integrand(u) - tail_mass up to the point u* where the integrand has gone
    flat (|integrand - tail_mass| < 1e-9); beyond u* the subtracted
    integrand contributes less than 1e-9 per unit length.
    """
    if tables.rmax < cfg.rmax:
        raise ValueError(
            f"tables built for rmax = {tables.rmax} < requested cfg.rmax = {cfg.rmax}"
        )
    coeffs, tail_mass, per_r = _compiled_mass_poly(
        tables, lam, cfg.rmax, cfg.series_tol
    )
    if tail_mass > 0.05:
        raise TailMassError(
            f"truncation defect tail_mass = {tail_mass:.4f} > 0.05 at "
            f"lambda = {lam}; rebuild tables with rmax > {cfg.rmax}"
        )
    alpha = alpha_of_lambda(lam)

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 1.0 - tail_mass
        return (
            1.0
            - math.exp(-exp_integral_E1(u)) * _eval_poly(coeffs, math.exp(-u))
            - tail_mass
        )

    u_star = cfg.u_max
    u = 1.0
    while u < cfg.u_max:
        if abs(integrand(u)) < FLAT_TOL:
            u_star = u
            break
        u += 1.0

    integral = adaptive_simpson(integrand, 0.0, u_star, cfg.quad_tol)
    return C2Breakdown(
        lam=lam,
        alpha=alpha,
        value=integral / alpha,
        tail_mass=tail_mass,
        per_r_mass=per_r,
        u_star=u_star,
        tail_sensitivity=tail_mass * u_star,
    )
