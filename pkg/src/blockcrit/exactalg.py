"""Exact arithmetic substrate: sparse multivariate polynomials and truncated
Laurent series over arbitrary-precision rationals.

Coefficients are ``fractions.Fraction`` throughout (arbitrary-precision
rationals in lowest terms with positive denominator), so every result of the
enumeration pipeline is bit-identical across runs and platforms.

A ``MultiPoly`` is a sparse map from exponent tuples to rational
coefficients; it hosts the tree generating polynomials in the vertex-degree
markers d_1, d_2, ... (1-based variable indices in the public API).

A ``LaurentSeries`` is a truncated power series in one variable w that may
carry finitely many negative degrees.  Every series knows its truncation
order N and guarantees that the stored coefficients for degrees <= N are
exact; asking for a coefficient beyond N raises ``TruncationError`` instead
of silently returning garbage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

# Coefficient domain: exact rationals, always canonical (lowest terms,
# positive denominator) courtesy of the stdlib.
Rational = Fraction

Exponents = tuple[int, ...]


class TruncationError(ValueError):
    """Coefficient requested beyond the exactly-known truncation order."""

    def __init__(self, degree: int, trunc_order: int):
        self.degree = degree
        self.trunc_order = trunc_order
        super().__init__(
            f"coefficient of degree {degree} requested but series is only "
            f"exact through order {trunc_order}; rebuild with truncation "
            f"order >= {degree}"
        )


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


# ---------------------------------------------------------------------------
# Sparse multivariate polynomials
# ---------------------------------------------------------------------------

class MultiPoly:
    """Sparse polynomial in variables d_1..d_arity over Fraction.

    Terms map exponent tuples (one entry per variable) to nonzero
    coefficients; the zero polynomial has no terms.  Instances are
    value-like: no method mutates ``self``.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[Exponents, Fraction] | None = None):
        if arity < 0:
            raise ValueError("arity must be >= 0")
        self.arity = arity
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != arity:
                    raise ValueError(
                        f"exponent tuple {exps} has length {len(exps)}, expected {arity}"
                    )
                coeff = _as_fraction(coeff)
                if coeff != 0:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "MultiPoly":
        return cls(arity, {})

    @classmethod
    def constant(cls, arity: int, value) -> "MultiPoly":
        return cls(arity, {(0,) * arity: _as_fraction(value)})

    @classmethod
    def variable(cls, arity: int, index: int) -> "MultiPoly":
        """The monomial d_index (1-based index)."""
        if not 1 <= index <= arity:
            raise ValueError(f"variable index {index} out of range 1..{arity}")
        exps = [0] * arity
        exps[index - 1] = 1
        return cls(arity, {tuple(exps): Fraction(1)})

    # -- ring operations ----------------------------------------------------

    def _check_arity(self, other: "MultiPoly") -> None:
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} != {other.arity}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_arity(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return MultiPoly(self.arity, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_arity(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) - coeff
        return MultiPoly(self.arity, out)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_arity(other)
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return MultiPoly(self.arity, out)

    def scale(self, factor) -> "MultiPoly":
        factor = _as_fraction(factor)
        if factor == 0:
            return MultiPoly.zero(self.arity)
        return MultiPoly(self.arity, {e: c * factor for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus -----------------------------------------------------------

    def partial(self, index: int) -> "MultiPoly":
        """Formal partial derivative with respect to d_index (1-based)."""
        if not 1 <= index <= self.arity:
            raise ValueError(f"variable index {index} out of range 1..{self.arity}")
        i = index - 1
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            key = exps[:i] + (e - 1,) + exps[i + 1:]
            out[key] = out.get(key, Fraction(0)) + coeff * e
        return MultiPoly(self.arity, out)

    def integrate_var1(self) -> "MultiPoly":
        """Antiderivative in d_1 with zero constant (integral from 0 to d_1)."""
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[0]
            key = (e + 1,) + exps[1:]
            out[key] = coeff / (e + 1)
        return MultiPoly(self.arity, out)

    # -- structure ----------------------------------------------------------

    def extended(self, arity: int) -> "MultiPoly":
        """Same polynomial viewed in a larger variable set (zero-padded)."""
        if arity < self.arity:
            raise ValueError("cannot shrink arity")
        pad = (0,) * (arity - self.arity)
        return MultiPoly(arity, {e + pad: c for e, c in self.terms.items()})

    def compose_laurent(self, args: Sequence["LaurentSeries"]) -> "LaurentSeries":
        """Substitute args[i-1] for variable d_i; exact up to truncation.

        All arguments must share one truncation order (checked); the result's
        truncation order follows the conservative product/sum rules, so any
        later coefficient extraction beyond it raises ``TruncationError``.
        """
        if len(args) != self.arity:
            raise ValueError(
                f"expected {self.arity} series arguments, got {len(args)}"
            )
        orders = {s.trunc_order for s in args}
        if len(orders) > 1:
            raise ValueError(f"arguments have mixed truncation orders {sorted(orders)}")
        order = orders.pop() if orders else 0
        acc = LaurentSeries.constant(Fraction(0), order)
        for exps, coeff in self.terms.items():
            term = LaurentSeries.constant(coeff, order)
            for arg, e in zip(args, exps):
                for _ in range(e):
                    term = term * arg
            acc = acc + term
        return acc

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        bits = []
        for exps in sorted(self.terms):
            mono = "*".join(
                f"d{i+1}^{e}" if e > 1 else f"d{i+1}"
                for i, e in enumerate(exps) if e
            )
            bits.append(f"{self.terms[exps]}{'*' + mono if mono else ''}")
        return "MultiPoly(" + " + ".join(bits) + ")"


def poly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def poly_partial(p: MultiPoly, index: int) -> MultiPoly:
    return p.partial(index)


def poly_integrate_var1(p: MultiPoly) -> MultiPoly:
    return p.integrate_var1()


def laurent_compose_poly(p: MultiPoly, args: Sequence["LaurentSeries"]) -> "LaurentSeries":
    return p.compose_laurent(args)


# ---------------------------------------------------------------------------
# Truncated Laurent series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentSeries:
    """Truncated series sum_{k=min_degree}^{trunc_order} c_k w^k.

    ``coeffs[j]`` is the coefficient of w^(min_degree + j).  Leading zero
    coefficients are trimmed on construction so ``min_degree`` is the true
    lowest degree with a nonzero coefficient (the zero series stores no
    coefficients and min_degree == trunc_order + 1).
    """

    min_degree: int
    coeffs: tuple[Fraction, ...]
    trunc_order: int

    def __post_init__(self):
        coeffs = tuple(_as_fraction(c) for c in self.coeffs)
        lo = self.min_degree
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
            lo += 1
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            lo = self.trunc_order + 1
        elif lo + len(coeffs) - 1 > self.trunc_order:
            raise ValueError("coefficients extend beyond the truncation order")
        object.__setattr__(self, "min_degree", lo)
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value, trunc_order: int) -> "LaurentSeries":
        return cls.monomial(value, 0, trunc_order)

    @classmethod
    def monomial(cls, value, degree: int, trunc_order: int) -> "LaurentSeries":
        value = _as_fraction(value)
        if value == 0 or degree > trunc_order:
            return cls(trunc_order + 1, (), trunc_order)
        return cls(degree, (value,), trunc_order)

    @classmethod
    def from_coeffs(cls, pairs: Iterable[tuple[int, Fraction]], trunc_order: int) -> "LaurentSeries":
        """Build from (degree, coefficient) pairs, all degrees <= trunc_order."""
        table = {}
        for deg, coeff in pairs:
            if deg > trunc_order:
                raise ValueError(f"degree {deg} beyond truncation order {trunc_order}")
            table[deg] = table.get(deg, Fraction(0)) + _as_fraction(coeff)
        if not table:
            return cls(trunc_order + 1, (), trunc_order)
        lo = min(table)
        hi = max(table)
        return cls(lo, tuple(table.get(d, Fraction(0)) for d in range(lo, hi + 1)), trunc_order)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, degree: int) -> Fraction:
        """Exact coefficient of w^degree; raises beyond the truncation order."""
        if degree > self.trunc_order:
            raise TruncationError(degree, self.trunc_order)
        j = degree - self.min_degree
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return Fraction(0)

    def items(self) -> list[tuple[int, Fraction]]:
        return [
            (self.min_degree + j, c)
            for j, c in enumerate(self.coeffs)
            if c != 0
        ]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        order = min(self.trunc_order, other.trunc_order)
        table: dict[int, Fraction] = {}
        for deg, c in self.items():
            if deg <= order:
                table[deg] = table.get(deg, Fraction(0)) + c
        for deg, c in other.items():
            if deg <= order:
                table[deg] = table.get(deg, Fraction(0)) + c
        return LaurentSeries.from_coeffs(table.items(), order)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + other.scale(Fraction(-1))

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        # Unknown tail of one factor meets known low-degree terms of the
        # other at degree trunc+min, so with negative minimum degrees the
        # product is exact strictly below min(trunc_a, trunc_b).
        bounds = [min(self.trunc_order, other.trunc_order)]
        if not other.is_zero():
            bounds.append(self.trunc_order + other.min_degree)
        if not self.is_zero():
            bounds.append(other.trunc_order + self.min_degree)
        order = min(bounds)
        if self.is_zero() or other.is_zero():
            return LaurentSeries(order + 1, (), order)
        table: dict[int, Fraction] = {}
        for da, ca in self.items():
            for db, cb in other.items():
                d = da + db
                if d <= order:
                    table[d] = table.get(d, Fraction(0)) + ca * cb
        return LaurentSeries.from_coeffs(table.items(), order)

    def scale(self, factor) -> "LaurentSeries":
        factor = _as_fraction(factor)
        return LaurentSeries(
            self.min_degree, tuple(c * factor for c in self.coeffs), self.trunc_order
        )

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by w^k exactly (degrees and truncation order move by k)."""
        return LaurentSeries(self.min_degree + k, self.coeffs, self.trunc_order + k)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*w^{d}" for d, c in self.items()) or "0"
        return f"LaurentSeries({body}; O(w^{self.trunc_order + 1}))"
