"""Multivariate polynomials with exact rational coefficients.

Used as coefficients of differential polynomials when some parameters are kept
symbolic.  A monomial is a sorted tuple of ``(name, power)`` pairs; the empty
tuple is the constant monomial.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping

Monomial = tuple[tuple[str, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    powers = dict(a)
    for v, e in b:
        powers[v] = powers.get(v, 0) + e
    return tuple(sorted(powers.items()))


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class ParamPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = as_fraction(c)
            if c:
                clean[m] = c
        self.terms: dict[Monomial, Fraction] = clean

    @classmethod
    def var(cls, name: str) -> "ParamPoly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls({(): as_fraction(c)})

    @staticmethod
    def lift(x) -> "ParamPoly":
        return x if isinstance(x, ParamPoly) else ParamPoly.const(x)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            other = ParamPoly.lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-ParamPoly.lift(other))

    def __rsub__(self, other):
        return ParamPoly.lift(other) - self

    def __mul__(self, other):
        try:
            other = ParamPoly.lift(other)
        except TypeError:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return ParamPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_fraction(other)
        return ParamPoly({m: v / c for m, v in self.terms.items()})

    def __pow__(self, n: int):
        out = ParamPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    # comparisons ------------------------------------------------------------
    def __eq__(self, other):
        try:
            other = ParamPoly.lift(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # inspection -------------------------------------------------------------
    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def subs(self, values: Mapping[str, object]) -> "ParamPoly":
        out = ParamPoly()
        for m, c in self.terms.items():
            term = ParamPoly.const(c)
            for v, e in m:
                term = term * (ParamPoly.lift(values[v]) ** e if v in values
                               else ParamPoly({((v, e),): 1}))
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def simplify(x):
    """Collapse a constant ``ParamPoly`` to a ``Fraction``; leave others alone."""
    if isinstance(x, ParamPoly) and x.is_constant():
        return x.constant_value()
    return x
