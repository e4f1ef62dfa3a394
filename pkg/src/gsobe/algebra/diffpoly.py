"""Differential polynomials in two fields ``eta`` and ``w`` over exact rationals.

A monomial is ``alpha^p beta^q * prod_i d_x^{m_i} d_t^{n_i} f_i`` stored under the
key ``(p, q, factors)``, where ``factors`` is the sorted tuple of
``(field, m_i, n_i)``.  Keys are canonical, so two polynomials are equal as
expressions iff their term dictionaries are equal; chain-rule identities such
as ``eta*eta_xxx - (eta^2)_xxx / 2 + 3/2 (eta_x^2)_x`` collapse to the empty
dictionary after expansion.

Coefficients are ``Fraction`` or :class:`ParamPoly` (for symbolic parameters).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..errors import ParameterError, StructuralError
from .parampoly import ParamPoly, as_fraction, simplify

FIELDS = ("eta", "w")
Factor = tuple[str, int, int]
Key = tuple[int, int, tuple[Factor, ...]]


def _coeff(c):
    if isinstance(c, ParamPoly):
        return simplify(c)
    return as_fraction(c)


class DiffPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[Key, object] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            c = _coeff(c)
            if c:
                clean[key] = c
        self.terms: dict[Key, object] = clean

    # constructors -------------------------------------------------------------
    @classmethod
    def field(cls, name: str, nx: int = 0, nt: int = 0) -> "DiffPoly":
        if name not in FIELDS:
            raise ParameterError(f"unknown field {name!r}")
        if nx < 0 or nt < 0:
            raise ParameterError("derivative orders must be nonnegative")
        return cls({(0, 0, ((name, nx, nt),)): 1})

    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({(0, 0, ()): c})

    @classmethod
    def small(cls, p: int = 0, q: int = 0) -> "DiffPoly":
        """``alpha**p * beta**q``."""
        return cls({(p, q, ()): 1})

    @staticmethod
    def lift(x) -> "DiffPoly":
        return x if isinstance(x, DiffPoly) else DiffPoly.const(x)

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, DiffPoly):
            try:
                other = DiffPoly.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-DiffPoly.lift(other))

    def __rsub__(self, other):
        return DiffPoly.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            try:
                other = _coeff(other)
            except TypeError:
                return NotImplemented
            return DiffPoly({k: c * other for k, c in self.terms.items()})
        out: dict[Key, object] = {}
        for (p1, q1, f1), c1 in self.terms.items():
            for (p2, q2, f2), c2 in other.terms.items():
                k = (p1 + p2, q1 + q2, tuple(sorted(f1 + f2)))
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = DiffPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            try:
                other = DiffPoly.lift(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((k, str(c)) for k, c in self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # calculus -----------------------------------------------------------------
    def dx(self, n: int = 1) -> "DiffPoly":
        out = self
        for _ in range(n):
            out = dp_differentiate(out, "x")
        return out

    def dt(self, n: int = 1) -> "DiffPoly":
        out = self
        for _ in range(n):
            out = dp_differentiate(out, "t")
        return out

    # inspection ---------------------------------------------------------------
    def coefficient(self, monomial: "DiffPoly"):
        """Coefficient of the single-term polynomial ``monomial`` (its own
        coefficient is divided out)."""
        if len(monomial.terms) != 1:
            raise StructuralError("coefficient() expects a single monomial")
        (key, c), = monomial.terms.items()
        if isinstance(c, ParamPoly):
            raise StructuralError("monomial coefficient must be a plain rational")
        return _coeff(self.terms.get(key, Fraction(0)) * (1 / c))

    def max_order(self) -> int:
        return max((p + q for p, q, _ in self.terms), default=0)

    def fields(self) -> set[Factor]:
        return {f for _, _, fs in self.terms for f in fs}

    def has_time_derivatives(self) -> bool:
        return any(nt for _, _, nt in self.fields())

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{format_key(k)}" for k, c in self.items())


def _sort_key(key: Key):
    p, q, fs = key
    return (p + q, p, q, len(fs), fs)


def format_factor(f: Factor) -> str:
    name, nx, nt = f
    sub = "x" * nx + "t" * nt
    return f"{name}_{sub}" if sub else name


def format_key(key: Key) -> str:
    p, q, fs = key
    parts = []
    if p:
        parts.append("alpha" if p == 1 else f"alpha^{p}")
    if q:
        parts.append("beta" if q == 1 else f"beta^{q}")
    parts.extend(format_factor(f) for f in fs)
    return "*".join(parts) or "1"


def dp_differentiate(p: DiffPoly, var: str) -> DiffPoly:
    """Leibniz rule in ``x`` or ``t``; alpha and beta are constants."""
    if var not in ("x", "t"):
        raise ParameterError(f"var must be 'x' or 't', got {var!r}")
    out: dict[Key, object] = {}
    for (pa, qb, fs), c in p.terms.items():
        for i, (name, nx, nt) in enumerate(fs):
            g = (name, nx + 1, nt) if var == "x" else (name, nx, nt + 1)
            k = (pa, qb, tuple(sorted(fs[:i] + (g,) + fs[i + 1:])))
            out[k] = out[k] + c if k in out else c
    return DiffPoly(out)


@dataclass(frozen=True)
class OrderIdeal:
    """Drops every monomial with ``p + q >= cutoff``."""
    cutoff: int = 3

    def __post_init__(self):
        if self.cutoff < 1:
            raise ParameterError("cutoff must be >= 1")

    def drops(self, p: int, q: int) -> bool:
        return p + q >= self.cutoff


def dp_truncate(p: DiffPoly, ideal: OrderIdeal = OrderIdeal()) -> DiffPoly:
    return DiffPoly({k: c for k, c in p.terms.items() if not ideal.drops(k[0], k[1])})


@dataclass
class SubstitutionRule:
    """``head -> replacement``, valid up to terms of order ``error_order``.

    The head is a field marker ``(name, mx, mt)``; a factor ``(name, nx, nt)``
    with ``nx >= mx`` and ``nt >= mt`` is replaced by
    ``d_x^{nx-mx} d_t^{nt-mt} replacement``.  Inside a monomial of order ``d``
    the rule is used only when ``d + error_order`` reaches the truncation
    cutoff, i.e. when the neglected terms are themselves negligible.
    """
    head: Factor
    replacement: DiffPoly
    error_order: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        name, mx, mt = self.head
        if name not in FIELDS or mx < 0 or mt < 0:
            raise ParameterError(f"invalid head {self.head!r}")
        if self.error_order < 1:
            raise ParameterError("error_order must be >= 1")
        if any(self.matches(f) for f in self.replacement.fields()):
            raise StructuralError(
                f"recursive rule: replacement contains {format_factor(self.head)} or a derivative of it")

    def matches(self, f: Factor) -> bool:
        name, mx, mt = self.head
        return f[0] == name and f[1] >= mx and f[2] >= mt

    def expansion(self, f: Factor) -> DiffPoly:
        ex, et = f[1] - self.head[1], f[2] - self.head[2]
        if (ex, et) not in self._cache:
            self._cache[(ex, et)] = self.replacement.dx(ex).dt(et)
        return self._cache[(ex, et)]


def dp_substitute(p: DiffPoly, rule: SubstitutionRule, ideal: OrderIdeal = OrderIdeal(),
                  max_rounds: int = 64) -> DiffPoly:
    """Apply ``rule`` until no admissible head remains, truncating by ``ideal``."""
    current = dp_truncate(p, ideal)
    for _ in range(max_rounds):
        out = DiffPoly()
        changed = False
        for key, c in current.terms.items():
            pa, qb, fs = key
            hit = None
            if pa + qb + rule.error_order >= ideal.cutoff:
                hit = next((i for i, f in enumerate(fs) if rule.matches(f)), None)
            if hit is None:
                out = out + DiffPoly({key: c})
                continue
            changed = True
            rest = DiffPoly({(pa, qb, fs[:hit] + fs[hit + 1:]): c})
            out = out + dp_truncate(rest * dp_truncate(rule.expansion(fs[hit]), ideal), ideal)
        current = out
        if not changed:
            return current
    raise StructuralError("substitution did not terminate")


def dp_substitute_all(p: DiffPoly, rules: Iterable[SubstitutionRule],
                      ideal: OrderIdeal = OrderIdeal()) -> DiffPoly:
    for rule in rules:
        p = dp_substitute(p, rule, ideal)
    return p


# convenient atoms
ETA = DiffPoly.field("eta")
W = DiffPoly.field("w")
ALPHA = DiffPoly.small(1, 0)
BETA = DiffPoly.small(0, 1)
ONE = DiffPoly.const(1)


def eta(nx: int = 0, nt: int = 0) -> DiffPoly:
    return DiffPoly.field("eta", nx, nt)


def w(nx: int = 0, nt: int = 0) -> DiffPoly:
    return DiffPoly.field("w", nx, nt)
