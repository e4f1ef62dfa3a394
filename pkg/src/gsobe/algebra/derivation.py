"""Replay of the weakly nonlinear reduction from the abcd Boussinesq system to a
single sixth-order equation for the surface elevation ``eta``.

Pipeline:

1. write the two balance laws (mass, momentum) with their alpha*beta and
   beta^2 corrections;
2. cross-differentiate, ``d_t(mass) - d_x(momentum)``;
3. solve for the first-order corrections ``w = eta + alpha*A + beta*B`` and
   ``eta_t = -eta_x + alpha*C + beta*D`` by matching coefficients;
4. eliminate ``w`` and then every time derivative of order one from the
   ``O(alpha, beta)`` part;
5. compare with the closed-form target

       eta_tt - eta_xx - beta/3 eta_xxxx - 3/2 alpha (eta^2)_xx
       + beta^2 Theta eta_xxxxxx - 1/2 alpha^2 (eta^3)_xx
       - alpha beta [2/3 (eta eta_xx)_xx + 1/3 (eta^2)_xxxx].

Everything is exact.  Parameters may be rationals or :class:`ParamPoly`
symbols, in which case the comparison is an identity in those symbols.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, fields
from fractions import Fraction

from ..errors import ParameterError, StructuralError, VerificationFailure
from .diffpoly import (ALPHA, BETA, ETA, OrderIdeal, SubstitutionRule, DiffPoly, W,
                       dp_substitute, dp_truncate, eta, format_key, w)
from .parampoly import ParamPoly, as_fraction, simplify

THIRD = Fraction(1, 3)
SECOND_ORDER = OrderIdeal(3)
FIRST_ORDER = OrderIdeal(2)

#: coefficient of alpha*(eta^2)_xx in the target; "printed" is the 2/3 variant
ALPHA_COEFFS = {"corrected": Fraction(3, 2), "printed": Fraction(2, 3)}


def _param(x):
    return x if isinstance(x, ParamPoly) else as_fraction(x)


@dataclass(frozen=True)
class ABCDParams:
    a: object = Fraction(1, 12)
    b: object = Fraction(1, 12)
    c: object = Fraction(1, 12)
    d: object = Fraction(1, 12)
    a1: object = Fraction(0)
    b1: object = Fraction(0)
    c1: object = Fraction(0)
    d1: object = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _param(getattr(self, f.name)))
        total = self.a + self.b + self.c + self.d
        if simplify(total - THIRD) != 0:
            raise ParameterError(f"a + b + c + d must equal 1/3, got {total}")

    @classmethod
    def symbolic(cls) -> "ABCDParams":
        """Free symbols ``a, b, c, a1, b1, c1, d1`` with ``d = 1/3 - a - b - c``."""
        a, b, c = (ParamPoly.var(n) for n in "abc")
        return cls(a, b, c, THIRD - a - b - c,
                   *(ParamPoly.var(n) for n in ("a1", "b1", "c1", "d1")))

    @classmethod
    def random(cls, rng: random.Random, max_den: int = 12, span: int = 2) -> "ABCDParams":
        """Random rationals on the constraint surface (``d`` is solved for)."""
        def draw():
            den = rng.randint(1, max_den)
            return Fraction(rng.randint(-span * den, span * den), den)
        a, b, c = draw(), draw(), draw()
        return cls(a, b, c, THIRD - a - b - c, draw(), draw(), draw(), draw())

    def is_symbolic(self) -> bool:
        return any(isinstance(getattr(self, f.name), ParamPoly) for f in fields(self))


# -- the system ---------------------------------------------------------------

def mass_equation(p: ABCDParams) -> DiffPoly:
    return (eta(0, 1) + w(1) + BETA * (p.a * w(3) - p.b * eta(2, 1))
            + BETA ** 2 * (p.a1 * w(5) + p.b1 * eta(4, 1))
            + ALPHA * (ETA * W).dx()
            - ALPHA * BETA * (p.b * (ETA * W).dx(3) - (p.a + p.b - THIRD) * (ETA * w(2)).dx()))


def momentum_equation(p: ABCDParams) -> DiffPoly:
    """Momentum balance; the beta^2 terms carry five derivatives
    (``c1 eta_xxxxx + d1 w_xxxxt``), matching the mass equation's order."""
    return (w(0, 1) + eta(1) + BETA * (p.c * eta(3) - p.d * w(2, 1))
            + BETA ** 2 * (p.c1 * eta(5) + p.d1 * w(4, 1))
            + ALPHA * W * w(1)
            - ALPHA * BETA * ((p.c + p.d) * W * w(3) - p.c * (W * w(1)).dx(2)
                              - (ETA * eta(2)).dx() + (p.c + p.d - 1) * w(1) * w(2)))


def cross_differentiate(p: ABCDParams, ideal: OrderIdeal = SECOND_ORDER) -> DiffPoly:
    """``d_t(mass) - d_x(momentum)``; the linear ``w_xt`` terms cancel."""
    return dp_truncate(mass_equation(p).dt() - momentum_equation(p).dx(), ideal)


# -- first-order corrections --------------------------------------------------

@dataclass(frozen=True)
class Corrections:
    """``w = eta + alpha*A*eta^2 + beta*B*eta_xx``,
    ``eta_t = -eta_x + alpha*C*eta*eta_x + beta*D*eta_xxx``."""
    A: object
    B: object
    C: object
    D: object

    def w_rule(self) -> SubstitutionRule:
        return SubstitutionRule(("w", 0, 0), w_replacement(self.A, self.B), error_order=2)

    def eta_t_rule(self) -> SubstitutionRule:
        return SubstitutionRule(("eta", 0, 1), eta_t_replacement(self.C, self.D), error_order=2)


def w_replacement(A, B) -> DiffPoly:
    return ETA + ALPHA * A * ETA ** 2 + BETA * B * eta(2)


def eta_t_replacement(C, D) -> DiffPoly:
    return -eta(1) + ALPHA * C * ETA * eta(1) + BETA * D * eta(3)


_UNKNOWNS = ("A0", "B0", "C0", "D0")


def _split_linear(coef, unknowns):
    """Write ``coef = sum_u row[u]*u + rest`` with constant ``row[u]``."""
    poly = ParamPoly.lift(coef)
    row: dict[str, Fraction] = {}
    rest = ParamPoly()
    for mono, c in poly.terms.items():
        hits = [(v, e) for v, e in mono if v in unknowns]
        if not hits:
            rest = rest + ParamPoly({mono: c})
            continue
        if len(hits) > 1 or hits[0][1] != 1 or len(mono) != 1:
            raise StructuralError(f"ansatz equation is not linear with constant coefficients: {poly}")
        row[hits[0][0]] = row.get(hits[0][0], Fraction(0)) + c
    return row, rest


def _solve_linear(equations, unknowns):
    """Gaussian elimination for ``row . x + rest = 0`` with rational pivots."""
    rows = [(dict(r), ParamPoly.lift(rest)) for r, rest in equations]
    solution: dict[str, object] = {}
    pivots = []
    for u in unknowns:
        idx = next((i for i, (r, _) in enumerate(rows) if r.get(u)), None)
        if idx is None:
            raise VerificationFailure(f"ansatz leaves {u} undetermined")
        prow, prest = rows.pop(idx)
        piv = prow[u]
        prow = {v: c / piv for v, c in prow.items()}
        prest = prest / piv
        new_rows = []
        for r, rest in rows:
            f = r.get(u)
            if f:
                r = {v: r.get(v, 0) - f * prow.get(v, 0) for v in set(r) | set(prow)}
                r = {v: c for v, c in r.items() if c}
                rest = rest - prest * f
            new_rows.append((r, rest))
        rows = new_rows
        pivots.append((u, prow, prest))
    for r, rest in rows:
        if r or rest:
            raise VerificationFailure(f"inconsistent ansatz equation: {r} + {rest} = 0")
    for u, prow, prest in reversed(pivots):
        val = -prest
        for v, c in prow.items():
            if v != u:
                val = val - c * solution[v]
        solution[u] = simplify(val)
    return solution


def solve_corrections(p: ABCDParams) -> Corrections:
    """Determine A, B, C, D by requiring both balance laws to hold to ``O(alpha, beta)``."""
    A0, B0, C0, D0 = (ParamPoly.var(u) for u in _UNKNOWNS)
    trial = Corrections(A0, B0, C0, D0)
    equations = []
    for eq in (mass_equation(p), momentum_equation(p)):
        reduced = dp_substitute(dp_substitute(eq, trial.w_rule(), FIRST_ORDER),
                                trial.eta_t_rule(), FIRST_ORDER)
        for key, coef in reduced.terms.items():
            equations.append(_split_linear(coef, _UNKNOWNS))
    sol = _solve_linear(equations, _UNKNOWNS)
    return Corrections(*(sol[u] for u in _UNKNOWNS))


# -- reduction and targets ----------------------------------------------------

def reduce_system(p: ABCDParams, corr: Corrections | None = None) -> DiffPoly:
    """Single equation for ``eta`` to second order (``eta_tt`` kept)."""
    corr = solve_corrections(p) if corr is None else corr
    e = dp_substitute(cross_differentiate(p), corr.w_rule())
    e = dp_substitute(e, corr.eta_t_rule())
    leftovers = [f for f in e.fields() if f[0] == "w" or (f[2] and f != ("eta", 0, 2))]
    if leftovers:
        raise StructuralError(f"reduction left unresolved factors {leftovers}")
    return e


def theta_closed_form(p: ABCDParams):
    """``1/2 (a+d)(a+b-c-d) - (a1-b1+c1-d1) - (a+d)/6 - b/3``."""
    return simplify((p.a + p.d) * (p.a + p.b - p.c - p.d) * Fraction(1, 2)
                    - (p.a1 - p.b1 + p.c1 - p.d1)
                    - (p.a + p.d) * Fraction(1, 6) - p.b * THIRD)


def target_equation(theta, variant: str = "corrected") -> DiffPoly:
    if variant not in ALPHA_COEFFS:
        raise ParameterError(f"unknown target variant {variant!r}")
    kappa = ALPHA_COEFFS[variant]
    return (eta(0, 2) - eta(2) - THIRD * BETA * eta(4)
            - kappa * ALPHA * (ETA ** 2).dx(2)
            + BETA ** 2 * theta * eta(6)
            - Fraction(1, 2) * ALPHA ** 2 * (ETA ** 3).dx(2)
            - ALPHA * BETA * (Fraction(2, 3) * (ETA * eta(2)).dx(2) + THIRD * (ETA ** 2).dx(4)))


def reduction_residual(p: ABCDParams, variant: str = "corrected") -> DiffPoly:
    return reduce_system(p) - target_equation(theta_closed_form(p), variant)


def verify_reduction(p: ABCDParams, variant: str = "corrected") -> DiffPoly:
    """Residual of the reduction against the target; raises if it is not zero."""
    res = reduction_residual(p, variant)
    if not res.is_zero():
        raise VerificationFailure(
            f"reduction residual has {len(res.terms)} nonzero term(s)", residual_terms(res))
    return res


def residual_terms(res: DiffPoly) -> list[tuple[str, str]]:
    return [(format_key(k), str(c)) for k, c in res.items()]


def pipeline_theta(p: ABCDParams):
    """Coefficient of ``beta^2 eta_xxxxxx`` produced by the reduction."""
    return reduce_system(p).coefficient(BETA ** 2 * eta(6))


def theta_1(p: ABCDParams):
    return simplify((p.a + p.d) * (p.a + p.b - p.c - p.d) * Fraction(1, 2)
                    - (p.a1 - p.b1 + p.c1 - p.d1))


def intermediate_form(p: ABCDParams) -> DiffPoly:
    """The reduced equation before eliminating ``eta_t`` from the O(alpha, beta)
    terms (only ``w`` has been replaced and ``alpha``-corrections collected)."""
    return (eta(0, 2) - eta(2)
            + BETA * ((p.a + p.d) * eta(3, 1) - p.b * eta(2, 2) - p.c * eta(4))
            + ALPHA * ((ETA ** 2).dx().dt() - Fraction(1, 2) * (ETA ** 2).dx(2))
            + BETA ** 2 * theta_1(p) * eta(6)
            + ALPHA ** 2 * Fraction(1, 2) * (ETA ** 3).dx(2)
            + ALPHA * BETA * ((p.c + p.d) * (ETA * eta(3)).dx()
                              + (p.c + p.d - 1) * (eta(1) * eta(2)).dx()
                              - (p.c + p.d + Fraction(2, 3)) * (ETA * eta(2)).dx(2)
                              + Fraction(1, 4) * (p.a + 4 * p.b - 2 * p.c + p.d) * (ETA ** 2).dx(4)))


@dataclass(frozen=True)
class ReductionReport:
    variant: str
    residual: DiffPoly
    theta_pipeline: object
    theta_closed: object

    @property
    def is_zero(self) -> bool:
        return self.residual.is_zero()

    @property
    def theta_matches(self) -> bool:
        return simplify(ParamPoly.lift(self.theta_pipeline) - self.theta_closed) == 0

    def lines(self) -> list[str]:
        out = [f"target: {self.variant}",
               f"theta (reduction): {self.theta_pipeline}",
               f"theta (closed form): {self.theta_closed}",
               f"theta match: {'yes' if self.theta_matches else 'no'}"]
        if self.is_zero:
            out.append("residual: ZERO")
        else:
            out.append(f"residual: NONZERO ({len(self.residual.terms)} terms)")
            out.extend(f"  {term}: {coef}" for term, coef in residual_terms(self.residual))
        return out


def reduction_report(p: ABCDParams, variant: str = "corrected") -> ReductionReport:
    reduced = reduce_system(p)
    closed = theta_closed_form(p)
    res = reduced - target_equation(closed, variant)
    return ReductionReport(variant, res, reduced.coefficient(BETA ** 2 * eta(6)), closed)
