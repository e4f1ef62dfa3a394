"""Rescaling of the reduced equation and the sign of Theta.

Under ``eta = lam*u``, ``x = mu*X``, ``t = nu*T`` and multiplication of the
whole equation by ``kappa``, a term with ``p`` factors of ``eta``, ``m``
x-derivatives and ``n`` t-derivatives changes its coefficient by
``kappa * lam^p * mu^-m * nu^-n``.  Taking logarithms of magnitudes turns the
search into a linear system; its left null space consists of products of
coefficients that no scaling can change.  A target is reachable iff every such
invariant agrees between source and target and a sign pattern exists.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from ..errors import ParameterError
from .derivation import ABCDParams, ALPHA_COEFFS, theta_closed_form

#: (name, p = number of eta factors, m = x-derivatives, n = t-derivatives)
TERMS: tuple[tuple[str, int, int, int], ...] = (
    ("eta_tt", 1, 0, 2),
    ("eta_xx", 1, 2, 0),
    ("eta_xxxx", 1, 4, 0),
    ("eta_xxxxxx", 1, 6, 0),
    ("(eta^2)_xx", 2, 2, 0),
    ("(eta^3)_xx", 3, 2, 0),
    ("(eta*eta_xx)_xx", 2, 4, 0),
    ("(eta^2)_xxxx", 2, 4, 0),
)
TERM_NAMES = tuple(t[0] for t in TERMS)


def reduced_coefficients(alpha, beta, theta, variant: str = "corrected") -> dict[str, object]:
    """Coefficients of the reduced second-order equation, all terms on the left."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    return {
        "eta_tt": Fraction(1),
        "eta_xx": Fraction(-1),
        "eta_xxxx": -beta / 3,
        "eta_xxxxxx": beta ** 2 * theta,
        "(eta^2)_xx": -ALPHA_COEFFS[variant] * alpha,
        "(eta^3)_xx": -alpha ** 2 / 2,
        "(eta*eta_xx)_xx": -Fraction(2, 3) * alpha * beta,
        "(eta^2)_xxxx": -Fraction(1, 3) * alpha * beta,
    }


def unit_coefficients(k: int = -1) -> dict[str, Fraction]:
    """``u_tt - u_xx + k u_xxxx - u_xxxxxx - (u^2)_xx - (u^3)_xx - (u u_xx)_xx - (u^2)_xxxx``."""
    out = {name: Fraction(-1) for name in TERM_NAMES}
    out["eta_tt"] = Fraction(1)
    out["eta_xxxx"] = Fraction(k)
    return out


def _exponent_matrix() -> list[list[Fraction]]:
    # columns: log|kappa|, log|lam|, log mu, log nu
    return [[Fraction(1), Fraction(p), Fraction(-m), Fraction(-n)] for _, p, m, n in TERMS]


def invariant_basis() -> list[dict[str, int]]:
    """Integer basis of exponent vectors ``y`` with ``prod c_i^{y_i}`` scaling-invariant.

    Duplicate exponent rows give the plain ratio of the two coefficients.
    """
    M = _exponent_matrix()
    rows, cols = len(M), len(M[0])
    # reduced row echelon form of M^T (cols x rows)
    A = [[M[i][j] for i in range(rows)] for j in range(cols)]
    pivots = []
    r = 0
    for c in range(rows):
        piv = next((i for i in range(r, cols) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        A[r] = [v / A[r][c] for v in A[r]]
        for i in range(cols):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    basis = []
    for j in range(rows):
        if j in pivots:
            continue
        twin = next((i for i in range(j) if M[i] == M[j]), None)
        if twin is not None:
            y = {TERM_NAMES[j]: 1, TERM_NAMES[twin]: -1}
        else:
            vec = [Fraction(0)] * rows
            vec[j] = Fraction(1)
            for row_idx, pc in enumerate(pivots):
                vec[pc] = -A[row_idx][j]
            den = np.lcm.reduce([v.denominator for v in vec])
            y = {TERM_NAMES[i]: int(v * den) for i, v in enumerate(vec) if v}
        basis.append(y)
    return basis


def _invariant_value(coeffs: Mapping[str, object], y: Mapping[str, int]):
    val = Fraction(1) if all(isinstance(coeffs[n], (int, Fraction)) for n in y) else 1.0
    for name, e in y.items():
        c = coeffs[name]
        c = abs(Fraction(c)) if isinstance(val, Fraction) else abs(float(c))
        val = val * c ** e
    return val


def describe_invariant(y: Mapping[str, int]) -> str:
    return " * ".join(f"|c[{n}]|^{e}" for n, e in y.items())


@dataclass(frozen=True)
class InvariantCheck:
    exponents: dict
    source: object
    target: object
    agrees: bool

    def describe(self) -> str:
        return describe_invariant(self.exponents)


@dataclass(frozen=True)
class RescalingResult:
    feasible: bool
    lam: float | None
    mu: float | None
    nu: float | None
    kappa: float | None
    invariants: tuple[InvariantCheck, ...]
    sign_feasible: bool

    @property
    def certificate(self) -> tuple[InvariantCheck, ...]:
        """Invariants whose source and target values differ."""
        return tuple(inv for inv in self.invariants if not inv.agrees)


def coefficient_ratio(coeffs: Mapping[str, object]):
    """``c[(eta^2)_xxxx] / c[(eta*eta_xx)_xx]``, unchanged by every rescaling."""
    return coeffs["(eta^2)_xxxx"] / coeffs["(eta*eta_xx)_xx"]


def solve_rescaling(source: Mapping[str, object], target: Mapping[str, object] | None = None,
                    rtol: float = 1e-9) -> RescalingResult:
    """Find ``(lam, mu, nu, kappa)`` mapping ``source`` coefficients onto ``target``.

    Returns the explicit scaling when one exists; otherwise ``feasible`` is
    False and ``certificate`` lists the violated invariants (or
    ``sign_feasible`` is False).
    """
    target = unit_coefficients() if target is None else target
    for name in TERM_NAMES:
        if name not in source or name not in target:
            raise ParameterError(f"missing coefficient for {name}")
        if (source[name] == 0) != (target[name] == 0):
            raise ParameterError(f"{name}: a zero coefficient cannot be rescaled to a nonzero one")
    active = [t for t in TERMS if source[t[0]] != 0]

    checks = []
    for y in invariant_basis():
        if any(source[n] == 0 for n in y):
            continue
        s, t = _invariant_value(source, y), _invariant_value(target, y)
        if isinstance(s, Fraction) and isinstance(t, Fraction):
            ok = s == t
        else:
            ok = abs(np.log(float(s)) - np.log(float(t))) <= rtol
        checks.append(InvariantCheck(dict(y), s, t, ok))

    signs = None
    for s_kappa in (1, -1):
        for s_lam in (1, -1):
            if all(np.sign(float(target[n])) == s_kappa * np.sign(float(source[n])) * s_lam ** p
                   for n, p, _, _ in active):
                signs = (s_kappa, s_lam)
                break
        if signs:
            break

    feasible = signs is not None and all(c.agrees for c in checks)
    lam = mu = nu = kappa = None
    if feasible:
        A = np.array([[1.0, p, -m, -n] for _, p, m, n in active])
        rhs = np.array([np.log(abs(float(target[n]))) - np.log(abs(float(source[n])))
                        for n, _, _, _ in active])
        z, *_ = np.linalg.lstsq(A, rhs, rcond=None)
        kappa = signs[0] * float(np.exp(z[0]))
        lam = signs[1] * float(np.exp(z[1]))
        mu, nu = float(np.exp(z[2])), float(np.exp(z[3]))
    return RescalingResult(feasible, lam, mu, nu, kappa, tuple(checks), signs is not None)


def apply_scaling(source: Mapping[str, object], lam: float, mu: float, nu: float,
                  kappa: float = 1.0) -> dict[str, float]:
    return {n: kappa * float(source[n]) * lam ** p * mu ** (-m) * nu ** (-n_t)
            for n, p, m, n_t in TERMS}


@dataclass(frozen=True)
class ThetaSurvey:
    n_samples: int
    negative: int
    zero: int
    positive: int
    positive_examples: tuple

    @property
    def fraction_negative(self) -> float:
        return self.negative / self.n_samples


def theta_sign_survey(n_samples: int = 1000, seed: int = 0, span: int = 2,
                      max_den: int = 12, keep: int = 5) -> ThetaSurvey:
    """Sample the constraint surface and count the sign of Theta."""
    if n_samples < 1:
        raise ParameterError("n_samples must be >= 1")
    rng = random.Random(seed)
    neg = zero = pos = 0
    examples = []
    for _ in range(n_samples):
        p = ABCDParams.random(rng, max_den=max_den, span=span)
        th = theta_closed_form(p)
        if th < 0:
            neg += 1
        elif th == 0:
            zero += 1
        else:
            pos += 1
            if len(examples) < keep:
                examples.append(p)
    return ThetaSurvey(n_samples, neg, zero, pos, tuple(examples))
