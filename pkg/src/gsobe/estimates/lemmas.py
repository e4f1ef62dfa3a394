"""Numerical checks of three elementary integral bounds.

* two-centre bound: ``int dx / (<x-c1>^rho <x-c2>^gamma) <~ <c1-c2>^-gamma phi_rho(c1-c2)``
  for ``rho >= gamma >= 0``, ``rho + gamma > 1``;
* shifted quadratic: ``int dx / <c2 x^2 + c1 x + c0>^p <~ |c2|^-1/2 <c0 - c1^2/(4 c2)>^-1/2``
  for ``p > 1``;
* plain polynomial: the same integral is ``<~ |c2|^-1/2`` for ``p > 1/2`` and
  ``<~ |c3|^-1/3`` for a cubic with ``p > 1/3``.

Each check integrates the left side by adaptive quadrature split at the
centres, real roots and critical points, and records the empirical constant
``C = LHS / RHS`` per sample.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..dispersion import japanese
from ..errors import ParameterError

SHIFTED = "shifted"
PLAIN = "plain"


def phi_rho(a, rho: float):
    """1 for ``rho > 1``, ``log(1 + <a>)`` at ``rho = 1``, ``<a>^{1-rho}`` below."""
    if rho > 1:
        return np.ones_like(np.asarray(a, dtype=float)) * 1.0
    if rho == 1:
        return np.log1p(japanese(a))
    return japanese(a) ** (1.0 - rho)


def integrate_line(f, points=()) -> float:
    """``int_R f`` split at ``points``, with infinite tails."""
    pts = np.unique(np.asarray([p for p in points if np.isfinite(p)], dtype=float))
    if pts.size == 0:
        pts = np.array([0.0])
    edges = [-np.inf, *pts, np.inf]
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(f, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-10)
            total += val
    return total


@dataclass(frozen=True)
class LemmaReport:
    name: str
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def constants(self) -> np.ndarray:
        return self.lhs / self.rhs

    @property
    def max_constant(self) -> float:
        return float(np.max(self.constants))

    @property
    def median_constant(self) -> float:
        return float(np.median(self.constants))

    def outliers(self, factor: float = 10.0) -> np.ndarray:
        """Indices whose constant exceeds ``factor`` times the running median."""
        c = self.constants
        bad = [i for i in range(c.size) if c[i] > factor * np.median(c[: i + 1])]
        return np.asarray(bad, dtype=int)

    def holds_with(self, C: float) -> bool:
        return bool(np.all(self.lhs <= C * self.rhs))


def two_centre_integral(c1: float, c2: float, rho: float, gamma: float) -> float:
    f = lambda x: japanese(x - c1) ** -rho * japanese(x - c2) ** -gamma
    return integrate_line(f, (c1, c2, 0.5 * (c1 + c2)))


def two_centre_check(rho: float, gamma: float, samples) -> LemmaReport:
    """Two-centre bound over the ``(c1, c2)`` pairs in ``samples``."""
    if not (rho >= gamma >= 0 and rho + gamma > 1):
        raise ParameterError(f"need rho >= gamma >= 0 and rho + gamma > 1, got rho={rho}, gamma={gamma}")
    pairs = np.atleast_2d(np.asarray(samples, dtype=float))
    if pairs.shape[1] != 2:
        raise ParameterError("samples must be (c1, c2) pairs")
    lhs = np.array([two_centre_integral(c1, c2, rho, gamma) for c1, c2 in pairs])
    a = pairs[:, 0] - pairs[:, 1]
    rhs = japanese(a) ** -gamma * phi_rho(a, rho)
    return LemmaReport(f"two-centre rho={rho:g} gamma={gamma:g}", lhs, rhs)


def polynomial_integral(coeffs, p: float) -> float:
    """``int dx / <P(x)>^p`` with ``coeffs = (c0, c1, ..., cd)``."""
    c = np.asarray(coeffs, dtype=float)
    poly = np.polynomial.Polynomial(c)
    pts = [0.0]
    for q in (poly, poly.deriv()):
        if q.degree() >= 1:
            r = q.roots()
            pts.extend(r[np.abs(r.imag) <= 1e-9 * (1 + np.abs(r.real))].real)
    f = lambda x: japanese(poly(x)) ** -p
    return integrate_line(f, pts)


def _norm_coeffs(coeffs):
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    if c.shape[1] not in (3, 4):
        raise ParameterError("coefficients must be (c0, c1, c2) or (c0, c1, c2, c3)")
    if np.any(c[:, -1] == 0):
        raise ParameterError("leading coefficient must be nonzero")
    return c


def polynomial_check(coeffs, p: float, bound: str | None = None) -> LemmaReport:
    """Polynomial bounds for one coefficient tuple or a batch of them.

    ``bound`` selects ``"shifted"`` (quadratic, ``p > 1``) or ``"plain"``
    (quadratic ``p > 1/2``, cubic ``p > 1/3``); the default is the shifted
    bound when it applies.
    """
    c = _norm_coeffs(coeffs)
    degree = c.shape[1] - 1
    if bound is None:
        bound = SHIFTED if degree == 2 and p > 1 else PLAIN
    if bound == SHIFTED:
        if degree != 2:
            raise ParameterError("the shifted bound applies to quadratics only")
        if not p > 1:
            raise ParameterError(f"shifted quadratic bound needs p > 1, got {p}")
        rhs = 1.0 / (np.sqrt(np.abs(c[:, 2])) * np.sqrt(japanese(c[:, 0] - c[:, 1] ** 2 / (4 * c[:, 2]))))
    elif bound == PLAIN:
        threshold = 0.5 if degree == 2 else 1.0 / 3.0
        if not p > threshold:
            raise ParameterError(f"degree-{degree} bound needs p > {threshold:.4g}, got {p}")
        rhs = np.abs(c[:, -1]) ** (-1.0 / degree)
    else:
        raise ParameterError(f"unknown bound {bound!r}")
    lhs = np.array([polynomial_integral(row, p) for row in c])
    return LemmaReport(f"degree-{degree} {bound} p={p:g}", lhs, rhs)


def cubic_scaling(c3_values=(1.0, 8.0, 64.0), p: float = 1.0, lower=(0.0, 0.0, 0.0)) -> np.ndarray:
    """``LHS(c3) * |c3|^{1/3} / LHS(1)`` with lower coefficients scaled as
    ``c_i |c3|^{i/3}`` (an exact invariance of the integral, so ideally 1)."""
    base = polynomial_integral((*lower, 1.0), p)
    out = []
    for c3 in c3_values:
        s = abs(c3) ** (1.0 / 3.0)
        row = [lower[i] * s ** i for i in range(3)] + [c3]
        out.append(polynomial_integral(row, p) * s / base)
    return np.asarray(out)


def random_two_centre(rng: np.random.Generator, size: int, spread: float = 50.0) -> np.ndarray:
    c1 = rng.uniform(-spread, spread, size)
    return np.column_stack([c1, c1 + rng.uniform(-spread, spread, size)])


def random_polynomials(rng: np.random.Generator, size: int, degree: int,
                       spread: float = 20.0) -> np.ndarray:
    c = rng.uniform(-spread, spread, (size, degree + 1))
    lead = rng.uniform(0.1, 10.0, size) * rng.choice([-1.0, 1.0], size)
    c[:, -1] = lead
    return c


# names used by the published interface
lemma1_check = two_centre_check
lemma23_check = polynomial_check
