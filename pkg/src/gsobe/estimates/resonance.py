"""Modulations and the three-wave resonance function on ``xi1+xi2+xi3 = 0``.

With the cubic surrogate ``c(xi) = |xi|^3 + (k/2)|xi|`` and a branch sign
``sigma`` equal to the sign of ``tau``,

    L(tau, xi) = tau - sigma * c(xi),      |L| = ||tau| - c(xi)|,

and on ``tau1 + tau2 + tau3 = 0`` the resonance function
``H = L1 + L2 + L3 = -sum sigma_i c(xi_i)`` no longer depends on the ``tau_i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..dispersion import check_k, cubic_surrogate
from ..errors import ParameterError, UnsupportedRegionError

TAU_PATTERNS = {
    "A": (1, 1, -1), "B": (1, -1, 1), "C": (1, -1, -1),
    "D": (-1, 1, 1), "E": (-1, 1, -1), "F": (-1, -1, 1),
}
XI_PATTERNS = {
    "a": (1, 1, -1), "b": (1, -1, -1), "c": (-1, 1, -1),
    "d": (-1, -1, 1), "e": (-1, 1, 1), "f": (1, -1, 1),
}


@dataclass(frozen=True)
class SignRegion:
    """A sign pattern for the ``tau_i`` (``A``..``F``) and for the ``xi_i`` (``a``..``f``).

    Every listed pattern mixes signs, so each is compatible with both sums
    vanishing.
    """
    tau_pattern: str
    xi_pattern: str

    def __post_init__(self):
        if self.tau_pattern not in TAU_PATTERNS:
            raise ParameterError(f"unknown tau pattern {self.tau_pattern!r}")
        if self.xi_pattern not in XI_PATTERNS:
            raise ParameterError(f"unknown xi pattern {self.xi_pattern!r}")

    @classmethod
    def parse(cls, label: str) -> "SignRegion":
        """``"A/a"`` or ``"A(a)"`` style labels."""
        s = label.replace("(", "/").replace(")", "").replace(" ", "")
        t, _, x = s.partition("/")
        return cls(t, x)

    @property
    def branches(self) -> tuple[int, int, int]:
        return TAU_PATTERNS[self.tau_pattern]

    @property
    def xi_signs(self) -> tuple[int, int, int]:
        return XI_PATTERNS[self.xi_pattern]

    def contains_xi(self, xis) -> bool:
        return all(s * x >= 0 for s, x in zip(self.xi_signs, xis))

    def contains_tau(self, taus) -> bool:
        return all(s * t >= 0 for s, t in zip(self.branches, taus))

    def __str__(self):
        return f"{self.tau_pattern}/({self.xi_pattern})"


def L_value(tau, xi, k: int, branch_sign: int):
    """``tau - sigma (|xi|^3 + (k/2)|xi|)`` for the branch ``sigma = +-1``."""
    if branch_sign not in (1, -1):
        raise ParameterError(f"branch_sign must be +1 or -1, got {branch_sign!r}")
    return tau - branch_sign * cubic_surrogate(xi, check_k(k))


def _check_triple(xis, region: SignRegion, tol: float):
    scale = max(1.0, max(abs(float(x)) for x in xis))
    if abs(float(sum(xis))) > tol * scale:
        raise ParameterError(f"frequencies must sum to zero, got {xis}")
    if not region.contains_xi(xis):
        raise ParameterError(f"{xis} is not in xi pattern ({region.xi_pattern})")


def resonance_from_L(xi1, xi2, xi3, region: SignRegion, k: int, taus=None, tol: float = 1e-12):
    """``L1 + L2 + L3``; with ``taus=None`` the (cancelling) ``tau_i`` are omitted."""
    xis = (xi1, xi2, xi3)
    _check_triple(xis, region, tol)
    if taus is None:
        taus = (0.0, 0.0, 0.0)
    else:
        scale = max(1.0, max(abs(float(t)) for t in taus))
        if abs(float(sum(taus))) > tol * scale:
            raise ParameterError(f"taus must sum to zero, got {taus}")
        if not region.contains_tau(taus):
            raise ParameterError(f"{taus} is not in tau pattern {region.tau_pattern}")
    return sum(L_value(t, x, k, s) for t, x, s in zip(taus, xis, region.branches))


# closed forms, valid for either sign of k
def _A_a(x1, x2, x3, k):
    return 3 * x1 * x2 * (x1 + x2)


def _A_b(x1, x2, x3, k):
    return x2 * (3 * x1 ** 2 + 3 * x1 * x2 + 2 * x2 ** 2 + k)


def _A_c(x1, x2, x3, k):
    return x1 * (2 * x1 ** 2 + 3 * x1 * x3 + 3 * x3 ** 2 + k)


def _B_a(x1, x2, x3, k):
    return -x1 * (2 * x1 ** 2 + 3 * x1 * x3 + 3 * x3 ** 2 + k)


def _B_b(x1, x2, x3, k):
    return x3 * (3 * x1 ** 2 + 3 * x1 * x3 + 2 * x3 ** 2 + k)


def _B_b_pair(x1, x2, x3, k):
    # the B/(b) value written in (xi1, xi2)
    return -(x1 + x2) * (2 * x2 ** 2 + x1 * x2 + 2 * x1 ** 2 + k)


def _B_c(x1, x2, x3, k):
    return -3 * x1 * x3 * (x1 + x3)


CLOSED_FORMS: dict[tuple[str, str], Callable] = {
    ("A", "a"): _A_a, ("A", "b"): _A_b, ("A", "c"): _A_c,
    ("B", "a"): _B_a, ("B", "b"): _B_b, ("B", "c"): _B_c,
}

#: proof-case labels mapped to (region, formula)
NAMED_CASES: dict[str, tuple[SignRegion, Callable]] = {
    "A3.1": (SignRegion("A", "a"), _A_a),
    "A1.2.2": (SignRegion("A", "b"), _A_b),
    "A1.2.3": (SignRegion("A", "c"), _A_c),
    "B1.2.2": (SignRegion("B", "b"), _B_b),
    "B3.2": (SignRegion("B", "b"), _B_b_pair),
}


def resonance_closed_form(xi1, xi2, xi3, region: SignRegion, k: int = -1, tol: float = 1e-12):
    """Polynomial form of ``H`` on the regions with tau pattern A or B."""
    key = (region.tau_pattern, region.xi_pattern)
    if key not in CLOSED_FORMS:
        raise UnsupportedRegionError(f"no closed form for region {region}")
    _check_triple((xi1, xi2, xi3), region, tol)
    return CLOSED_FORMS[key](xi1, xi2, xi3, check_k(k))


def case_closed_form(name: str, xi1, xi2, xi3, k: int = -1, tol: float = 1e-12):
    if name not in NAMED_CASES:
        raise UnsupportedRegionError(f"no closed form recorded for case {name!r}")
    region, fn = NAMED_CASES[name]
    _check_triple((xi1, xi2, xi3), region, tol)
    return fn(xi1, xi2, xi3, check_k(k))


def sample_region(region: SignRegion, rng: np.random.Generator, size: int, scale: float = 50.0):
    """Random triples in ``region`` with ``xi1 + xi2 + xi3 = 0`` exactly in floating point.

    The coordinate whose sign differs from the other two is the negated sum
    of those two magnitudes.
    """
    signs = np.array(region.xi_signs)
    odd = int(np.flatnonzero(signs != np.median(signs))[0])
    out = np.empty((size, 3))
    mags = rng.uniform(0.0, scale, size=(size, 2))
    others = [i for i in range(3) if i != odd]
    for j, i in enumerate(others):
        out[:, i] = signs[i] * mags[:, j]
    out[:, odd] = -(out[:, others[0]] + out[:, others[1]])
    return out
