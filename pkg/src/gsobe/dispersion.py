"""Dispersion symbol, the V2 multiplier and modulation weights."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

EXACT = "exact"
EQUIVALENT = "equivalent"


def check_k(k) -> int:
    if k not in (-1, 1):
        raise ParameterError(f"k must be -1 or +1, got {k!r}")
    return int(k)


@dataclass(frozen=True)
class ModelParams:
    """Sign ``k`` of the fourth-order term, exponents ``(s, b)`` and the
    weights of ``(u^2)_xx, (u^2)_xxxx, (u u_xx)_xx, (u^3)_xx``.

    The default weights give the full equation; ``ModelParams.sobe(k)`` keeps
    only the quadratic term.
    """
    k: int = -1
    s: float = 1.0
    b: float = 0.55
    nl_coeffs: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        check_k(self.k)
        coeffs = tuple(float(c) for c in self.nl_coeffs)
        if len(coeffs) != 4 or not all(np.isfinite(coeffs)):
            raise ParameterError(f"nl_coeffs must be four finite reals, got {self.nl_coeffs!r}")
        object.__setattr__(self, "nl_coeffs", coeffs)
        for name in ("s", "b"):
            if not np.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")

    @classmethod
    def sobe(cls, k: int = -1, **kw) -> "ModelParams":
        return cls(k=k, nl_coeffs=(1.0, 0.0, 0.0, 0.0), **kw)

    @classmethod
    def linear(cls, k: int = -1, **kw) -> "ModelParams":
        return cls(k=k, nl_coeffs=(0.0, 0.0, 0.0, 0.0), **kw)

    @property
    def is_linear(self) -> bool:
        return not any(self.nl_coeffs)


def japanese(x):
    """``<x> = sqrt(1 + x^2)``."""
    return np.sqrt(1.0 + np.square(x))


def phi(xi, k):
    """``sqrt(xi^6 + k xi^4 + xi^2)``.

    The radicand equals ``xi^2 ((xi^2 + k/2)^2 + 1 - k^2/4)`` and is therefore
    nonnegative for both signs of ``k``.
    """
    k = check_k(k)
    x2 = np.square(np.asarray(xi, dtype=float))
    out = np.sqrt(x2 * (x2 * (x2 + k) + 1.0))
    return float(out) if out.ndim == 0 else out


def v2_multiplier(xi, k):
    """``xi^2 / phi(xi)``, continued by its limit 0 at the origin."""
    k = check_k(k)
    xi = np.asarray(xi, dtype=float)
    x2 = np.square(xi)
    out = np.abs(xi) / np.sqrt(x2 * (x2 + k) + 1.0)
    return float(out) if out.ndim == 0 else out


def cubic_surrogate(xi, k):
    """``|xi|^3 + (k/2)|xi|``, the large-frequency expansion of ``phi``."""
    a = np.abs(np.asarray(xi, dtype=float))
    return a ** 3 + 0.5 * check_k(k) * a


def modulation(tau, xi, k, variant=EXACT):
    """``|tau| - phi(xi)`` or, for the equivalent variant, ``|tau| - |xi|^3 - (k/2)|xi|``."""
    if variant == EXACT:
        return np.abs(tau) - phi(xi, k)
    if variant == EQUIVALENT:
        return np.abs(tau) - cubic_surrogate(xi, k)
    raise ParameterError(f"unknown weight variant {variant!r}")


def modulation_weight(tau, xi, b, k, variant=EXACT):
    if not np.isfinite(b):
        raise ParameterError("b must be finite")
    out = japanese(modulation(tau, xi, k, variant)) ** b
    return float(out) if np.ndim(out) == 0 else out


def sobolev_weight(xi, s):
    return japanese(xi) ** s
