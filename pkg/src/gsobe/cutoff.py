"""Smooth temporal cutoff: 1 on [-1, 1], 0 outside (-2, 2)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


def _g(x):
    # exp(-1/x) for x > 0, else 0
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _dg(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos]) / x[pos] ** 2
    return out


def bump(t):
    """The unscaled cutoff, built by gluing ``exp(-1/x)`` transitions."""
    a = np.abs(np.asarray(t, dtype=float))
    num = _g(2.0 - a)
    out = num / (num + _g(a - 1.0))
    return float(out) if out.ndim == 0 else out


def bump_derivative(t):
    t = np.asarray(t, dtype=float)
    a = np.abs(t)
    p, q = _g(2.0 - a), _g(a - 1.0)
    dp, dq = -_dg(2.0 - a), _dg(a - 1.0)
    out = (dp * q - p * dq) / (p + q) ** 2 * np.sign(t)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CutoffFn:
    """``eta(t / scale)``; supported in ``(-2*scale, 2*scale)``."""
    scale: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.scale) or self.scale <= 0:
            raise ParameterError(f"cutoff scale must be positive, got {self.scale!r}")

    def __call__(self, t):
        return bump(np.asarray(t, dtype=float) / self.scale)

    def derivative(self, t):
        return bump_derivative(np.asarray(t, dtype=float) / self.scale) / self.scale

    @property
    def support(self) -> tuple[float, float]:
        return (-2.0 * self.scale, 2.0 * self.scale)
