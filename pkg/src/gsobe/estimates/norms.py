"""Weighted l^2 norms on space-time frequency lattices."""
from __future__ import annotations

import numpy as np

from ..dispersion import EXACT, modulation_weight, sobolev_weight
from ..spectral import SpaceTimeSpectrum


def xsb_lattice_norm(F: SpaceTimeSpectrum, s: float, b: float, k: int, variant: str = EXACT) -> float:
    """``(sum <xi>^{2s} <|tau| - phi(xi)>^{2b} |F|^2 dxi dtau)^{1/2}``."""
    XI, TAU = F.lattice.mesh()
    w = sobolev_weight(XI, s) * modulation_weight(TAU, XI, b, k, variant)
    return float(np.sqrt(np.sum((w * np.abs(F.coeffs)) ** 2) * F.lattice.cell))
