"""Discrete multilinear interaction functionals on a space-time lattice.

For test functions ``h_1..h_r`` on a common lattice the functional is

    sum over A_r of  m(xi_1, tau_1, ..., xi_r, tau_r) * prod |h_j(xi_j, tau_j)|  * cell^(r-1)

where ``A_r`` is the set of index tuples with ``sum xi_j = 0`` and
``sum tau_j = 0``.  Every multiplier used here is a product of per-slot
weights, so the sum is a chain of linear convolutions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from ..dispersion import EQUIVALENT, japanese, modulation
from ..errors import ParameterError, StructuralError
from ..spectral import LatticeSpec, SpaceTimeSpectrum

#: family -> arity
FAMILIES = {
    "bi-xi2": 3,    # |xi3| <xi3>^{-2-p} <xi1>^p <xi2>^p, p = -s
    "bi-xi4": 3,    # |xi3|^3 <xi3>^{-2-p} <xi1>^p <xi2>^p
    "bi-uvxx": 3,   # |xi3| xi2^2 / (<xi1>^s <xi2>^s <xi3>^{2-s})
    "tri": 4,       # |xi4| <xi4>^{s-2} / (<xi1>^s <xi2>^s <xi3>^s)
}


@dataclass(frozen=True)
class FunctionalSpec:
    """A multiplier family with Sobolev exponent ``s`` and modulation exponent ``b``.

    The last slot carries ``<L>^{-(1-b)}``, the others ``<L>^{-b}``, with
    ``L = |tau| - |xi|^3 - (k/2)|xi|`` by default.
    """
    family: str
    s: float
    b: float
    variant: str = EQUIVALENT

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown functional family {self.family!r}")
        if not (np.isfinite(self.s) and np.isfinite(self.b)):
            raise ParameterError("s and b must be finite")

    @property
    def arity(self) -> int:
        return FAMILIES[self.family]

    @property
    def p(self) -> float:
        return -self.s

    @property
    def functional_id(self) -> str:
        return self.family

    def xi_weights(self, xi: np.ndarray) -> list[np.ndarray]:
        """Per-slot frequency weights whose product is the symbol's xi part."""
        j = japanese(xi)
        s, p = self.s, self.p
        a = np.abs(xi)
        if self.family == "bi-xi2":
            return [j ** p, j ** p, a * j ** (-2 - p)]
        if self.family == "bi-xi4":
            return [j ** p, j ** p, a ** 3 * j ** (-2 - p)]
        if self.family == "bi-uvxx":
            return [j ** -s, xi ** 2 * j ** -s, a * j ** (s - 2)]
        return [j ** -s, j ** -s, j ** -s, a * j ** (s - 2)]

    def modulation_exponents(self) -> list[float]:
        return [self.b] * (self.arity - 1) + [1.0 - self.b]


def multiplier_value(spec: FunctionalSpec, xis, taus, k: int):
    """The full symbol at points of ``A_r``, written out directly.

    ``xis`` and ``taus`` have shape ``(..., arity)``; the result has shape ``(...)``.
    """
    xis = np.asarray(xis, dtype=float)
    taus = np.asarray(taus, dtype=float)
    if xis.shape[-1:] != (spec.arity,) or taus.shape != xis.shape:
        raise StructuralError(f"expected {spec.arity} frequencies and {spec.arity} times")
    jb = japanese(xis)
    Lw = japanese(modulation(taus, xis, k, spec.variant))
    s, p, b = spec.s, spec.p, spec.b
    x = [xis[..., i] for i in range(spec.arity)]
    j = [jb[..., i] for i in range(spec.arity)]
    if spec.family == "bi-xi2":
        num = np.abs(x[2]) * j[0] ** p * j[1] ** p / j[2] ** (2 + p)
    elif spec.family == "bi-xi4":
        num = np.abs(x[2]) ** 3 * j[0] ** p * j[1] ** p / j[2] ** (2 + p)
    elif spec.family == "bi-uvxx":
        num = np.abs(x[2]) * x[1] ** 2 / (j[0] ** s * j[1] ** s * j[2] ** (2 - s))
    else:
        num = np.abs(x[3]) * j[3] ** (s - 2) / (j[0] ** s * j[1] ** s * j[2] ** s)
    den = np.prod(Lw[..., :-1] ** b, axis=-1) * Lw[..., -1] ** (1 - b)
    out = num / den
    return float(out) if np.ndim(out) == 0 else out


def _check_inputs(h, spec: FunctionalSpec) -> LatticeSpec:
    if len(h) != spec.arity:
        raise StructuralError(f"{spec.family} takes {spec.arity} inputs, got {len(h)}")
    lattice = h[0].lattice
    for f in h[1:]:
        if f.lattice != lattice:
            raise StructuralError("inputs live on different lattices")
    return lattice


def slot_factors(h, spec: FunctionalSpec, k: int) -> list[np.ndarray]:
    lattice = _check_inputs(h, spec)
    XI, TAU = lattice.mesh()
    Lw = japanese(modulation(TAU, XI, k, spec.variant))
    return [np.abs(f.coeffs) * xw * Lw ** (-e)
            for f, xw, e in zip(h, spec.xi_weights(XI), spec.modulation_exponents())]


def multilinear_functional(h: list[SpaceTimeSpectrum], spec: FunctionalSpec, k: int) -> float:
    """Evaluate the functional by nested linear convolution of the slot factors."""
    lattice = _check_inputs(h, spec)
    G = slot_factors(h, spec, k)
    r = spec.arity
    conv = G[0]
    for g in G[1:-1]:
        conv = fftconvolve(conv, g, mode="full")
    # conv index I (per axis) holds the lattice index sum I - (r-1) n/2 of
    # the first r-1 slots; the last slot must sit at minus that sum, i.e. at
    # array index r n/2 - I.
    total = 0.0
    idx = []
    for n in (lattice.n_xi, lattice.n_tau):
        I = np.arange(conv.shape[len(idx)])
        last = r * n // 2 - I
        ok = (last >= 0) & (last < n)
        idx.append((I[ok], last[ok]))
    (Ix, lx), (It, lt) = idx
    total = float(np.sum(conv[np.ix_(Ix, It)] * G[-1][np.ix_(lx, lt)]))
    return max(total, 0.0) * lattice.cell ** (r - 1)


def multilinear_bruteforce(h: list[SpaceTimeSpectrum], spec: FunctionalSpec, k: int) -> float:
    """Direct enumeration of ``A_r`` with the symbol from :func:`multiplier_value`."""
    lattice = _check_inputs(h, spec)
    r = spec.arity
    ox, ot = lattice.n_xi // 2, lattice.n_tau // 2
    cells = np.array([(a, b) for a in lattice.xi_index for b in lattice.tau_index])
    combos = np.array(list(itertools.product(range(len(cells)), repeat=r - 1)))
    pts = cells[combos]                       # (N, r-1, 2)
    last = -pts.sum(axis=1)                   # (N, 2)
    ok = (last[:, 0] >= -ox) & (last[:, 0] < ox) & (last[:, 1] >= -ot) & (last[:, 1] < ot)
    pts = np.concatenate([pts[ok], last[ok][:, None, :]], axis=1)   # (M, r, 2)
    val = np.ones(len(pts))
    for i, f in enumerate(h):
        val = val * np.abs(f.coeffs)[pts[:, i, 0] + ox, pts[:, i, 1] + ot]
    m = multiplier_value(spec, pts[..., 0] * lattice.dxi, pts[..., 1] * lattice.dtau, k)
    return float(np.sum(val * m)) * lattice.cell ** (r - 1)
