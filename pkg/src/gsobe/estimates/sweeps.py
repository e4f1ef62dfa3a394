"""Randomised lower bounds for multilinear multiplier norms.

Each sample draws one continuous test function per slot from
``SeedSequence([seed, sample_id])``, so the same functions are evaluated on
every lattice size and changes in the ratio isolate discretisation effects.
Ratios are ``functional / prod ||h_j||``, a lower bound on the discrete
multiplier norm.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from ..dispersion import check_k, cubic_surrogate
from ..errors import ParameterError
from ..spectral import LatticeSpec, SpaceTimeSpectrum
from .multilinear import FunctionalSpec, multilinear_functional

#: default box: |xi| < 2, |tau| < 10, which contains |tau| = |xi|^3 + (k/2)|xi|
XI_MAX = 2.0
TAU_MAX = 10.0
CSV_HEADER = ("lattice_n", "sample_id", "s", "b", "functional_id", "ratio")


def b0_bilinear(p: float) -> float:
    """``3/4 - p/3``."""
    return 0.75 - p / 3.0


def b0_uvxx(s: float) -> float:
    return s


@dataclass(frozen=True)
class Preset:
    family: str
    s: float
    b: float
    exploratory: bool = False
    note: str = ""

    def spec(self) -> FunctionalSpec:
        return FunctionalSpec(self.family, self.s, self.b)


PRESETS: dict[str, Preset] = {
    "bi1": Preset("bi-xi2", 0.0, 0.55),
    "bi2": Preset("bi-xi4", 0.0, 0.55),
    "tri": Preset("tri", 0.75, 0.51),
    "bi3": Preset("bi-uvxx", 0.55, b0_uvxx(0.55)),
    "bi1-threshold": Preset("bi-xi2", -0.74, b0_bilinear(0.74), exploratory=True,
                            note="s just above the bilinear threshold -3/4"),
    "bi3-below": Preset("bi-uvxx", 0.25, 0.55, exploratory=True,
                        note="s below the threshold 1/2 for the u*v_xx form"),
}


def get_preset(name: str) -> Preset:
    if name not in PRESETS:
        raise ParameterError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return PRESETS[name]


# -- test functions ------------------------------------------------------------

def gaussian_envelope(xi0, tau0, wxi, wtau):
    def f(XI, TAU):
        return np.exp(-0.5 * ((XI - xi0) / wxi) ** 2 - 0.5 * ((TAU - tau0) / wtau) ** 2)
    return f


def resonant_bump(xi0, wxi, wtau, branch, k):
    """Concentrated near ``tau = branch * (|xi|^3 + (k/2)|xi|)``."""
    def f(XI, TAU):
        curve = branch * cubic_surrogate(XI, k)
        return np.exp(-0.5 * ((XI - xi0) / wxi) ** 2 - 0.5 * ((TAU - curve) / wtau) ** 2)
    return f


def draw_test_function(rng: np.random.Generator, family: str, k: int,
                       xi_max: float = XI_MAX, tau_max: float = TAU_MAX):
    if family == "gaussian":
        return gaussian_envelope(rng.uniform(-0.6, 0.6) * xi_max, rng.uniform(-0.6, 0.6) * tau_max,
                                 rng.uniform(0.15, 0.4) * xi_max, rng.uniform(0.1, 0.3) * tau_max)
    if family == "resonant":
        return resonant_bump(rng.uniform(-0.6, 0.6) * xi_max, rng.uniform(0.15, 0.4) * xi_max,
                             rng.uniform(0.08, 0.15) * tau_max, rng.choice([-1, 1]), k)
    raise ParameterError(f"unknown test-function family {family!r}")


def sample_inputs(seed: int, sample_id: int, arity: int, k: int):
    """Continuous test functions for one sample: alternate families by id."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, sample_id]))
    family = "gaussian" if sample_id % 2 == 0 else "resonant"
    return [draw_test_function(rng, family, k) for _ in range(arity)]


def discretise(fn, lattice: LatticeSpec) -> SpaceTimeSpectrum:
    XI, TAU = lattice.mesh()
    return SpaceTimeSpectrum(lattice, fn(XI, TAU))


def lattice_for(n: int, xi_max: float = XI_MAX, tau_max: float = TAU_MAX) -> LatticeSpec:
    return LatticeSpec.from_extent(n, n, xi_max, tau_max)


def sample_ratio(spec: FunctionalSpec, fns, lattice: LatticeSpec, k: int) -> float:
    h = [discretise(f, lattice) for f in fns]
    denom = float(np.prod([f.l2_norm() for f in h]))
    if denom == 0.0:
        return 0.0
    return multilinear_functional(h, spec, k) / denom


# -- reports -------------------------------------------------------------------

@dataclass
class EstimateReport:
    spec: FunctionalSpec
    k: int
    seed: int
    lattice_sizes: tuple[int, ...]
    n_samples: int
    ratios: dict[int, np.ndarray] = field(default_factory=dict)
    exploratory: bool = False
    label: str = ""

    def __post_init__(self):
        for n, r in self.ratios.items():
            r = np.asarray(r, dtype=float)
            if np.any(~np.isfinite(r)) or np.any(r < 0):
                raise ParameterError(f"ratios at n={n} must be finite and nonnegative")

    def maxima(self) -> dict[int, float]:
        return {n: float(np.max(r)) for n, r in self.ratios.items()}

    def medians(self) -> dict[int, float]:
        return {n: float(np.median(r)) for n, r in self.ratios.items()}

    def running_maxima(self) -> dict[int, np.ndarray]:
        return {n: np.maximum.accumulate(r) for n, r in self.ratios.items()}

    def growth_factors(self) -> list[float]:
        """Ratio of consecutive maxima as the lattice is refined."""
        m = self.maxima()
        sizes = sorted(m)
        return [m[b] / m[a] for a, b in zip(sizes, sizes[1:])]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        fid = self.spec.functional_id
        s, b = format(self.spec.s, ".17g"), format(self.spec.b, ".17g")
        for n in self.lattice_sizes:
            for i, r in enumerate(self.ratios[n]):
                w.writerow((n, i, s, b, fid, format(float(r), ".17g")))
            w.writerow((n, "max", s, b, fid, format(self.maxima()[n], ".17g")))
            w.writerow((n, "median", s, b, fid, format(self.medians()[n], ".17g")))
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"functional: {self.spec.functional_id} s={self.spec.s:g} b={self.spec.b:g} k={self.k}",
                 f"samples per lattice: {self.n_samples}, seed: {self.seed}"]
        if self.exploratory:
            lines.append("status: EXPLORATORY (near or below the proven range; no bound is claimed)")
        if self.label:
            lines.append(f"note: {self.label}")
        for n in self.lattice_sizes:
            lines.append(f"n={n}: max={self.maxima()[n]:.6g} median={self.medians()[n]:.6g}")
        g = self.growth_factors()
        if g:
            lines.append("growth of max under refinement: " + ", ".join(f"{x:.4f}" for x in g))
        return "\n".join(lines) + "\n"


def constant_sweep(spec: FunctionalSpec, k: int, n_samples: int,
                   lattice_sizes=(32, 64, 128), seed: int = 0,
                   exploratory: bool = False, label: str = "") -> EstimateReport:
    """Evaluate ``n_samples`` seeded test-function tuples on each lattice size."""
    check_k(k)
    if int(n_samples) != n_samples or n_samples < 1:
        raise ParameterError("n_samples must be a positive integer")
    sizes = tuple(int(n) for n in lattice_sizes)
    if not sizes:
        raise ParameterError("at least one lattice size is required")
    lattices = {n: lattice_for(n) for n in sizes}
    ratios = {n: np.empty(n_samples) for n in sizes}
    for i in range(n_samples):
        fns = sample_inputs(seed, i, spec.arity, k)
        for n in sizes:
            ratios[n][i] = sample_ratio(spec, fns, lattices[n], k)
    return EstimateReport(spec, k, seed, sizes, int(n_samples), ratios, exploratory, label)


def preset_sweep(name: str, k: int = -1, n_samples: int = 100,
                 lattice_sizes=(32, 64, 128), seed: int = 0, s=None, b=None) -> EstimateReport:
    pre = get_preset(name)
    spec = FunctionalSpec(pre.family, pre.s if s is None else s, pre.b if b is None else b)
    return constant_sweep(spec, k, n_samples, lattice_sizes, seed, pre.exploratory, pre.note)
