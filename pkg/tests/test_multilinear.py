import numpy as np
import pytest

from gsobe.dispersion import EXACT, japanese, phi
from gsobe.errors import ParameterError, StructuralError
from gsobe.estimates.multilinear import (FAMILIES, FunctionalSpec, multilinear_bruteforce,
                                         multilinear_functional, multiplier_value)
from gsobe.estimates.norms import xsb_lattice_norm
from gsobe.spectral import LatticeSpec, SpaceTimeSpectrum

LAT8 = LatticeSpec.from_extent(8, 8, 2.0, 10.0)
LAT6 = LatticeSpec.from_extent(6, 6, 2.0, 10.0)
SPECS = [FunctionalSpec("bi-xi2", 0.0, 0.55), FunctionalSpec("bi-xi4", -0.3, 0.6),
         FunctionalSpec("bi-uvxx", 0.55, 0.55), FunctionalSpec("tri", 0.75, 0.51),
         FunctionalSpec("bi-xi2", 0.2, 0.55, EXACT)]


def random_inputs(rng, lattice, r):
    shape = (lattice.n_xi, lattice.n_tau)
    return [SpaceTimeSpectrum(lattice, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
            for _ in range(r)]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family}-{s.variant}")
def test_convolution_matches_bruteforce(spec, rng):
    lat = LAT8 if spec.arity == 3 else LAT6
    for _ in range(5):
        h = random_inputs(rng, lat, spec.arity)
        a = multilinear_functional(h, spec, -1)
        b = multilinear_bruteforce(h, spec, -1)
        assert abs(a - b) <= 1e-12 * b


def test_zero_input(rng):
    spec = SPECS[0]
    h = random_inputs(rng, LAT8, 3)
    h[1] = SpaceTimeSpectrum(LAT8, np.zeros((8, 8)))
    assert multilinear_functional(h, spec, -1) == 0.0


def test_single_cells():
    spec = FunctionalSpec("bi-xi2", 0.0, 0.55)
    lat = LAT8
    # cells (xi, tau) indices: (1, 2) + (2, -3) + (-3, 1) = (0, 0)
    cells = [(1, 2), (2, -3), (-3, 1)]
    vals = [2.0, -3.0, 0.5j]
    h = []
    for (a, b), v in zip(cells, vals):
        c = np.zeros((8, 8), complex)
        c[a + 4, b + 4] = v
        h.append(SpaceTimeSpectrum(lat, c))
    xis = np.array([a * lat.dxi for a, _ in cells])
    taus = np.array([b * lat.dtau for _, b in cells])
    want = 3.0 * multiplier_value(spec, xis, taus, -1) * lat.cell ** 2
    assert multilinear_functional(h, spec, -1) == pytest.approx(want, rel=1e-13)


def test_multiplier_written_out():
    spec = FunctionalSpec("bi-xi4", 0.0, 0.6)
    xi, tau = np.array([0.5, 1.0, -1.5]), np.array([1.0, 2.0, -3.0])
    L = np.abs(tau) - np.abs(xi) ** 3 + 0.5 * np.abs(xi)
    want = (1.5 ** 3 * japanese(1.5) ** -2
            / (japanese(L[0]) ** 0.6 * japanese(L[1]) ** 0.6 * japanese(L[2]) ** 0.4))
    assert multiplier_value(spec, xi, tau, -1) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("spec", SPECS[:4], ids=lambda s: s.family)
def test_multilinearity(spec, rng):
    lat = LAT8 if spec.arity == 3 else LAT6
    h = [SpaceTimeSpectrum(lat, np.abs(x.coeffs)) for x in random_inputs(rng, lat, spec.arity)]
    g = SpaceTimeSpectrum(lat, np.abs(random_inputs(rng, lat, 1)[0].coeffs))
    base = multilinear_functional(h, spec, -1)
    for j in range(spec.arity):
        scaled = list(h)
        scaled[j] = SpaceTimeSpectrum(lat, 2.5 * h[j].coeffs)
        assert multilinear_functional(scaled, spec, -1) == pytest.approx(2.5 * base, rel=1e-12)
        other, summed = list(h), list(h)
        other[j] = g
        summed[j] = SpaceTimeSpectrum(lat, h[j].coeffs + g.coeffs)
        assert multilinear_functional(summed, spec, -1) == pytest.approx(
            base + multilinear_functional(other, spec, -1), rel=1e-12)


def test_structural_errors(rng):
    spec = SPECS[0]
    h = random_inputs(rng, LAT8, 2) + random_inputs(rng, LatticeSpec.from_extent(8, 8, 3.0, 10.0), 1)
    with pytest.raises(StructuralError):
        multilinear_functional(h, spec, -1)
    with pytest.raises(StructuralError):
        multilinear_functional(h[:2], spec, -1)
    with pytest.raises(StructuralError):
        multiplier_value(spec, [1.0, 2.0], [0.0, 0.0], -1)


def test_spec_validation():
    assert FunctionalSpec("tri", 0.75, 0.51).arity == 4
    assert set(FAMILIES) == {"bi-xi2", "bi-xi4", "bi-uvxx", "tri"}
    with pytest.raises(ParameterError):
        FunctionalSpec("quad", 0.0, 0.5)
    with pytest.raises(ParameterError):
        FunctionalSpec("tri", np.nan, 0.5)


def test_lattice_norm():
    lat = LatticeSpec(4, 4, 0.5, 2.0)
    assert xsb_lattice_norm(SpaceTimeSpectrum(lat, np.zeros((4, 4))), 1.0, 0.5, -1) == 0.0
    c = np.zeros((4, 4))
    c[3, 0] = 1.0                                # xi = 0.5, tau = -4
    xi0, tau0 = 0.5, -4.0
    want = japanese(xi0) * japanese(abs(tau0) - phi(xi0, -1)) ** 0.55 * np.sqrt(lat.cell)
    F = SpaceTimeSpectrum(lat, c)
    assert xsb_lattice_norm(F, 1.0, 0.55, -1) == pytest.approx(want, rel=1e-14)
    assert xsb_lattice_norm(SpaceTimeSpectrum(lat, 3 * c), 1.0, 0.55, -1) == pytest.approx(3 * want)
