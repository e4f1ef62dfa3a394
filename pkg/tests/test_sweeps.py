import numpy as np
import pytest

from gsobe.errors import ParameterError
from gsobe.estimates.multilinear import FunctionalSpec
from gsobe.estimates.sweeps import (CSV_HEADER, PRESETS, EstimateReport, b0_bilinear, b0_uvxx,
                                    constant_sweep, get_preset, lattice_for, preset_sweep,
                                    sample_inputs)
from gsobe.dispersion import cubic_surrogate


def test_b0_defaults():
    assert b0_bilinear(0.0) == 0.75 and b0_uvxx(0.6) == 0.6
    assert PRESETS["bi1-threshold"].b == pytest.approx(0.75 - 0.74 / 3)
    assert PRESETS["bi1-threshold"].exploratory and PRESETS["bi3-below"].exploratory
    assert not PRESETS["bi1"].exploratory
    with pytest.raises(ParameterError):
        get_preset("nope")


def test_box_contains_characteristic_set():
    lat = lattice_for(64)
    assert cubic_surrogate(np.abs(lat.xi).max(), 1) < np.abs(lat.tau).max()


def test_samples_are_reproducible():
    a = sample_inputs(3, 7, 3, -1)
    b = sample_inputs(3, 7, 3, -1)
    XI, TAU = lattice_for(16).mesh()
    for f, g in zip(a, b):
        np.testing.assert_array_equal(f(XI, TAU), g(XI, TAU))


def test_sweep_report():
    rep = constant_sweep(FunctionalSpec("bi-xi2", 0.0, 0.55), -1, 6, (16, 32), seed=1)
    assert set(rep.ratios) == {16, 32}
    assert all(np.all(r > 0) for r in rep.ratios.values())
    assert np.all(np.diff(rep.running_maxima()[16]) >= 0)
    assert len(rep.growth_factors()) == 1
    lines = rep.to_csv().splitlines()
    assert tuple(lines[0].split(",")) == CSV_HEADER
    assert len(lines) == 1 + 2 * (6 + 2)
    assert lines[7].split(",")[1] == "max" and lines[8].split(",")[1] == "median"
    assert "EXPLORATORY" not in rep.summary()


def test_sweep_is_deterministic():
    a = preset_sweep("bi3-below", -1, 4, (16,), seed=9)
    b = preset_sweep("bi3-below", -1, 4, (16,), seed=9)
    assert a.to_csv() == b.to_csv()
    assert "EXPLORATORY" in a.summary()
    c = preset_sweep("bi3-below", -1, 4, (16,), seed=10)
    assert a.to_csv() != c.to_csv()


@pytest.mark.parametrize("k", [-1, 1])
def test_small_sweep_is_stable(k):
    rep = preset_sweep("bi1", k, 20, (32, 64), seed=0)
    assert rep.growth_factors()[0] <= 1.25


def test_sweep_validation():
    spec = FunctionalSpec("bi-xi2", 0.0, 0.55)
    with pytest.raises(ParameterError):
        constant_sweep(spec, -1, 0)
    with pytest.raises(ParameterError):
        constant_sweep(spec, -1, 2, ())
    with pytest.raises(ParameterError):
        constant_sweep(spec, 3, 2)
    with pytest.raises(ParameterError):
        EstimateReport(spec, -1, 0, (8,), 1, {8: np.array([-1.0])})
