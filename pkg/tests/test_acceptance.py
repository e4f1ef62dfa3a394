"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS/FAIL criterion N: ...`` line (shown even under
output capture) and then asserts. Tolerances are fixed here, not tuned.
"""
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import band_limited, fourth_order_utt, linear_rhs, single_mode_duhamel
from gsobe import cli
from gsobe.algebra.derivation import ABCDParams, pipeline_theta, theta_closed_form, verify_reduction
from gsobe.algebra.diffpoly import ETA, eta
from gsobe.algebra.parampoly import ParamPoly, simplify
from gsobe.dispersion import ModelParams, cubic_surrogate, phi
from gsobe.estimates import lemmas
from gsobe.estimates.multilinear import FunctionalSpec, multilinear_bruteforce, multilinear_functional
from gsobe.estimates.resonance import (SignRegion, case_closed_form, resonance_closed_form,
                                       resonance_from_L, sample_region)
from gsobe.estimates.sweeps import constant_sweep
from gsobe.solver import (SOURCE, CauchyData, duhamel_integral, evolve, linear_energy,
                          linear_evolve, linear_trajectory, picard_iterate)
from gsobe.spectral import GridSpec, LatticeSpec, RealField, SpaceTimeSpectrum, forward_transform


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_derivation_identity(report):
    start = time.perf_counter()
    nonzero = []
    for seed in range(20):
        p = ABCDParams.random(random.Random(seed))
        if not (verify_reduction(p).is_zero() and pipeline_theta(p) == theta_closed_form(p)):
            nonzero.append(seed)
    sym = ABCDParams.symbolic()
    sym_ok = verify_reduction(sym).is_zero() and \
        simplify(ParamPoly.lift(pipeline_theta(sym)) - theta_closed_form(sym)) == 0
    elapsed = time.perf_counter() - start
    ok = not nonzero and sym_ok and elapsed < 10
    report(1, ok, f"20 random rational params reduce to zero (failures: {nonzero}), "
                  f"symbolic theta matches: {sym_ok}, {elapsed:.2f} s (< 10 s)")


def test_criterion_02_chain_rule_identities(report):
    first = ETA * eta(3) - Fraction(1, 2) * (ETA ** 2).dx(3) + Fraction(3, 2) * (eta(1) ** 2).dx()
    second = eta(1) * eta(2) + ETA * eta(3) - (ETA * eta(2)).dx()
    ok = first.is_zero() and second.is_zero()
    report(2, ok, f"both identities reduce to the zero polynomial: {first.is_zero()}, {second.is_zero()}")


def test_criterion_03_resonance_identities(report):
    rng = np.random.default_rng(2024)
    worst = {}
    checks = [("A/(a)", SignRegion("A", "a"), None), ("A/(b)", SignRegion("A", "b"), None),
              ("B/(b)", SignRegion("B", "b"), None), ("B3.2", SignRegion("B", "b"), "B3.2")]
    for label, region, case in checks:
        x = sample_region(region, rng, 10_000)
        if case is None:
            a = np.array([resonance_closed_form(*row, region) for row in x])
        else:
            a = np.array([case_closed_form(case, *row) for row in x])
        b = np.array([resonance_from_L(*row, region, -1) for row in x])
        worst[label] = float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))
    s1 = resonance_from_L(1.0, 2.0, -3.0, SignRegion("A", "a"), -1)
    s2 = resonance_from_L(2.0, -1.0, -1.0, SignRegion("A", "b"), -1)
    ok = max(worst.values()) <= 1e-9 and s1 == pytest.approx(18, abs=1e-12) \
        and s2 == pytest.approx(-7, abs=1e-12)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(3, ok, f"max relative error over 1e4 triples: {detail} (<= 1e-9); spot values {s1:g}, {s2:g}")


def test_criterion_04_linear_solver(report):
    rng = np.random.default_rng(4)
    grid = GridSpec(64, 2 * np.pi)
    coarse = GridSpec(64, 16 * np.pi)
    worst_t0 = worst_res = worst_e = 0.0
    for k in (-1, 1):
        data = CauchyData(band_limited(grid, rng, 20), band_limited(grid, rng, 20))
        a = forward_transform(linear_evolve(data, 0.0, k)).coeffs
        worst_t0 = max(worst_t0, float(np.max(np.abs(a - forward_transform(data.phi).coeffs))))
        d2 = CauchyData(band_limited(coarse, rng, 8), band_limited(coarse, rng, 8))
        for t in (0.5, 2.0):
            utt = fourth_order_utt(lambda s: linear_evolve(d2, s, k).samples, t, 2e-3)
            rhs = linear_rhs(linear_evolve(d2, t, k).samples, coarse.domain_length, k)
            worst_res = max(worst_res, float(np.max(np.abs(utt - rhs))))
        traj = linear_trajectory(data, np.linspace(0, 10, 101), k)
        E = np.array([linear_energy(*traj.state(i), k) for i in range(len(traj))])
        worst_e = max(worst_e, float(np.max(np.abs(E - E[0])) / E[0]))
    ok = worst_t0 <= 1e-14 and worst_res <= 1e-8 and worst_e <= 1e-10
    report(4, ok, f"t=0 coefficient error {worst_t0:.1e} (<= 1e-14), PDE residual {worst_res:.1e} "
                  f"(<= 1e-8), energy drift {worst_e:.1e} (<= 1e-10), k = -1 and 1")


def test_criterion_05_weight_equivalence(report):
    xi = np.arange(-1000.0, 1000.0 + 1e-9, 1e-3)
    gaps = {k: float(np.max(np.abs(phi(xi, k) - cubic_surrogate(xi, k)))) for k in (-1, 1)}
    ok = max(gaps.values()) <= 1.0
    report(5, ok, f"sup |phi - |xi|^3 - (k/2)|xi|| over |xi| <= 1e3: k=-1 {gaps[-1]:.4f}, "
                  f"k=1 {gaps[1]:.4f} (<= 1)")


def test_criterion_06_duhamel_order(report):
    g = GridSpec(32, 2 * np.pi)
    f = RealField.from_function(g, np.cos)
    ratios = []
    for kind in ("potential", "source"):
        for k in (-1, 1):
            want = single_mode_duhamel(1.0, phi(1.0, k), 1.0, kind) * np.cos(g.x)
            errs = [np.max(np.abs(duhamel_integral([f] * (m + 1), 1.0, k, kind=kind).samples - want))
                    for m in (16, 32, 64, 128)]
            ratios += list(np.array(errs[:-1]) / np.array(errs[1:]))
    ok = all(abs(r - 16) <= 0.2 * 16 for r in ratios)
    report(6, ok, f"error ratios under step halving in [{min(ratios):.2f}, {max(ratios):.2f}] "
                  f"(16 +- 20%)")


def test_criterion_07_picard(report):
    g = GridSpec(64, 40.0)
    data = CauchyData.from_functions(g, lambda x: 1e-2 * np.exp(-(x - 20) ** 2))
    T = 0.1
    res = picard_iterate(data, T, 6, ModelParams())
    ratios = res.ratios()
    traj = evolve(data, T / 2, 1e-4, ModelParams())
    i = res.final.nearest_index(T / 2)
    gap = float(np.max(np.abs(res.final.u[i] - traj.u[-1])))
    ok = bool(np.all(ratios <= 0.5)) and not res.diverged and gap <= 1e-6 \
        and res.final.times[i] == pytest.approx(T / 2)
    report(7, ok, f"gap ratios max {np.max(ratios):.2e} (<= 1/2), difference from evolve at T/2 "
                  f"{gap:.1e} (<= 1e-6)")


def test_criterion_08_zero_mode(report):
    rng = np.random.default_rng(8)
    g = GridSpec(64, 20.0)
    data = CauchyData(band_limited(g, rng, 6, 0.1), band_limited(g, rng, 6, 0.1))
    traj = evolve(data, 1.0, 1e-3, ModelParams(), save_every=50)
    mu, mv = traj.u.mean(axis=1), traj.ut.mean(axis=1)
    dv = float(np.max(np.abs(mv - mv[0])))
    du = float(np.max(np.abs(mu - (mu[0] + mv[0] * traj.times))))
    ok = dv <= 1e-8 and du <= 1e-8 and traj.times[-1] == pytest.approx(1.0)
    report(8, ok, f"zero mode of u_t drift {dv:.1e}, of u deviation from affine {du:.1e} (<= 1e-8)")


def test_criterion_09_multilinear_bruteforce(report):
    rng = np.random.default_rng(9)
    cases = [(FunctionalSpec("bi-xi2", 0.0, 0.55), LatticeSpec.from_extent(8, 8, 2.0, 10.0)),
             (FunctionalSpec("tri", 0.75, 0.51), LatticeSpec.from_extent(6, 6, 2.0, 10.0))]
    worst = {}
    for spec, lat in cases:
        errs = []
        for _ in range(50):
            h = [SpaceTimeSpectrum(lat, rng.standard_normal((lat.n_xi, lat.n_tau))
                                   + 1j * rng.standard_normal((lat.n_xi, lat.n_tau)))
                 for _ in range(spec.arity)]
            a, b = multilinear_functional(h, spec, -1), multilinear_bruteforce(h, spec, -1)
            errs.append(abs(a - b) / b)
        worst[spec.family] = max(errs)
    ok = max(worst.values()) <= 1e-12
    report(9, ok, f"relative difference over 50 inputs: A3 on 8x8 {worst['bi-xi2']:.1e}, "
                  f"A4 on 6x6 {worst['tri']:.1e} (<= 1e-12)")


def test_criterion_10_estimate_sweeps(report):
    start = time.perf_counter()
    growth = {}
    for spec in (FunctionalSpec("bi-xi2", 0.0, 0.55), FunctionalSpec("tri", 0.75, 0.51)):
        rep = constant_sweep(spec, -1, 100, (32, 64, 128), seed=0)
        growth[spec.family] = rep.growth_factors()
    elapsed = time.perf_counter() - start
    worst = max(max(g) for g in growth.values())
    ok = worst <= 1.25 and elapsed < 300
    detail = "; ".join(f"{k}: " + ", ".join(f"{x:.4f}" for x in g) for k, g in growth.items())
    report(10, ok, f"growth of max ratio 32->64->128 over 100 samples: {detail} (<= 1.25), "
                   f"{elapsed:.1f} s (< 300 s)")


def test_criterion_11_lemma_constants(report):
    maxima, outliers = {}, 0
    for idx, (label, kind, par) in enumerate(cli.LEMMA_PANEL):
        rng = np.random.default_rng(np.random.SeedSequence([0, idx]))
        if kind == "two-centre":
            rep = lemmas.two_centre_check(*par, lemmas.random_two_centre(rng, 100))
        else:
            degree, p, bound = par
            rep = lemmas.polynomial_check(lemmas.random_polynomials(rng, 100, degree), p, bound)
        maxima[label] = rep.max_constant
        outliers += rep.outliers().size + int(not np.all(np.isfinite(rep.constants)))
    scale = lemmas.cubic_scaling((1.0, 8.0, 64.0))
    ok = outliers == 0 and bool(np.all(np.abs(scale - 1) <= 0.15))
    report(11, ok, f"max constants {', '.join(f'{v:.3g}' for v in maxima.values())} with "
                   f"{outliers} outliers over 100 draws each; cubic scaling "
                   f"{', '.join(f'{v:.4f}' for v in scale)} (within 15% of 1)")


def test_criterion_12_determinism(report, tmp_path):
    runs = {
        "estimates_bi1-threshold.csv": ("estimates", "--preset", "bi1-threshold",
                                        "--lattice-n", "16,32", "--set", "n_samples=6"),
        "trajectory.csv": ("simulate", "--grid-n", "32", "--set", "data=random",
                           "--set", "T=0.05", "--set", "amplitude=0.1"),
        "picard.csv": ("picard", "--grid-n", "32", "--set", "T=0.1", "--set", "n_iter=3"),
        "lemmas.csv": ("lemmas", "--set", "n_samples=5"),
    }
    same = {}
    for name, argv in runs.items():
        blobs = []
        for rep in ("a", "b"):
            out = tmp_path / f"{argv[0]}_{rep}"
            assert cli.main([*argv, "--seed", "11", "--out", str(out)]) == cli.EXIT_OK
            blobs.append((out / name).read_bytes())
        same[name] = blobs[0] == blobs[1]
    ok = all(same.values())
    report(12, ok, "repeated CLI runs give byte-identical CSV: "
                   + ", ".join(f"{k} {v}" for k, v in same.items()))
