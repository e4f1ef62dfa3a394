"""Command-line front end.

    gsobe simulate|linear|picard|derive|estimates|lemmas [--config PATH] [--seed N]
          [--out DIR] [--grid-n N] [--lattice-n N[,N...]] [--k {-1,1}] [--s S] [--b B]
          [--preset NAME] [--set KEY=VALUE ...]

Exit status: 0 success, 2 usage or configuration error, 3 verification
failure, 4 numerical failure (blow-up, divergence, non-finite values).
"""
from __future__ import annotations

import argparse
import csv
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra.derivation import ABCDParams, reduction_report
from .config import COMMANDS, ConfigError, RunConfig, read_config_file, resolve
from .dispersion import ModelParams
from .errors import GsobeError, ParameterError, StructuralError, VerificationFailure
from .estimates import lemmas
from .estimates.sweeps import preset_sweep
from .solver import CauchyData, evolve, linear_energy, linear_trajectory, picard_iterate
from .spectral import GridSpec, RealField
from .trajectory import Trajectory, write_binary, write_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION = 3
EXIT_NUMERICAL = 4


class NumericalFailure(GsobeError):
    """A run produced non-finite values, blew up or diverged."""


def _g(x: float) -> str:
    return format(float(x), ".17g")


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_text(path: Path, lines) -> None:
    path.write_text("".join(line + "\n" for line in lines))


# -- builders --------------------------------------------------------------------

def model_params(cfg: RunConfig) -> ModelParams:
    try:
        nl = tuple(float(v) for v in str(cfg["nl"]).split(","))
    except ValueError:
        raise ConfigError("nl", f"expected four comma-separated reals, got {cfg['nl']!r}") from None
    if len(nl) != 4:
        raise ConfigError("nl", f"expected four comma-separated reals, got {cfg['nl']!r}")
    kw = {name: cfg[name] for name in ("s", "b") if cfg[name] is not None}
    return ModelParams(k=cfg["k"], nl_coeffs=nl, **kw)


def initial_data(cfg: RunConfig) -> CauchyData:
    grid = GridSpec(cfg["grid_n"], cfg["domain_length"])
    kind, amp = cfg["data"], cfg["amplitude"]
    if kind == "zero":
        return CauchyData(RealField.zeros(grid), RealField.zeros(grid))
    if kind == "gaussian":
        L, w = grid.domain_length, cfg["width"]
        return CauchyData.from_functions(grid, lambda x: amp * np.exp(-(((x - L / 2) / w) ** 2)))
    # band-limited random data: the lowest eighth of the modes
    rng = np.random.default_rng(np.random.SeedSequence([cfg["seed"], 0]))
    n = grid.n_points
    modes = max(1, n // 16)

    def draw():
        ch = np.zeros(n // 2 + 1, dtype=complex)
        ch[1:modes + 1] = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
        f = np.fft.irfft(ch, n)
        return RealField(grid, amp * f / np.max(np.abs(f)))

    return CauchyData(draw(), draw())


def abcd_params(cfg: RunConfig) -> ABCDParams:
    spec = str(cfg["abcd"]).strip()
    if spec == "default":
        return ABCDParams()
    if spec == "symbolic":
        return ABCDParams.symbolic()
    if spec == "random":
        return ABCDParams.random(random.Random(cfg["seed"]))
    try:
        vals = [Fraction(v.strip()) for v in spec.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ConfigError("abcd", f"cannot parse {spec!r}") from None
    if len(vals) not in (4, 8):
        raise ConfigError("abcd", "expected 4 or 8 rationals")
    try:
        return ABCDParams(*vals)
    except ParameterError as exc:
        raise ConfigError("abcd", str(exc)) from None


def _check_finite(traj: Trajectory) -> None:
    if not (np.all(np.isfinite(traj.u)) and np.all(np.isfinite(traj.ut))):
        raise NumericalFailure("trajectory contains non-finite values")


def _dump_trajectory(cfg: RunConfig, traj: Trajectory, stem: str) -> list[Path]:
    out = cfg.out_dir
    paths = [out / f"{stem}.csv"]
    write_csv(traj, paths[0])
    if cfg["binary"]:
        paths.append(out / f"{stem}.bin")
        write_binary(traj, paths[-1])
    return paths


# -- commands ----------------------------------------------------------------------

def run_simulate(cfg: RunConfig) -> tuple[int, list[str]]:
    data = initial_data(cfg)
    traj = evolve(data, cfg["T"], cfg["dt"], model_params(cfg), save_every=cfg["save_every"])
    _dump_trajectory(cfg, traj, "trajectory")
    lines = [f"saved states: {len(traj)}", f"final time: {_g(traj.times[-1])}",
             f"sup |u|: {_g(traj.sup_norm())}", f"blown up: {'yes' if traj.blown_up else 'no'}"]
    _check_finite(traj)
    return (EXIT_NUMERICAL if traj.blown_up else EXIT_OK), lines


def run_linear(cfg: RunConfig) -> tuple[int, list[str]]:
    data = initial_data(cfg)
    k = cfg["k"]
    times = np.linspace(0.0, cfg["T"], cfg["n_out"])
    traj = linear_trajectory(data, times, k)
    _check_finite(traj)
    _dump_trajectory(cfg, traj, "trajectory")
    energy = np.array([linear_energy(*traj.state(i), k) for i in range(len(traj))])
    _write_rows(cfg.out_dir / "energy.csv", ("t", "energy"),
                [(_g(t), _g(e)) for t, e in zip(times, energy)])
    drift = float(np.max(np.abs(energy - energy[0])) / energy[0]) if energy[0] > 0 else 0.0
    return EXIT_OK, [f"saved states: {len(traj)}", f"relative energy drift: {drift:.3e}"]


def run_picard(cfg: RunConfig) -> tuple[int, list[str]]:
    data = initial_data(cfg)
    res = picard_iterate(data, cfg["T"], cfg["n_iter"], model_params(cfg))
    ratios = list(res.ratios())
    rows = [(i + 1, _g(g), _g(ratios[i - 1]) if i >= 1 else "")
            for i, g in enumerate(res.gaps)]
    _write_rows(cfg.out_dir / "picard.csv", ("iteration", "gap", "ratio"), rows)
    _dump_trajectory(cfg, res.final, "picard_final")
    lines = [f"iterations: {len(res.gaps)}",
             "gaps: " + ", ".join(f"{g:.3e}" for g in res.gaps),
             f"diverged: {'yes' if res.diverged else 'no'}"]
    return (EXIT_NUMERICAL if res.diverged else EXIT_OK), lines


def run_derive(cfg: RunConfig) -> tuple[int, list[str]]:
    report = reduction_report(abcd_params(cfg), cfg["target"])
    lines = report.lines()
    _write_text(cfg.out_dir / "derive.txt", lines)
    ok = report.is_zero and report.theta_matches
    return (EXIT_OK if ok else EXIT_VERIFICATION), lines


def run_estimates(cfg: RunConfig) -> tuple[int, list[str]]:
    name = cfg["preset"]
    report = preset_sweep(name, cfg["k"], cfg["n_samples"], cfg["lattice_n"], cfg["seed"],
                          cfg["s"], cfg["b"])
    (cfg.out_dir / f"estimates_{name}.csv").write_text(report.to_csv())
    summary = report.summary()
    (cfg.out_dir / f"estimates_{name}.txt").write_text(summary)
    return EXIT_OK, summary.splitlines()


#: (label, kind, parameters) for the lemma panel
LEMMA_PANEL = (
    ("two-centre rho=2 gamma=1", "two-centre", (2.0, 1.0)),
    ("two-centre rho=1 gamma=0.5", "two-centre", (1.0, 0.5)),
    ("two-centre rho=0.75 gamma=0.5", "two-centre", (0.75, 0.5)),
    ("quadratic shifted p=2", "poly", (2, 2.0, lemmas.SHIFTED)),
    ("quadratic plain p=0.75", "poly", (2, 0.75, lemmas.PLAIN)),
    ("cubic plain p=0.5", "poly", (3, 0.5, lemmas.PLAIN)),
    ("cubic plain p=1", "poly", (3, 1.0, lemmas.PLAIN)),
)
CUBIC_SCALING_TOL = 0.15


def run_lemmas(cfg: RunConfig) -> tuple[int, list[str]]:
    rows, lines = [], []
    status = EXIT_OK
    for idx, (label, kind, par) in enumerate(LEMMA_PANEL):
        rng = np.random.default_rng(np.random.SeedSequence([cfg["seed"], idx]))
        if kind == "two-centre":
            rep = lemmas.two_centre_check(*par, lemmas.random_two_centre(rng, cfg["n_samples"]))
        else:
            degree, p, bound = par
            rep = lemmas.polynomial_check(lemmas.random_polynomials(rng, cfg["n_samples"], degree),
                                       p, bound)
        bad = rep.outliers()
        if bad.size:
            status = EXIT_VERIFICATION
        rows += [(label, i, _g(l), _g(r), _g(c))
                 for i, (l, r, c) in enumerate(zip(rep.lhs, rep.rhs, rep.constants))]
        lines.append(f"{label}: max C = {rep.max_constant:.6g}, median C = "
                     f"{rep.median_constant:.6g}, outliers = {bad.size}")
    scale = lemmas.cubic_scaling((1.0, 8.0, 64.0))
    if np.any(np.abs(scale - 1.0) > CUBIC_SCALING_TOL):
        status = EXIT_VERIFICATION
    lines.append("cubic scaling |c3|^(1/3) * LHS / LHS(c3=1) at c3 = 1, 8, 64: "
                 + ", ".join(f"{v:.6f}" for v in scale))
    _write_rows(cfg.out_dir / "lemmas.csv", ("check", "sample_id", "lhs", "rhs", "constant"), rows)
    _write_text(cfg.out_dir / "lemmas.txt", lines)
    return status, lines


RUNNERS = {
    "simulate": run_simulate, "linear": run_linear, "picard": run_picard,
    "derive": run_derive, "estimates": run_estimates, "lemmas": run_lemmas,
}


def run(cfg: RunConfig) -> int:
    """Execute one command and write its artifacts into ``cfg.out_dir``."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    _write_text(cfg.out_dir / f"{cfg.command}_config.txt", cfg.lines())
    status, lines = RUNNERS[cfg.command](cfg)
    for line in lines:
        print(line)
    return status


# -- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value file")
    common.add_argument("--seed")
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--grid-n", dest="grid_n")
    common.add_argument("--lattice-n", dest="lattice_n", metavar="N[,N...]")
    common.add_argument("--k", choices=("-1", "1"))
    common.add_argument("--s")
    common.add_argument("--b")
    common.add_argument("--preset", metavar="NAME")
    common.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="any other config key")
    parser = argparse.ArgumentParser(prog="gsobe", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(args.config) if args.config else {}
    cli = {key: getattr(args, key) for key in ("seed", "out", "grid_n", "lattice_n", "k",
                                               "s", "b", "preset")}
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(key, "expected KEY=VALUE after --set")
        cli[key.strip()] = value.strip()
    return resolve(args.command, file_values, cli)


def _error(msg: str) -> None:
    print(f"gsobe: error: {msg}", file=sys.stderr)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except (ConfigError, ParameterError, StructuralError) as exc:
        _error(str(exc))
        return EXIT_USAGE
    except VerificationFailure as exc:
        _error(str(exc))
        return EXIT_VERIFICATION
    except (NumericalFailure, FloatingPointError, OverflowError) as exc:
        _error(str(exc))
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
