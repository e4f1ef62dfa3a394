import csv

import numpy as np
import pytest

from gsobe import cli
from gsobe.trajectory import read_binary


def run(tmp_path, *argv):
    return cli.main([*argv, "--out", str(tmp_path)])


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_derive_default(tmp_path, capsys):
    assert run(tmp_path, "derive") == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "ZERO" in out
    assert "ZERO" in (tmp_path / "derive.txt").read_text()
    assert (tmp_path / "derive_config.txt").read_text().startswith("command = derive\n")


def test_derive_printed_target_fails_verification(tmp_path):
    assert run(tmp_path, "derive", "--set", "target=printed") == cli.EXIT_VERIFICATION


@pytest.mark.parametrize("abcd", ["symbolic", "random", "1/12,1/12,1/12,1/12"])
def test_derive_other_params(tmp_path, abcd):
    assert run(tmp_path, "derive", "--set", f"abcd={abcd}") == cli.EXIT_OK


def test_simulate_zero_data(tmp_path):
    status = run(tmp_path, "simulate", "--grid-n", "16", "--set", "data=zero",
                 "--set", "T=0.05", "--set", "dt=0.01", "--set", "save_every=1", "--set", "binary=1")
    assert status == cli.EXIT_OK
    rows = read_csv(tmp_path / "trajectory.csv")
    assert len(rows) > 1
    assert all(float(v) == 0.0 for row in rows[1:] for v in row[2:])
    traj = read_binary(tmp_path / "trajectory.bin")
    assert not np.any(traj["u"]) and not np.any(traj["u_t"])


def test_linear_energy(tmp_path):
    assert run(tmp_path, "linear", "--grid-n", "32", "--set", "n_out=11") == cli.EXIT_OK
    e = np.array([float(r[1]) for r in read_csv(tmp_path / "energy.csv")[1:]])
    assert len(e) == 11
    np.testing.assert_allclose(e, e[0], rtol=1e-10)


def test_picard_and_divergence(tmp_path):
    assert run(tmp_path, "picard", "--grid-n", "32", "--set", "T=0.1", "--set", "n_iter=4") == cli.EXIT_OK
    rows = read_csv(tmp_path / "picard.csv")
    assert rows[0] == ["iteration", "gap", "ratio"] and len(rows) == 5
    status = run(tmp_path / "big", "picard", "--grid-n", "32", "--set", "amplitude=10",
                 "--set", "n_iter=8")
    assert status == cli.EXIT_NUMERICAL


def test_estimates_bytes_identical(tmp_path):
    argv = ("estimates", "--preset", "bi1-threshold", "--lattice-n", "16,32",
            "--set", "n_samples=4", "--seed", "3")
    assert run(tmp_path / "a", *argv) == cli.EXIT_OK
    assert run(tmp_path / "b", *argv) == cli.EXIT_OK
    a = (tmp_path / "a" / "estimates_bi1-threshold.csv").read_bytes()
    assert a == (tmp_path / "b" / "estimates_bi1-threshold.csv").read_bytes()
    assert a.startswith(b"lattice_n,sample_id,s,b,functional_id,ratio\n")
    assert "EXPLORATORY" in (tmp_path / "a" / "estimates_bi1-threshold.txt").read_text()


def test_lemmas_small(tmp_path):
    assert run(tmp_path, "lemmas", "--set", "n_samples=5") == cli.EXIT_OK
    rows = read_csv(tmp_path / "lemmas.csv")
    assert rows[0] == ["check", "sample_id", "lhs", "rhs", "constant"]
    assert len(rows) == 1 + 5 * len(cli.LEMMA_PANEL)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("target = printed\n")
    assert run(tmp_path, "derive", "--config", str(cfg)) == cli.EXIT_VERIFICATION
    # the command line wins over the file
    assert run(tmp_path, "derive", "--config", str(cfg), "--set", "target=corrected") == cli.EXIT_OK


@pytest.mark.parametrize("argv, key", [
    (("simulate", "--k", "2"), None),
    (("simulate", "--grid-n", "7"), "grid_n"),
    (("simulate", "--set", "colour=red"), "colour"),
    (("estimates", "--preset", "nope"), None),
    (("picard", "--set", "T=2"), None),
    (("derive", "--set", "abcd=1,2"), None),
    (("frobnicate",), None),
])
def test_usage_errors(tmp_path, capsys, argv, key):
    assert run(tmp_path, *argv) == cli.EXIT_USAGE
    if key:
        assert repr(key) in capsys.readouterr().err


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "gsobe", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "derive" in res.stdout
