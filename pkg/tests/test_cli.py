import json

import numpy as np
import pytest
from click.testing import CliRunner

from dlgeodesic.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args])

    return invoke


def test_rate(run):
    res = run("rate", "--a", 0.5)
    assert res.exit_code == 0
    rec = json.loads(res.output)
    assert rec["I"] == pytest.approx(32 / 3)
    rec = json.loads(run("rate", "--a", 0.125).output)
    assert rec["I"] == pytest.approx(128 / 3) and rec["t_B"] == 0.25 and rec["x_B"] == 1.0
    assert rec["r3_coefficient"] == pytest.approx(128 / 3)
    assert run("rate", "--a", 1.5).exit_code == 2
    assert run("rate", "--a", "abc").exit_code == 2


def test_shape(run):
    res = run("shape", "--a", 0.125, "--samples", 5)
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "t,F,rho"
    F = [float(line.split(",")[1]) for line in lines[1:]]
    assert np.allclose(F, [0, 1, 0.828427125, 0.464101615, 0], atol=1e-9)
    res = run("shape", "--a", 0.5, "--samples", 3)
    assert [float(line.split(",")[1]) for line in res.output.strip().splitlines()[1:]] == [0, 1, 0]
    assert run("shape", "--a", 0.5, "--samples", 1).exit_code == 2


def test_shape_unwritable(run, tmp_path):
    res = run("shape", "--a", 0.3, "--out", tmp_path / "missing" / "x.csv")
    assert res.exit_code == 3


def test_figures(run, tmp_path):
    res = run("figures", "--out", tmp_path / "figs", "--samples", 11)
    assert res.exit_code == 0
    names = sorted(p.name for p in (tmp_path / "figs").iterdir())
    assert names == sorted(f"shape_a{a:g}.csv" for a in (0.02, 0.05, 0.125, 0.2, 0.35, 0.5))


def test_solve_and_verify_round_trip(run, tmp_path):
    out = tmp_path / "s.json"
    res = run("solve", "--a", 0.5, "--grid", 512, "--out", out)
    assert res.exit_code == 0, res.output
    data = json.loads(out.read_text())
    assert data["I_total"] == pytest.approx(32 / 3, rel=1e-2)
    assert set(data["grid"]) == {"t", "F", "rho", "g"}
    res = run("verify", out)
    assert res.exit_code == 0 and json.loads(res.output)["passed"]

    data["grid"]["rho"] = [0.9 * r for r in data["grid"]["rho"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    res = run("verify", bad)
    assert res.exit_code == 1
    rep = json.loads(res.output)
    assert not rep["passed"] and rep["violations"]


def test_solve_off_grid(run):
    res = run("solve", "--a", 0.32, "--grid", 512)
    assert res.exit_code == 0
    assert json.loads(res.output)["I_total"] == pytest.approx(13.2866, rel=1e-2)


def test_solve_errors(run):
    assert run("solve", "--a", 0, "--grid", 512).exit_code == 2
    assert run("solve", "--a", 0.3, "--grid", 8).exit_code == 2


def test_verify_closed_form(run):
    res = run("verify", "--a", 0.25, "--grid", 500)
    assert res.exit_code == 0 and json.loads(res.output)["passed"]


def test_verify_errors(run, tmp_path):
    assert run("verify", tmp_path / "missing.json").exit_code == 2
    junk = tmp_path / "junk.json"
    junk.write_text('{"a": 0.3}')
    assert run("verify", junk).exit_code == 2
    assert run("verify").exit_code == 2


def test_sweep(run, tmp_path):
    out = tmp_path / "sweep.csv"
    res = run("sweep", "--a-min", 0.1, "--a-max", 0.5, "--step", 0.1, "--grid", 512, "--jobs", 1, "--out", out)
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "a,I_exact,I_solver,rel_err,b_star,t_B_est,x_B_est,converged"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 5
    assert all(float(r[3]) <= 1e-2 and r[7] == "true" for r in rows)
    assert rows[-1][0] == "0.5" and float(rows[-1][1]) == pytest.approx(10.666667, abs=1e-6)


def test_sweep_bad_range(run):
    assert run("sweep", "--a-min", 0.5, "--a-max", 0.1, "--step", 0.1).exit_code == 2
    assert run("sweep", "--a-min", 0.1, "--a-max", 0.5, "--step", 0).exit_code == 2
