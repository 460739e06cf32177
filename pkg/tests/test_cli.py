import csv
import io
import json
import subprocess
import sys

import pytest

from theta_forge.cli import SCHEMA, CliConfig, UsageError, main, run


def cli(*args):
    p = subprocess.run([sys.executable, "-m", "theta_forge.cli", *args], capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def test_eval_theta3_at_i():
    rc, out, _ = cli("eval", "--func", "theta3", "--tau=1j")
    assert rc == 0
    rec = json.loads(out)
    assert rec["schema"] == SCHEMA
    assert rec["value"].startswith("1.08643481121330801")
    assert rec["error_bound"] < 1e-20


def test_eval_plain_and_csv():
    out = io.StringIO()
    cfg = CliConfig("eval", output="plain", args={"func": "J", "x": 0, "tau": 2j})
    assert run(cfg, out) == 0
    assert out.getvalue().startswith("166.375")
    out = io.StringIO()
    assert run(CliConfig("eval", output="csv", args={"func": "theta1", "x": 0.1, "tau": 1j}), out) == 0
    rows = list(csv.reader(io.StringIO(out.getvalue())))
    assert rows[0] == ["func", "value", "error_bound"] and rows[1][1].startswith("0.2804076094869081")


def test_bad_inputs_exit_1():
    assert cli("eval", "--func", "theta1", "--tau=-1i")[0] == 1
    assert cli("eval", "--func", "wp", "--x", "0", "--tau=1j")[0] == 1
    assert cli("eval", "--func", "nope", "--tau=1j")[0] == 1
    assert cli("invert", "--g2", "3", "--g3", "1")[0] == 1
    assert main(["eval", "--func", "theta1", "--tau", "1j", "--precision", "1e-20"]) == 1
    with pytest.raises(UsageError):
        CliConfig("eval", output="xml")


def test_convergence_failure_exit_3():
    rc, _, err = cli("eval", "--func", "theta1", "--x", "0.3", "--tau=0.1+1e-7j")
    assert rc == 3 and "convergence" in err


def test_verify_exit_codes_and_determinism():
    rc, out, _ = cli("verify", "--suite", "x", "--samples", "2", "--seed", "7")
    assert rc == 0
    rep = json.loads(out)
    assert rep["schema"] == SCHEMA and rep["failed"] == 0 and rep["checks"] == 2
    again = json.loads(cli("verify", "--suite", "x", "--samples", "2", "--seed", "7")[1])
    assert [r["point"] for r in again["results"]] == [r["point"] for r in rep["results"]]
    other = json.loads(cli("verify", "--suite", "x", "--samples", "2", "--seed", "8")[1])
    assert [r["point"] for r in other["results"]] != [r["point"] for r in rep["results"]]
    assert cli("verify", "--suite", "x", "--samples", "2", "--tol-scale", "1e-30")[0] == 2


@pytest.mark.parametrize("suite", ["var", "scalars", "noncanonical", "p6"])
def test_verify_suites(suite):
    out = io.StringIO()
    cfg = CliConfig("verify", seed=1, args={"suite": suite, "samples": 1, "tol_scale": 1.0})
    assert run(cfg, out) == 0
    assert json.loads(out.getvalue())["failed"] == 0


def test_invert():
    rc, out, _ = cli("invert", "--g2", "4", "--g3", "0")
    assert rc == 0
    rec = json.loads(out)
    assert rec["omega"].startswith("1.31102877714605990")
    assert rec["error_bound"] < 1e-20


def test_coeffs_csv_and_json():
    rc, out, _ = cli("coeffs", "--grid", "A", "--m", "2", "--n", "2", "--report", "csv")
    assert rc == 0
    assert out.splitlines() == ["1,-3,-54", "-1,-18,4968", "-9,513,257580"]
    rc, out, _ = cli("coeffs", "--grid", "B_eps", "--eps", "0", "--m", "2", "--n", "1")
    assert json.loads(out)["rows"] == [["1", "-1"], ["0", "12"], ["0", "0"]]


def test_poles_sidecar(tmp_path):
    path = tmp_path / "poles.csv"
    rc, out, _ = cli("poles", "--A", "1j", "--B", "0", "--range=-3:3", "--out", str(path))
    assert rc == 0 and out == ""
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["n", "m", "re(x)", "im(x)", "theta_abs"]
    meta = json.loads((tmp_path / "poles.csv.json").read_text())
    assert meta["schema"] == SCHEMA and meta["admissible_count"] == len(rows) - 1
    assert meta["verified_count"] == meta["admissible_count"]


def test_poles_flag_failures():
    rc, out, err = cli("poles", "--A", "1j", "--B", "0", "--range=-2:2", "--zero-tol", "1e-300")
    assert rc == 2
    assert len(json.loads(err)["flagged"]) == len(out.splitlines()) - 1
    assert cli("poles", "--A", "1j", "--B", "0", "--range=2:1")[0] == 1


def test_p6():
    rc, out, _ = cli("p6", "--A", "0.3+0.1j", "--B", "0.2", "--x", "0.4", "--residual", "--okamoto")
    assert rc == 0
    rec = json.loads(out)
    assert rec["residual"] < 1e-10 and rec["okamoto_y"] == rec["y"]
    rc, out, _ = cli("p6", "--variant", "picard", "--A", "0.3+0.1j", "--B", "0.2", "--x", "0.4", "--residual")
    assert rc == 0 and json.loads(out)["residual"] < 1e-10


def test_threads_env(monkeypatch):
    monkeypatch.setenv("THETA_FORGE_THREADS", "2")
    out = io.StringIO()
    cfg = CliConfig("verify", seed=3, args={"suite": "g2g3", "samples": 2, "tol_scale": 1.0})
    assert run(cfg, out) == 0
    monkeypatch.setenv("THETA_FORGE_THREADS", "1")
    ref = io.StringIO()
    run(cfg, ref)
    assert json.loads(out.getvalue()) == json.loads(ref.getvalue())
