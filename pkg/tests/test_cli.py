import json
import subprocess
import sys

import pytest

from recurrence_lab.cli import SCHEMA, RunConfig, execute, main
from recurrence_lab.intsets import Bohr, enumerate as enum
from recurrence_lab.recurrence import bohr_min_profile
from recurrence_lab.torus import irrational_surrogate
from fractions import Fraction


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_recur_test_golden(capsys):
    code, out, _ = run(["recur-test", "--system", "rotation:golden", "--set", "bohr:[golden],eps=0.1",
                        "--window", "100000"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == SCHEMA and rep["status"] == "found"
    g = irrational_surrogate("golden")
    R = Bohr((g,), Fraction(1, 10))
    prof = bohr_min_profile(R, [g], 100000)
    assert rep["result"]["bohr_min_profile"] == {"value": str(prof.value), "n": prof.n}
    assert rep["result"]["report"]["witness"]["n"] == enum(R, 100)[0]
    assert rep["result"]["verified"]


def test_not2large_none_found(capsys):
    code, out, err = run(["coloring", "not2large", "--alpha", "sqrt2", "--eps", "0.1", "--window", "20000"], capsys)
    assert code == 2
    assert "none found" in err and "length=6" in err
    rep = json.loads(out)
    assert rep["status"] == "none" and rep["result"]["length"] == 6


def test_lift_with_w_file(tmp_path, capsys):
    w = tmp_path / "w.json"
    w.write_text(json.dumps(["1/100", "-1/200", "1/300"]))
    code, out, _ = run(["lift", "--s", "4", "--r", "3", "--n", "1000", "--w-file", str(w)], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["lower_vanishes"] and res["diagonal_exact"] and res["residual_matches_tail"]
    assert all(Fraction(x) < Fraction(1, 10) for x in res["n_times_residual_norms"])


@pytest.mark.parametrize("argv, fragment", [
    (["sets", "--set", "bohr:[],eps=0.1"], "invalid spec"),
    (["sets", "--set", "odds", "--window", "100000000"], "window overflow"),
    (["lift", "--s", "4", "--n", "10", "--w-file", "/nonexistent/w.json"], "invalid spec file"),
    (["recur-test", "--system", "rotation:[fx128.1]", "--set", "odds", "--center", "1/3"], "backend mismatch"),
])
def test_errors_exit_one(argv, fragment, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1 and out == ""
    assert fragment in err


def test_rerun_reproduces_bytes(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert main(["coloring", "encode", "--coloring", "random:r=4", "--window", "300", "--seed", "7",
                 "--out", str(first)]) == 0
    assert main(["rerun", str(first), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    cfg = RunConfig.from_json(json.loads(first.read_text())["config"])
    assert execute(cfg)[1] == first.read_text()


def test_seed_changes_random_report():
    base = RunConfig("coloring", "encode", {"coloring": "random:r=3"}, window=100)
    a = execute(base)[1]
    b = execute(RunConfig("coloring", "encode", {"coloring": "random:r=3"}, window=100, seed=1))[1]
    assert a == execute(base)[1]
    assert a != b


def test_csv_outputs(capsys):
    code, out, _ = run(["cayley", "growth", "--set", "odds", "--schedule", "10,100", "--format", "csv"], capsys)
    assert code == 0 and out.splitlines() == ["N,lower,upper", "10,2,2", "100,2,2"]
    code, out, _ = run(["flw", "--beta", "sqrt2", "--backend", "fixed", "--t", "0,1/3", "--window", "2000",
                        "--format", "csv"], capsys)
    assert out.splitlines()[0] == "t,re,im,abs" and len(out.splitlines()) == 3


def test_growth_shards_do_not_change_report(capsys):
    argv = ["cayley", "growth", "--set", "squares", "--schedule", "50,100,200"]
    _, one, _ = run(argv, capsys)
    _, many, _ = run(argv + ["--jobs", "3"], capsys)
    assert one == many


def test_other_subcommands(capsys):
    code, out, _ = run(["sets", "--set", "diff(explicit:1,4,9,16)", "--window", "20"], capsys)
    assert code == 0 and json.loads(out)["result"]["members"] == [3, 5, 7, 8, 12, 15]
    code, out, _ = run(["orbit", "--system", "rotation:1/4", "--steps", "8", "--radius", "1/10",
                        "--window", "20"], capsys)
    assert json.loads(out)["result"]["return_times"] == [4, 8, 12, 16, 20]
    code, out, _ = run(["multi-recur", "--system", "rotation:1/3", "--set", "all", "--ell", "2",
                        "--window", "20", "--radius", "1/20", "--profile"], capsys)
    res = json.loads(out)["result"]
    assert code == 0 and res["report"]["witness"]["n"] == 3 and res["pointwise_profile"]["value"] == "0"
    code, out, _ = run(["coloring", "affine", "--alpha", "golden", "--window", "600"], capsys)
    assert code == 2 and json.loads(out)["result"]["m"] == 8
    code, out, _ = run(["coloring", "join", "--left", "parity", "--right", "rotation:alpha=1/3,r=3",
                        "--steps", "all", "--length", "2", "--window", "30"], capsys)
    res = json.loads(out)["result"]
    assert code == 0 and res["progression"]["step"] == 6
    code, out, _ = run(["cayley", "build", "--set", "explicit:1", "--window", "5"], capsys)
    assert json.loads(out)["result"]["edge_list"].startswith("p edge 6 5")
    code, out, _ = run(["cayley", "chroma", "--set", "explicit:1,2,3", "--window", "12"], capsys)
    res = json.loads(out)["result"]
    assert res["lower"] == res["upper"] == 4
    code, out, _ = run(["coloring", "avoid", "--steps", "all", "--r", "2", "--length", "3", "--window", "8"], capsys)
    assert code == 0


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "recurrence_lab.cli", "sets", "--set", "odds", "--window", "5",
                           "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines() == ["n", "1", "3", "5"]
