import io
import json
import subprocess
import sys

import pytest

from guarded.cli import WORKED_PREFIX, demo_results, main
from guarded.fixtures import STAR_EXAMPLE, read_fixture
from guarded.parser import parse_equation_file
from guarded.trees import RationalTree, bisim_equal, solve_system


def run(argv, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "guarded", *argv], input=stdin,
                          capture_output=True, text=True, timeout=600)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def star_file(tmp_path):
    p = tmp_path / "star.eqs"
    p.write_text(read_fixture(STAR_EXAMPLE))
    return str(p)


def call(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_demo_matches_every_fixture():
    assert all(r["match"] for r in demo_results())
    code, text = call(["demo"])
    assert code == 0 and "MISMATCH" not in text and WORKED_PREFIX in text


def test_demo_json():
    code, text = call(["demo", "--format", "json"])
    rows = json.loads(text)
    assert code == 0 and len(rows) == 5 and all(r["match"] for r in rows)


def test_solve_text(star_file):
    code, text = call(["solve", star_file, "--depth", "3"])
    assert code == 0
    assert text.splitlines()[0] == f"x1 = {WORKED_PREFIX}"


def test_solve_json_graph_round_trips(star_file):
    code, text = call(["solve", star_file, "-k", "2", "--format", "json", "--graph"])
    data = json.loads(text)
    assert code == 0 and data["depth"] == 2
    want = solve_system(parse_equation_file(read_fixture(STAR_EXAMPLE))[1])
    for x in ("x1", "x2"):
        tree = RationalTree.from_json(data["solutions"][x]["tree"])
        assert bisim_equal(tree, want[x])


def test_solve_reads_stdin():
    code, out, _ = run(["solve", "-", "-k", "1"], stdin="sig sigma/1, c/0\nvars x\nx = sigma(x)\n")
    assert code == 0 and out.strip() == "x = sigma(?)"


def test_unguarded_input_is_rejected(tmp_path):
    p = tmp_path / "bad.eqs"
    p.write_text("sig c/0\nvars x\nx = x\n")
    code, out, err = run(["solve", str(p)])
    assert code == 2 and out == ""
    assert f"{p}:3:1: E_UNGUARDED" in err


def test_missing_file():
    code, _, err = run(["solve", "/nonexistent/file.eqs"])
    assert code == 2 and err


@pytest.mark.parametrize("argv", [
    ["check", "--model", "cms", "--r", "1"],
    ["check", "--model", "cms", "--r", "x"],
    ["check", "--model", "nope"],
    ["check", "--model", "presheaf", "--n", "-1"],
    ["solve", "f", "--depth", "-2"],
])
def test_bad_arguments_exit_two(argv):
    code, _, _ = run(argv)
    assert code == 2


def test_exhaustive_needs_finite_hom_sets():
    code, _, err = run(["check", "--model", "ctree", "--exhaustive"])
    assert code == 2 and "exhaustive" in err


def test_check_passes_and_is_deterministic():
    argv = ["check", "--model", "cms", "--cases", "20", "--seed", "5", "--format", "json"]
    a, b = call(argv), call(argv)
    assert a[0] == 0 and a == b
    data = json.loads(a[1])
    assert data["passed"] and data["seed"] == 5


def test_seed_environment_variable():
    env_run = subprocess.run([sys.executable, "-m", "guarded", "check", "--model", "trivial", "--cases", "5"],
                             capture_output=True, text=True, env={"GUARDED_SEED": "11", "PATH": ""}, timeout=600)
    assert env_run.returncode == 0 and "seed 11" in env_run.stdout


def test_identity_mode_exits_one():
    code, text = call(["check", "--model", "cpo", "--mode", "identity", "--cases", "30"])
    assert code == 1 and "uniformity" in text and "FAIL" in text


@pytest.mark.slow
def test_exhaustive_chain_check():
    code, text = call(["check", "--model", "presheaf", "--n", "1", "--exhaustive"])
    assert code == 0, text
    assert "FAIL" not in text and "uniformity" in text
