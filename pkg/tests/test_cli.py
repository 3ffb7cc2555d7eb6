import io
import json
from pathlib import Path

import pytest

from posetfix.cli import dumps, run

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), text


def write_config(tmp_path, name, **overrides):
    cfg = json.loads((DATA / "linear.json").read_text())
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def test_poset_check():
    code, doc, _ = call("poset-check", "--poset", DATA / "diamond.json")
    assert code == 0
    assert doc["covers"] == [[0, 1], [0, 2], [1, 3], [2, 3]]
    assert doc["minimal"] == [0] and doc["maximal"] == [3]


def test_poset_check_cycle(tmp_path):
    path = tmp_path / "cyc.json"
    path.write_text(json.dumps({"n": 2, "covers": [[0, 1], [1, 0]]}))
    code, doc, _ = call("poset-check", "--poset", path)
    assert code == 2
    assert "cycle" in doc["error"]


def test_poset_sup():
    code, doc, _ = call("poset-sup", "--poset", DATA / "diamond.json", "--subset", 1, 2, 3)
    assert code == 0
    assert doc["directed"] and doc["supremum"] == 3 and doc["supremum_via_intervals"] == 3
    code, doc, _ = call("poset-sup", "--poset", DATA / "diamond.json", "--subset", 1, 2)
    assert not doc["directed"] and doc["supremum"] == 3
    assert "supremum_via_intervals" not in doc


def test_fix_orbit():
    code, doc, _ = call("fix-orbit", "--poset", DATA / "diamond.json", "--map", DATA / "union_a.json", "--start", 0)
    assert code == 0
    assert doc["result"] == 1
    assert doc["trace"] == [0, 1, 1]


def test_fix_orbit_witness_failure(tmp_path):
    path = tmp_path / "bottom.json"
    path.write_text(json.dumps({"images": [0, 0, 0, 0], "poset": str(DATA / "diamond.json")}))
    code, doc, _ = call("fix-orbit", "--map", path, "--start", 3)
    assert code == 1
    assert doc["condition"] == "c ⪯ T(c) fails"


def test_fix_orbit_non_monotone_map(tmp_path):
    path = tmp_path / "swap.json"
    path.write_text(json.dumps({"images": [3, 1, 2, 0], "poset": str(DATA / "diamond.json")}))
    code, doc, _ = call("fix-orbit", "--map", path, "--start", 0)
    assert code == 1
    assert doc["condition"] == "T monotone fails"


def test_fix_family():
    code, doc, _ = call(
        "fix-family", "--family", DATA / "union_a.json", DATA / "union_b.json", "--start", 0
    )
    assert code == 0
    assert doc["result"] == 3
    assert doc["closure"] == [0, 1, 2, 3]
    assert doc["fixed_point_set"] == [3]


def test_verify():
    code, doc, _ = call("verify", "--n", 3)
    assert code == 0
    assert doc["failures"] == []
    assert doc["posets"] == 1 + 3 + 19


def test_urysohn_solve(tmp_path):
    code, doc, _ = call("urysohn-solve", "--config", DATA / "linear.json", "--csv", tmp_path / "lin")
    assert code == 0
    assert all(abs(x - 5 / 3) <= 1e-9 for x in doc["solution"])
    assert doc["residual"] <= 1e-10
    assert (tmp_path / "lin_solution.csv").exists()
    assert (tmp_path / "lin_trace.csv").exists()


def test_urysohn_solve_overrides():
    code, doc, _ = call("urysohn-solve", "--config", DATA / "linear.json", "--max-iter", 3)
    assert code == 1
    assert doc["condition"] == "convergence within max_iter fails"
    code, doc, _ = call("urysohn-solve", "--config", DATA / "linear.json", "--tol", 1e-3)
    assert code == 0 and doc["iterations"] < 27


def test_urysohn_check_passes():
    code, doc, _ = call("urysohn-check", "--config", DATA / "saturating.json")
    assert code == 0
    assert all(c["passed"] for c in doc["hypothesis_checks"])


@pytest.mark.parametrize(
    "kernel, g, condition",
    [
        ({"name": "linear", "params": {"lam": -1.0}, "M": 0.4}, 1.0, "F monotone in its third coordinate fails"),
        ({"name": "quadratic", "params": {"a": 1.0}, "M": 0.4}, 1.0, "|F(t,s,x)| ≤ h(t,s) + M|x| fails"),
        ({"name": "linear", "params": {"lam": 0.4}}, -1.0, "J(0) ≥ 0 fails"),
    ],
)
def test_urysohn_gatekeeping(tmp_path, kernel, g, condition):
    path = write_config(tmp_path, "bad.json", kernel=kernel, g={"kind": "constant", "value": g})
    code, doc, _ = call("urysohn-check", "--config", path)
    assert code == 1
    assert condition in doc["failed"]
    code, doc, _ = call("urysohn-solve", "--config", path)
    assert code == 1
    assert condition in doc["failed"]
    assert doc["condition"] == doc["failed"][0]


@pytest.mark.parametrize(
    "argv",
    [
        ["fix-orbit", "--map", "missing.json", "--start", "0"],
        ["verify", "--n", "9"],
        ["nonsense"],
        ["poset-sup", "--poset", str(DATA / "diamond.json"), "--subset", "7"],
    ],
)
def test_malformed_input_exit_2(argv):
    assert run(argv, stdout=io.StringIO(), stderr=io.StringIO()) == 2


def test_malformed_config_exit_2(tmp_path):
    path = write_config(tmp_path, "bad.json", grid={"kind": "uniform", "a": 0.0})
    code, doc, _ = call("urysohn-solve", "--config", path)
    assert code == 2


def test_reports_are_byte_identical():
    a = call("urysohn-solve", "--config", DATA / "linear.json")[2]
    b = call("urysohn-solve", "--config", DATA / "linear.json")[2]
    assert a == b
    a = call("verify", "--n", 2)[2]
    assert a == call("verify", "--n", 2)[2]


def test_dumps_float_format():
    assert dumps({"b": 0.1, "a": [1, True, None]}) == '{"b": 0.10000000000000001, "a": [1, true, null]}'
    assert json.loads(dumps(1 / 3)) == 1 / 3
