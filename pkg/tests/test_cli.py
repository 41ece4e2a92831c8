from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from corpus import RANK11, SMALL
from gkz.cli import main

SMALL_PROBLEM = {"A": SMALL, "beta": ["1", "1"], "w": ["0", "1", "0"]}
RANK11_PROBLEM = {"A": RANK11, "beta": ["1", "1", "1"]}


def run(command, problem, *flags, tmp_path, capsys):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem) if not isinstance(problem, str) else problem)
    code = main([command, str(path), *flags])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dim(tmp_path, capsys):
    code, out, _ = run("dim", SMALL_PROBLEM, tmp_path=tmp_path, capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "dim"
    assert doc["result"]["dimension"] == 2
    assert sorted(e["v"] for e in doc["result"]["exponents"]) == [["0", "1", "0"], ["1/2", "0", "1/2"]]
    assert doc["input"]["beta"] == ["1", "1"]


def test_rank(tmp_path, capsys):
    code, out, _ = run("rank", RANK11_PROBLEM, tmp_path=tmp_path, capsys=capsys)
    res = json.loads(out)["result"]
    assert code == 0
    assert (res["rank"], res["volume"], res["exceptional"]) == (11, 9, True)
    assert res["by_dimension"] == {"1": 3, "2": 6, "3": 2}


def test_iso(tmp_path, capsys):
    code, out, _ = run("iso", {**RANK11_PROBLEM, "beta2": ["1", "1", "1"]}, tmp_path=tmp_path, capsys=capsys)
    assert code == 0 and json.loads(out)["result"]["isomorphic"] is True
    code, out, _ = run("iso", {**RANK11_PROBLEM, "beta2": ["1", "0", "0"]}, tmp_path=tmp_path, capsys=capsys)
    res = json.loads(out)["result"]
    assert res["isomorphic"] is False
    assert [f["members"] for f in res["differ_at"]] == [[]]


def test_series_and_verify_flags(tmp_path, capsys):
    code, out, _ = run("series", SMALL_PROBLEM, "--order", "6", "--verify", tmp_path=tmp_path, capsys=capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["order"] == "6"
    by_exp = {tuple(s["exponent"]): s for s in res["series"]}
    assert by_exp[("0", "1", "0")]["terms"] == [{"u": [0, 0, 0], "coeff": "1"}]
    half = by_exp[("1/2", "0", "1/2")]
    assert {"u": [-1, 2, -1], "coeff": "1/8"} in half["terms"]
    assert half["annihilated"] and half["oracle_agrees"]


def test_other_commands(tmp_path, capsys):
    for command in ("triangulate", "faces", "etau"):
        code, out, _ = run(command, SMALL_PROBLEM, "--verify", tmp_path=tmp_path, capsys=capsys)
        assert code == 0, command
    code, out, _ = run("triangulate", SMALL_PROBLEM, tmp_path=tmp_path, capsys=capsys)
    assert [c["vertices"] for c in json.loads(out)["result"]["cells"]] == [[1, 3]]
    code, out, _ = run("exceptional", RANK11_PROBLEM, tmp_path=tmp_path, capsys=capsys)
    assert json.loads(out)["result"]["exceptional"] is True
    code, out, _ = run("sweep", RANK11_PROBLEM, "--window", "0:3", tmp_path=tmp_path, capsys=capsys)
    assert json.loads(out)["result"]["exceptional"] == [["1", "1", "1"]]
    code, out, _ = run("cm", RANK11_PROBLEM, tmp_path=tmp_path, capsys=capsys)
    res = json.loads(out)["result"]
    assert res["cohen_macaulay"] is False and res["witness"]["beta"] == ["1", "1", "1"]


@pytest.mark.parametrize("problem, code", [
    ("{not json", 1),
    ({"beta": ["1"]}, 1),
    ({"A": [[1, 1, 1], [0, 1, 2]], "beta": [0.5, 1], "w": ["0", "1", "0"]}, 1),
    ({"A": [[1, 1, 1], [0, 1, 2]], "beta": ["1"], "w": ["0", "1", "0"]}, 1),
    ({"A": [[1, 2]], "beta": ["1"], "w": ["0", "0"]}, 2),
    ({"A": [[1, 1, 1], [0, 1, 2]], "beta": ["1", "1"], "w": ["0", "0", "0"]}, 2),
])
def test_exit_codes(problem, code, tmp_path, capsys):
    got, out, err = run("dim", problem, tmp_path=tmp_path, capsys=capsys)
    assert got == code
    assert out == ""
    assert "error" in json.loads(err)


def test_not_simplex_exit_code(tmp_path, capsys):
    problem = {"A": [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1]], "beta": ["1", "1", "1"]}
    code, _, err = run("rank", problem, tmp_path=tmp_path, capsys=capsys)
    assert code == 2 and json.loads(err)["error"] == "NotSimplex"


def test_budget_exit_code(tmp_path, capsys):
    code, _, err = run("etau", RANK11_PROBLEM | {"beta": ["40", "37", "51"]}, "--budget", "1",
                       tmp_path=tmp_path, capsys=capsys)
    assert code == 3 and json.loads(err)["error"] == "BudgetExceeded"


def test_missing_key_is_parse_error(tmp_path, capsys):
    code, _, _ = run("iso", RANK11_PROBLEM, tmp_path=tmp_path, capsys=capsys)
    assert code in (1, 2)


def test_deterministic_output_via_stdin():
    text = json.dumps(SMALL_PROBLEM)
    outs = [
        subprocess.run([sys.executable, "-m", "gkz", "dim"], input=text, capture_output=True, text=True, check=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1]
    json.loads(outs[0])


def test_verify_command(capsys):
    code = main(["verify"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0 and doc["result"]["passed"]
