import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import DATA
from divcw.cli import COLUMNS, main
from divcw.graph import evaluate, gen_path, parse_decomposition, validate

P5 = str(DATA / "p5.cw")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_check_valid():
    code, text = run("check", P5)
    assert code == 0 and text.strip() == "valid, n=5 m=4 width=3"


@pytest.mark.parametrize("name", ["bad_duplicate.cw", "bad_noroot.cw"])
def test_check_invalid(name):
    code, text = run("check", str(DATA / name))
    assert code != 0 and text.startswith("invalid")


def test_check_missing_file(capsys):
    code, _ = run("check", str(DATA / "nope.cw"))
    assert code == 2 and "cannot read" in capsys.readouterr().err


@pytest.mark.parametrize("family", ["path", "clique", "biclique"])
@pytest.mark.parametrize("n", range(1, 13))
def test_gen_round_trip(family, n):
    sizes = [str(n)] if family != "biclique" else [str(max(1, n // 2)), str(max(1, n - n // 2))]
    code, text = run("gen", family, *sizes)
    assert code == 0
    D = parse_decomposition(text)
    assert validate(D) == []


def test_gen_wrong_arity(capsys):
    code, _ = run("gen", "biclique", "3")
    assert code == 2


def test_gen_path5_matches_data_file():
    _, text = run("gen", "path", "5")
    assert evaluate(parse_decomposition(text)).same_graph(evaluate(gen_path(5)))


def test_diverse_example():
    code, text = run("diverse", "--decomp", P5, "--problems", "ds:2,ds:2", "--measure", "sum", "--d", "4")
    (row,) = rows(text)
    assert code == 0
    assert list(row) == COLUMNS
    assert row["feasible"] == "true" and row["best_value"] == "4"
    assert row["solutions"] == "v1 v4;v2 v5"
    assert row["wall_ms"] == ""


def test_diverse_infeasible_exit_code():
    code, text = run("diverse", "--decomp", P5, "--problems", "ds:2,ds:2", "--d", "5")
    assert code == 1 and rows(text)[0]["feasible"] == "false"


def test_oracle_p5_minimal_ds_star():
    code, text = run(
        "oracle", "--graph", str(DATA / "p5.graph"), "--problems", "minds,minds,minds,minds", "--measure", "star"
    )
    assert code == 0 and rows(text)[0]["best_value"] == "63"


def test_oracle_p5_minimal_ds_sum():
    _, text = run("oracle", "--graph", "path:5", "--problems", "minds,minds,minds,minds", "--measure", "sum")
    row = rows(text)[0]
    assert row["best_value"] == "20"
    assert sorted(row["solutions"].split(";")) == ["v1 v3 v5", "v1 v3 v5", "v2 v4", "v2 v4"]


def test_oracle_min():
    _, text = run("oracle", "--graph", P5, "--problems", "ds:2,ds:2", "--measure", "min", "--d", "4")
    row = rows(text)[0]
    assert row["feasible"] == "true" and row["best_value"] == "4"


def test_diverse_min_and_verify():
    code, text = run("diverse-min", "--decomp", str(DATA / "c5.cw"), "--problems", "vc:3,vc:3,vc:3", "--d", "2", "--verify")
    assert code == 0 and rows(text)[0]["feasible"] == "true"
    code, _ = run("diverse-min", "--decomp", P5, "--problems", "ds:2,ds:2", "--d", "5", "--verify")
    assert code == 1


def test_diverse_verify_mixed_and_mso():
    code, _ = run(
        "diverse", "--decomp", str(DATA / "paw.cw"),
        "--problems", f"mso:{DATA / 'ds.mso'},vc:3,minvc:4", "--measure", "random", "--seed", "7", "--verify",
    )
    assert code == 0


def test_measure_table_file():
    code, text = run(
        "diverse", "--decomp", P5, "--problems", "ds:2,ds:2", "--measure", f"table:{DATA / 'sum2.measure'}"
    )
    assert code == 0 and rows(text)[0]["best_value"] == "4"
    code, _ = run("diverse", "--decomp", P5, "--problems", "ds:2,ds:2,ds:2", "--measure", f"table:{DATA / 'sum2.measure'}")
    assert code == 2


def test_solve_and_mso_check():
    code, text = run("solve", "--decomp", "clique:3", "--problem", "vc:1", "--verify")
    assert code == 1 and rows(text)[0]["solutions"] == ""
    code, text = run("solve", "--decomp", "clique:3", "--problem", "vc:2", "--verify")
    assert code == 0 and rows(text)[0]["solutions"] in ("v1 v2", "v1 v3", "v2 v3")
    code, text = run("mso-check", "--decomp", P5, "--formula", str(DATA / "ds.mso"), "--verify")
    assert code == 0 and rows(text)[0]["feasible"] == "true"
    code, _ = run("mso-check", "--decomp", "path:3", "--formula-text", "forall vertex x forall vertex y : adj(x,y)")
    assert code == 1


def test_json_mirrors_csv():
    args = ["diverse", "--decomp", P5, "--problems", "vc:3,ds:2", "--measure", "star"]
    _, text = run(*args)
    _, js = run(*args, "--format", "json")
    (obj,) = json.loads(js)
    assert list(obj) == COLUMNS
    assert {k: str(v) for k, v in obj.items()} == rows(text)[0]


def test_timing_fills_wall_ms():
    _, text = run("diverse", "--decomp", P5, "--problems", "ds:2,ds:2", "--timing")
    assert float(rows(text)[0]["wall_ms"]) >= 0


@pytest.mark.parametrize(
    "argv",
    [
        ["diverse", "--decomp", P5, "--problems", "minds,minds"],
        ["diverse", "--decomp", P5, "--problems", "vc:x"],
        ["diverse", "--decomp", P5, "--problems", "vc:-1"],
        ["diverse", "--decomp", P5, "--problems", "foo:1"],
        ["diverse", "--decomp", P5, "--problems", "vc:1,"],
        ["diverse", "--decomp", P5, "--problems", "vc:1", "--measure", "bogus"],
        ["diverse", "--decomp", P5, "--problems", "vc:1", "--d", "-1"],
        ["diverse", "--decomp", P5, "--problems", "vc:1", "--threads", "0"],
        ["diverse-min", "--decomp", P5, "--problems", "vc:1"],
        ["diverse", "--decomp", "path:x", "--problems", "vc:1"],
        ["oracle", "--graph", "path:21", "--problems", "vc:1"],
        ["mso-check", "--decomp", P5, "--formula-text", "forall x : x = x"],
        ["diverse", "--decomp", P5, "--problems", "mso:" + str(DATA / "p5.cw")],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


DETERMINISM_COMMANDS = [
    ["check", P5],
    ["gen", "biclique", "3", "4"],
    ["solve", "--decomp", P5, "--problem", "ds:2"],
    ["diverse", "--decomp", "path:7", "--problems", "vc:4,ds:3,vc:4", "--measure", "star", "--threads", "4"],
    ["diverse", "--decomp", "path:7", "--problems", "vc:4,ds:3,vc:4", "--measure", "star"],
    ["diverse-min", "--decomp", "biclique:3x3", "--problems", "vc:3,vc:3,vc:3", "--d", "2"],
    ["oracle", "--graph", P5, "--problems", "minds,minds,minds", "--measure", "random", "--seed", "5"],
    ["mso-check", "--decomp", P5, "--formula", str(DATA / "is.mso"), "--format", "json"],
]


@pytest.mark.parametrize("argv", DETERMINISM_COMMANDS, ids=lambda a: a[0])
def test_entry_point_is_deterministic(argv):
    cmd = [sys.executable, "-m", "divcw.cli", *argv]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == second.returncode
    assert first.stdout == second.stdout and first.stdout


def test_thread_count_does_not_change_output():
    base = ["diverse", "--decomp", "path:8", "--problems", "vc:4,ds:3,vc:5", "--measure", "random", "--seed", "2"]
    outputs = {run(*base, "--threads", str(t))[1] for t in (1, 2, 4, 8)}
    assert len(outputs) == 1
