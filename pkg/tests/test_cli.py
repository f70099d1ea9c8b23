import csv
import io
import json
import subprocess
import sys

import pytest

from gcflab.cli import main
from gcflab.formatting import unlimited_int_digits


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_convergents(capsys):
    code, out, _ = run_cli(capsys, "convergents", "--rule", "a->ab;b->aa", "--assign", "a=1,b=3", "--depth", "6")
    assert code == 0
    last = rows(out)[-1]
    assert (last["n"], last["p"], last["q"]) == ("6", "119", "99")
    assert last["value"] == "1.20202020202020202020202020202"


def test_convergents_depth_zero_and_fibonacci(capsys):
    _, out, _ = run_cli(capsys, "convergents", "--depth", "0")
    assert rows(out) == [{"n": "0", "p": "1", "q": "1", "value": "1"}]
    _, out, _ = run_cli(capsys, "convergents", "--assign", "a=1,b=1", "--depth", "5")
    assert [r["q"] for r in rows(out)] == ["1", "1", "2", "3", "5", "8"]


def test_diagnose(capsys):
    code, out, err = run_cli(capsys, "diagnose", "--depth", "200")
    assert code == 0 and err == ""
    table = rows(out)
    assert len(table) == 200
    assert all(int(r["q"]) > int(r["d"]) ** 2 for r in table if int(r["n"]) >= 10)
    _, out, _ = run_cli(capsys, "diagnose", "--assign", "a=1,b=1", "--depth", "20", "--format", "json")
    objs = [json.loads(line) for line in out.splitlines()]
    assert all(o["d"] == 1 and o["P"] == 1 for o in objs)


def test_diagnose_rejects_depth_one(capsys):
    code, _, err = run_cli(capsys, "diagnose", "--depth", "1")
    assert code == 2 and "--depth" in err


def test_raney(capsys):
    code, out, _ = run_cli(capsys, "raney", "table", "--det", "3")
    assert code == 0 and len(rows(out)) == 10
    code, out, _ = run_cli(capsys, "raney", "run", "--det", "3", "--state", "1,0,0,3", "--input", "RLLR")
    last = rows(out)[-1]
    assert last["output"] == "LLRRRR" and last["config"] == "3,0,0,1"
    _, out, _ = run_cli(capsys, "raney", "run", "--det", "3", "--state", "1,0,0,3", "--input", "RLLR", "--format", "json")
    data = json.loads(out)
    assert data["output"] == "LLRRRR" and data["final"] == "3,0,0,1"
    _, out, _ = run_cli(capsys, "raney", "states", "--det", "2")
    assert len(rows(out)) == 2
    _, out, _ = run_cli(capsys, "raney", "table", "--det", "3", "--format", "dot")
    assert len(out.splitlines()) == 10


def test_raney_bad_state(capsys):
    code, _, err = run_cli(capsys, "raney", "run", "--det", "3", "--state", "1,0,0", "--input", "R")
    assert code == 2 and "--state" in err
    code, _, _ = run_cli(capsys, "raney", "run", "--det", "3", "--state", "3,0,0,1", "--input", "RX")
    assert code == 2


def test_rcf(capsys):
    _, out, _ = run_cli(capsys, "rcf", "--foldings", "3")
    assert json.loads(out) == {"confirmed": [1, 4, 1, 17, 1, 1, 1, 1, 2], "next_lower_bound": 3, "source": "transducer"}
    _, out, _ = run_cli(capsys, "rcf", "--foldings", "2")
    assert json.loads(out)["confirmed"] == [1, 4, 1] and json.loads(out)["next_lower_bound"] == 10


def test_rcf_crosscheck(capsys):
    code, out, _ = run_cli(capsys, "rcf", "--foldings", "12", "--crosscheck", "--depth", "4096")
    data = json.loads(out)
    assert code == 0 and data["agreement"] is True and data["agreed"] >= 40


def test_stammer(capsys):
    code, out, _ = run_cli(capsys, "stammer", "--exponent", "4/3", "--length", "4096")
    table = rows(out)
    assert code == 0 and table[0]["kind"] == "bound" and table[0]["exponent"] == "4/3"
    lengths = [int(r["length"]) for r in table[1:]]
    assert len(lengths) >= 5 and lengths == sorted(set(lengths))


@pytest.mark.parametrize(
    "argv",
    [
        ["stammer", "--exponent", "1"],
        ["stammer", "--exponent", "1/2"],
        ["stammer", "--rule", "a->ba;b->ab", "--seed", "a"],
        ["stammer", "--rule", "a->"],
        ["convergents", "--assign", "a=1"],
        ["convergents", "--assign", "a=0,b=3"],
        ["convergents", "--assign", "a=x,b=3"],
        ["rcf", "--foldings", "-1"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("gcflab: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["convergents", "--depth", "many"])
    assert exc.value.code == 2


def test_quadratic(capsys):
    _, out, _ = run_cli(capsys, "quadratic", "--period", "2", "--format", "json")
    data = json.loads(out)
    assert (data["A"], data["B"], data["C"]) == (3, -1, -3)
    assert abs(data["lo"] - (1 + 37**0.5) / 6) < 1e-12
    _, out, _ = run_cli(capsys, "quadratic", "--period", "1", "--literal")
    assert rows(out)[0]["B"] == "2"  # q_1 - p_0 = 3 - 1 on the {1,3} input


def test_out_file(capsys, tmp_path):
    target = tmp_path / "c.csv"
    code, out, _ = run_cli(capsys, "convergents", "--depth", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[-1] == "3,11,9,1.22222222222222222222222222222"


@pytest.mark.parametrize(
    "argv",
    [
        ["diagnose", "--depth", "300"],
        ["diagnose", "--depth", "50", "--format", "json"],
        ["rcf", "--foldings", "6", "--crosscheck", "--depth", "200"],
        ["raney", "table", "--det", "5", "--format", "json"],
    ],
)
def test_deterministic(capsys, argv):
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_entry_point_huge_integers():
    # p_n beyond CPython's 4300-digit str limit must still print exactly
    proc = subprocess.run(
        [sys.executable, "-m", "gcflab.cli", "convergents", "--depth", "15000", "--format", "json"],
        capture_output=True,
        text=True,
        check=True,
    )
    with unlimited_int_digits():
        last = json.loads(proc.stdout.splitlines()[-1].split(', "value"')[0] + "}")
        assert last["n"] == 15000 and len(str(last["p"])) > 4300
