import csv
import io
import json

import numpy as np
import pytest

from spectralsum import __version__
from spectralsum.cli import main
from spectralsum.config import ConfigError, ExperimentConfig, parse_schedule
from spectralsum.instances import builtin_pair
from spectralsum.linalg import dump_matrix_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def body(text):
    return [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]


def test_converge_columns(capsys):
    code, out, _ = run_cli(capsys, "converge", "--pair", "pauli", "--function", "gaussian:width=1",
                           "--schedule", "1,2,4,8")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"# spectralsum {__version__}"
    cfg = json.loads(lines[1].removeprefix("# config: "))
    assert cfg["schedule"] == [1, 2, 4, 8] and cfg["pair"] == "pauli"
    rows = body(out)
    assert rows[0] == ["N", "error", "order"]
    assert float(rows[1][1]) == pytest.approx(0.47626315534762226, abs=1e-11)


def test_histories_deterministic(capsys, tmp_path):
    args = ["histories", "--pair", "pauli", "--N", "2", "--samples", "2000", "--seed", "9"]
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second
    rows = body(first)
    assert rows[0] == ["outcome", "exact_prob", "empirical_freq"]
    assert sum(float(r[2]) for r in rows[1:]) == pytest.approx(1.0)


def test_output_file(capsys, tmp_path):
    path = tmp_path / "r.csv"
    code, out, _ = run_cli(capsys, "jordan", "--pair", "random:3:2", "--N-schedule", "4,8",
                           "--output", str(path))
    assert code == 0 and out == ""
    assert body(path.read_text())[0] == ["N", "error"]


def test_matrix_files(capsys, tmp_path):
    A, B = builtin_pair("rotated:0.3")
    dump_matrix_json(A, tmp_path / "a.json")
    dump_matrix_json(B, tmp_path / "b.json")
    code, out, _ = run_cli(capsys, "variation", "--example", "custom", "--A", str(tmp_path / "a.json"),
                           "--B", str(tmp_path / "b.json"), "--N-max", "3")
    assert code == 0
    assert len(body(out)) == 4


@pytest.mark.parametrize(
    "argv, field",
    [
        (["histories"], "seed"),
        (["converge", "--A", "/no/such.json", "--B", "/no/such.json"], "A"),
        (["converge", "--schedule", "4,2"], "schedule"),
        (["converge", "--function", "nope:x=1"], "function"),
        (["pvm", "--alpha", "3", "--beta", "1"], "beta"),
        (["poly", "--coeffs", "1,1"], "coeffs"),
        (["variation", "--example", "other"], "example"),
    ],
)
def test_validation_exit_code(capsys, argv, field):
    code, _, err = run_cli(capsys, *argv)
    assert code == 1
    assert f"invalid {field}" in err


def test_ragged_matrix_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "re": [[1, 0], [0]]}))
    code, _, err = run_cli(capsys, "converge", "--A", str(bad), "--B", str(bad))
    assert code == 1 and "ragged" in err


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("SPECTRAL_SUM_BUDGET", "10")
    code, _, err = run_cli(capsys, "converge", "--route", "enumeration", "--schedule", "1,8")
    assert code == 2 and "budget" in err


def test_selftest(capsys):
    code, out, _ = run_cli(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") >= 9 and "FAIL" not in out


@pytest.mark.parametrize("task, column", [("weyl", "abs_err"), ("heatkernel", "rel_err"),
                                          ("dirichlet", "total_variation")])
def test_continuum_tasks(capsys, task, column):
    extra = ["--k", "128", "--N", "16,32"] if task != "dirichlet" else ["--n-list", "2,4,8"]
    code, out, _ = run_cli(capsys, "continuum", task, *extra)
    assert code == 0
    assert column in body(out)[0]


def test_pvm_bump(capsys):
    code, out, _ = run_cli(capsys, "pvm", "--variant", "bump", "--N", "64,128,256")
    assert code == 0
    assert float(body(out)[-1][2]) < 1e-6


@pytest.mark.parametrize(
    "text, expected",
    [("1,2,4,...,32", [1, 2, 4, 8, 16, 32]), ("2,5,...,14", [2, 5, 8, 11, 14]),
     ("3,9,...,100", [3, 9, 27, 81, 100]), ("7", [7])],
)
def test_parse_schedule(text, expected):
    assert parse_schedule(text) == expected


def test_config_json_has_fixed_order():
    a = ExperimentConfig("converge").to_json()
    assert list(json.loads(a)) == sorted(json.loads(a))


def test_config_validation_field():
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig("continuum", k=100).validate()
    assert exc.value.field == "k"
