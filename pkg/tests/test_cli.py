import json

import pytest

from conseq_lab.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, parse_range
from conseq_lab.enumeration import dp_perm_counts


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("CONSEQ_LAB_CACHE_DIR", str(tmp_path / "cache"))


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_parse_range():
    assert parse_range("3..20") == (3, 20)
    # a bare number sets only the upper end; -1 leaves the lower end to the command
    assert parse_range("12") == (-1, 12)


def test_count_csv_matches_library(capsys):
    code, out = run(capsys, "count", "--pattern", "132", "--n-max", "7", "--r-max", "1")
    assert code == EXIT_OK
    assert out == dp_perm_counts("132", 7, 1).to_csv()


def test_count_json_and_verify(capsys):
    code, out = run(capsys, "count", "--pattern", "132", "--universe", "words", "--k", "3",
                    "--n-max", "5", "--r-max", "1", "--format", "json", "--verify",
                    "--deterministic")
    assert code == EXIT_OK
    obj = json.loads(out)
    assert "generated_at" not in json.dumps(obj)
    assert obj["exact"] is True and obj["config"]["verify"] is True
    table = obj["table"]
    row5 = [int(r["count"]) for r in table["rows"] if r["n"] == 5]
    over5 = [int(o["count"]) for o in table["overflow"] if o["n"] == 5]
    assert sum(row5) + sum(over5) == 3**5


def test_deterministic_runs_identical(capsys):
    args = ("classify", "--d", "3", "--n-max", "7", "--deterministic", "--workers", "1")
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a == b and "candidate partition" in a


def test_recursion_exit_codes(capsys):
    assert run(capsys, "recursion", "--theorem", "nonoverlap", "--pattern", "132",
               "--n", "12", "--deterministic")[0] == EXIT_OK
    assert run(capsys, "recursion", "--theorem", "nonoverlap", "--pattern", "123",
               "--n", "12")[0] == EXIT_USAGE


def test_correlation_command(capsys):
    code, out = run(capsys, "correlation", "--pattern", "132", "--k", "4", "--alpha", "1/2",
                    "--deterministic")
    assert code == EXIT_OK and "127/8319" in out


def test_bounds_reports_poly1_violation(capsys):
    code, out = run(capsys, "bounds", "--pattern", "132", "--deterministic")
    assert code == EXIT_FAIL and "poly1" in out


def test_usage_and_budget_errors(capsys):
    assert main(["count"]) == EXIT_USAGE
    assert main(["count", "--pattern", "11", "--n-max", "3"]) == EXIT_USAGE
    assert main(["count", "--pattern", "132", "--n-max", "12", "--engine", "brute"]) \
        == EXIT_BUDGET


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    assert main(["count", "--pattern", "12", "--n-max", "4", "--output", str(target)]) == 0
    assert target.read_text().startswith("n,r,count")
