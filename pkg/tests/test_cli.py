import csv
import json

import pytest

from strandcalc.cli import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, main, to_plain
from strandcalc.exactpoly import RatPolyN
from strandcalc.maps import closed_melon, double_tadpole_two_point
from fractions import Fraction


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def report(out):
    return json.loads(out.out)


def test_to_plain_writes_fractions_as_ratios():
    assert to_plain(Fraction(-3, 4)) == "-3/4"
    assert to_plain({1: [Fraction(1, 2)]}) == {"1": ["1/2"]}
    assert to_plain(RatPolyN.const(2))["expression"]


def test_enumerate_one_vertex(capsys):
    code, out = run(capsys, "enumerate", "--v", "1")
    r = report(out)
    assert code == EXIT_OK
    assert r["manifest"]["command"] == "enumerate"
    assert r["result"]["count"] == 15


def test_reports_are_deterministic(capsys):
    _, a = run(capsys, "enumerate", "--v", "1", "--unrooted")
    _, b = run(capsys, "enumerate", "--v", "1", "--unrooted")
    assert a.out == b.out
    assert len(report(a)["manifest"]["result_sha256"]) == 64


def test_enumerate_limit_reports_budget(capsys):
    code, out = run(capsys, "enumerate", "--v", "2", "--limit", "10")
    assert code == EXIT_BUDGET
    assert report(out)["manifest"]["truncation"]


def test_projector_roundtrip(tmp_path, capsys):
    path = tmp_path / "pa.json"
    assert main(["projector", "build", "--rep", "A", "--out", str(path)]) == EXIT_OK
    capsys.readouterr()
    code, out = run(capsys, "projector", "verify", "--in", str(path))
    assert code == EXIT_OK
    res = report(out)["result"]
    assert res["idempotent"] and res["symmetric"]


def test_sde_table_and_ratios(tmp_path, capsys):
    table = tmp_path / "k.csv"
    code, out = run(capsys, "sde", "--vmax", "2", "--kmax", "1", "--table", str(table))
    assert code == EXIT_OK
    res = report(out)["result"]
    assert res["m"] == "1/207360000"
    assert res["large_n"][2] == "1/207360000"
    rows = list(csv.DictReader(table.open()))
    assert {"v", "k", "coefficient"} <= set(rows[0])


def test_amplitude_of_closed_melon(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(closed_melon().to_json()))
    code, out = run(capsys, "amplitude", "--map", str(path))
    assert code == EXIT_OK
    assert report(out)["result"]["leading_power"] == 5


def test_amplitude_budget_exit(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(double_tadpole_two_point().to_json()))
    code, out = run(capsys, "amplitude", "--map", str(path), "--budget-nodes", "1")
    assert code == EXIT_BUDGET
    assert report(out)["manifest"]["truncation"]["budget_exceeded"]


def test_budget_env_must_be_integer(tmp_path, capsys, monkeypatch):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(double_tadpole_two_point().to_json()))
    monkeypatch.setenv("STRANDCALC_BUDGET", "lots")
    with pytest.raises(SystemExit) as exc:
        main(["amplitude", "--map", str(path)])
    assert exc.value.code == EXIT_USAGE


def test_markdown_table(tmp_path, capsys):
    table = tmp_path / "t.md"
    run(capsys, "verify-all", "--only", "5,6", "--table", str(table))
    text = table.read_text()
    assert text.startswith("| criterion")
    assert text.count("PASS") == 2


@pytest.mark.parametrize("argv", [["bogus"], ["enumerate"], ["verify-all", "--only", "13"],
                                  ["verify-all", "--only", "x"],
                                  ["projector", "verify", "--in", "/nonexistent.json"]])
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE


def test_module_entry_point():
    import subprocess, sys
    r = subprocess.run([sys.executable, "-m", "strandcalc", "--version"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()
