import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from splitred import cli, scenario
from splitred.scenario import SCENARIO_SCHEMA, ScenarioError, instantiate, run_scenario, validate

ROOT = Path(__file__).resolve().parents[1]
EXAMPLES = ROOT / "docs" / "examples"

CTREX = {
    "schema_version": "1",
    "id": "ctrex",
    "tower": {"characteristic": 0, "p": 2, "levels": [{"name": "L", "poly": "t^3-pi_base"}]},
    "analysis": {"kind": "tate_restriction", "q": "pi_L^2*(1+pi_L)"},
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_shipped_schema_in_sync():
    shipped = json.loads((ROOT / "docs" / "scenario.schema.json").read_text())
    assert shipped == SCENARIO_SCHEMA


@pytest.mark.parametrize("path", sorted(EXAMPLES.glob("*.json")), ids=lambda p: p.name)
def test_examples_run(path, capsys):
    assert cli.main(["run", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["schema_version"] == "1"


def test_run_ctrex(tmp_path, capsys):
    assert cli.main(["run", write(tmp_path, "s.json", CTREX)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["status"] == "TotallyNotSplit"
    assert report["result"]["n"] == "2"  # numbers are decimal strings


def test_zeta3_pair(capsys):
    cli.main(["run", str(EXAMPLES / "zeta3_split.json"), str(EXAMPLES / "zeta3_nonsplit.json")])
    a, b = json.loads(capsys.readouterr().out)
    assert a["result"]["status"] == "Split"
    assert b["result"]["has_split_reduction"] is False


@pytest.mark.parametrize(
    "doc, code",
    [
        ({**CTREX, "analysis": {"kind": "tate_restriction", "q": "pi_L^^2"}}, 2),
        ({**CTREX, "analysis": {"kind": "tate_restriction", "q": "pi_X"}}, 2),
        ({**CTREX, "analysis": {"kind": "nope"}}, 2),
        ({**CTREX, "schema_version": "0"}, 2),
        ('{"schema_version": "1",', 2),
        ({**CTREX, "analysis": {"kind": "tate_restriction", "q": "1+pi_L"}}, 1),
        ({**CTREX, "tower": {"characteristic": 0, "p": 2, "levels": [{"name": "L", "poly": "t^3-4"}]}}, 1),
        ({**CTREX, "analysis": {"kind": "type_iv", "a6": "pi_L^2"}}, 1),
    ],
)
def test_exit_codes(tmp_path, doc, code, capsys):
    assert cli.main(["run", write(tmp_path, "s.json", doc)]) == code
    err = capsys.readouterr().err
    assert err.startswith("error:")


def test_parse_error_carries_position(tmp_path, capsys):
    cli.main(["run", write(tmp_path, "s.json", '{"schema_version": "1",\n  "tower": }')])
    assert "s.json:2:" in capsys.readouterr().err


def test_missing_file(capsys):
    assert cli.main(["run", "/nonexistent/scenario.json"]) == 2


def test_strict_inconclusive(tmp_path, monkeypatch, capsys):
    from splitred import tatesplit

    real = tatesplit.split_status

    def inconclusive(E, *args):
        rep = real(E, *args)
        return tatesplit.TateRestrictionReport(rep.n, rep.p, rep.d, rep.p_valuation, None,
                                               tatesplit.STATUS_INCONCLUSIVE, (), "Inconclusive")

    monkeypatch.setattr(scenario, "split_status", inconclusive)
    path = write(tmp_path, "s.json", CTREX)
    assert cli.main(["run", path]) == 0
    assert cli.main(["run", "--strict", path]) == 3


def test_keep_going(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {**CTREX, "analysis": {"kind": "tate_restriction", "q": "1"}})
    good = write(tmp_path, "good.json", CTREX)
    assert cli.main(["run", bad, good]) == 1
    assert capsys.readouterr().out == ""
    assert cli.main(["run", "--keep-going", bad, good]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out[0]["exit_code"] == "1" and out[1]["result"]["status"] == "TotallyNotSplit"


def test_precision_override(tmp_path, capsys):
    cli.main(["run", "--precision", "12", write(tmp_path, "s.json", CTREX)])
    assert json.loads(capsys.readouterr().out)["tower"]["precision"] == "12"


def test_template_instantiation():
    tpl = json.loads((EXAMPLES / "ctrex_template.json").read_text())
    doc = instantiate(tpl, {"d": 5})
    assert doc["tower"]["p"] == 2
    assert doc["tower"]["levels"][0]["poly"] == "t^5 - pi_base"
    validate(doc)
    assert run_scenario(doc).row["d"] == 5


def test_validate_reports_path():
    with pytest.raises(ScenarioError) as info:
        validate({**CTREX, "tower": {"characteristic": 0, "p": 2}})
    assert info.value.position == "tower"


def _scan(args, capsys):
    code = cli.main(["scan", *args])
    return code, capsys.readouterr().out.splitlines()


def test_scan_ctrex_family(capsys):
    code, lines = _scan([str(EXAMPLES / "ctrex_template.json"), "--vary", "d=2..6", "--jobs", "4"], capsys)
    assert code == 0
    assert lines[0] == ",".join(cli.CSV_COLUMNS)
    assert len(lines) == 6
    assert all(",TotallyNotSplit," in row for row in lines[1:])


def test_scan_lifting_family(capsys):
    code, lines = _scan([str(EXAMPLES / "lifting_template.json"), "--vary", "m=0,1"], capsys)
    rows = [dict(zip(lines[0].split(","), line.split(","))) for line in lines[1:]]
    assert [r["lifting_exponent"] for r in rows] == ["0", "1"]


def test_scan_empty_range(capsys):
    code, lines = _scan([str(EXAMPLES / "ctrex_template.json"), "--vary", "d="], capsys)
    assert code == 0 and lines == [",".join(cli.CSV_COLUMNS)]


def test_scan_order_is_lexicographic(capsys):
    code, lines = _scan([str(EXAMPLES / "ctrex_template.json"), "--vary", "d=5,3", "--vary", "p=3,2"], capsys)
    assert [row[0] for row in csv.reader(lines[1:])] == [
        "ctrex[d=3,p=2]", "ctrex[d=3,p=3]", "ctrex[d=5,p=2]", "ctrex[d=5,p=3]"]


def test_scan_errors(tmp_path, capsys):
    tpl = str(EXAMPLES / "ctrex_template.json")
    assert cli.main(["scan", tpl, "--vary", "nope=1..2"]) == 2
    assert cli.main(["scan", tpl, "--vary", "d=2..x"]) == 2
    # d = 4 with p = 2 is fine, p = 4 is not a prime
    assert cli.main(["scan", tpl, "--vary", "p=4,2"]) == 1
    capsys.readouterr()
    assert cli.main(["scan", tpl, "--vary", "p=2,4", "--keep-going"]) == 1
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 3 and "Error:" in out[2]


def test_scan_out_file(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    cli.main(["scan", str(EXAMPLES / "no69_template.json"), "--vary", "d=2..4", "--out", str(out)])
    rows = out.read_text().splitlines()
    assert [r.split(",")[7] for r in rows[1:]] == ["10", "14", "18"]


def test_timing_column(capsys):
    code, lines = _scan([str(EXAMPLES / "ctrex_template.json"), "--timing"], capsys)
    assert lines[1].split(",")[-1] != ""


def test_reproduce_paper(capsys):
    assert cli.main(["reproduce-paper"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out.replace("PASS", "")
    assert cli.main(["reproduce-paper", "--case", "no69"]) == 0
    out = capsys.readouterr().out
    assert "delta(A/K)=2+4d" in out and "ctrex" not in out
    assert cli.main(["reproduce-paper", "--list"]) == 0
    assert "no69" in capsys.readouterr().out.split()
    assert cli.main(["reproduce-paper", "--case", "bogus"]) == 2


def test_reproduce_paper_fails_on_mismatch(monkeypatch, capsys):
    from splitred import golden

    monkeypatch.setitem(golden.CASES, "broken", lambda: [golden.Row("broken", "x", "1", "2")])
    assert cli.main(["reproduce-paper", "--case", "broken"]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "splitred", "reproduce-paper", "--list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "ctrex" in proc.stdout


def test_unsafe_degree_flag(tmp_path, capsys):
    doc = {
        "schema_version": "1",
        "id": "quartic",
        "tower": {"characteristic": 0, "p": 2, "levels": [{"name": "L", "poly": "t^4-pi_base"}]},
        "analysis": {"kind": "conductor", "level": "L", "delta_E": 0},
    }
    path = write(tmp_path, "s.json", doc)
    assert cli.main(["run", path]) == 1
    assert "degree" in capsys.readouterr().err
    assert cli.main(["run", "--unsafe-degree", path]) == 0
