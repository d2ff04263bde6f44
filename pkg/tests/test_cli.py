import json

import jsonschema
import pytest

from orehom.cli import main
from orehom.scenario import load_schema
from orehom.suites import without_timing

from scenario_fixtures import dumps, minimal


@pytest.fixture
def scenario(tmp_path):
    def write(doc, name="s.json"):
        p = tmp_path / name
        p.write_text(dumps(doc) if not isinstance(doc, str) else doc)
        return str(p)
    return write


def run_json(capsys, *argv):
    code = main(["run", *argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_passing_run_exits_zero(scenario, capsys):
    code, report = run_json(capsys, scenario(minimal()))
    assert code == 0 and report["passed"]
    jsonschema.validate(report, load_schema("report.schema.json"))
    assert report["summary"]["failed"] == []
    assert {c["suite"] for c in report["cases"]} == {"ore-axioms", "crossed"}


def test_failing_run_exits_one(scenario, capsys):
    doc = minimal()
    doc["actions"]["double"]["expect_tempered"] = True
    code, report = run_json(capsys, scenario(doc))
    assert code == 1 and not report["passed"]
    assert any(k.startswith("crossed/") for k in report["summary"]["failed"])


def test_input_errors_exit_two(scenario, tmp_path, capsys):
    assert main(["run", str(tmp_path / "absent.json")]) == 2
    assert main(["run", scenario("{oops")]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["run", scenario(minimal(signatures={"s": {"alpha": "nope"}}))]) == 2
    assert "$.signatures.s.alpha" in capsys.readouterr().err
    assert main(["run", scenario(minimal()), "--trials", "0"]) == 2
    assert main(["run", scenario(minimal()), "--seed", "-1"]) == 2


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as info:
        main(["run", "x.json", "--suite", "bogus"])
    assert info.value.code == 2


def test_reports_are_deterministic(scenario, capsys):
    path = scenario(minimal())
    _, a = run_json(capsys, path, "--seed", "11")
    _, b = run_json(capsys, path, "--seed", "11")
    assert without_timing(a) == without_timing(b)
    assert a["seed"] == 11


def test_suite_filter_and_out_file(scenario, tmp_path):
    out = tmp_path / "r.txt"
    assert main(["run", scenario(minimal()), "--suite", "ore-axioms", "--out", str(out)]) == 0
    text = out.read_text()
    assert "PASS" in text and "crossed/" not in text


def test_bundled_catalogue_single_suite(capsys):
    code, report = run_json(capsys, "catalogue", "--suite", "retraction", "--trials", "5")
    assert code == 0
    assert report["scenario"] == "catalogue" and report["cases"]


def test_minimal_rational_scenario_runs_differentials(scenario, capsys):
    doc = {
        "algebras": {"Q": {"basis": ["1"], "products": [["1", "1", {"1": 1}]], "unit": {"1": 1}}},
        "morphisms": {"id": {"algebra": "Q", "images": {"1": {"1": 1}}}},
        "signatures": {"Q[t]": {"alpha": "id", "delta": None, "kind": "polynomial"}},
        "suites": ["differentials"],
        "parameters": {"trials": 10},
    }
    code, report = run_json(capsys, scenario(doc))
    assert code == 0
    assert report["suites"] == ["differentials"]


def test_failing_derivation_exits_two(scenario, capsys):
    doc = minimal(
        morphisms={"id": {"algebra": "Qeps", "images": {"1": {"1": 1}, "eps": {"eps": 1}}}},
        derivations={"d": {"alpha": "id", "images": {"1": {}, "eps": {"1": 1}}}},
        signatures={"s": {"alpha": "id", "delta": "d"}},
        modules={}, ore_modules={}, actions={},
    )
    assert main(["run", scenario(doc)]) == 2
    assert "('eps', 'eps')" in capsys.readouterr().err
