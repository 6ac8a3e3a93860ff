# tests/test_cli.py
import json

import pytest

from jlrectifier.cli import app
from tests.conftest import CONFIG_DIR, EXAMPLE_DOC

EXAMPLE = str(CONFIG_DIR / "example.json")
TINY_SPEC = {"q_values": [3], "n_min": 2, "n_max": 2}


def test_run_writes_the_report(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(app, ["run", "-c", EXAMPLE, "-o", str(out)])
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["verdicts"]["main_theorem"] is True
    assert "Report written to" in result.output


def test_run_table(runner):
    result = runner.invoke(app, ["run", "-c", EXAMPLE, "--format", "table"])
    assert result.exit_code == 0, result.output
    assert "All verdicts hold" in result.output


def test_mutation_exits_one(runner, tmp_path):
    result = runner.invoke(app, ["run", "-c", EXAMPLE, "--mutate-zeta", "-o", str(tmp_path / "r.json")])
    assert result.exit_code == 1
    assert "main_theorem" in result.output


def test_invalid_config_exits_two(runner, write_doc):
    path = write_doc({**EXAMPLE_DOC, "jumps": [3, 3]})
    result = runner.invoke(app, ["run", "-c", str(path)])
    assert result.exit_code == 2
    assert "Invalid configuration" in result.output
    assert "not strictly increasing" in result.output


def test_unknown_format_exits_two(runner):
    result = runner.invoke(app, ["run", "-c", EXAMPLE, "--format", "xml"])
    assert result.exit_code == 2
    assert "Unknown format" in result.output


def test_missing_config_is_a_usage_error(runner, tmp_path):
    result = runner.invoke(app, ["run", "-c", str(tmp_path / "absent.json")])
    assert result.exit_code == 2


@pytest.mark.parametrize("command", ["cosets", "modules", "rectifier", "zeta", "functorial"])
def test_views(runner, tmp_path, command):
    out = tmp_path / f"{command}.json"
    result = runner.invoke(app, [command, "-c", EXAMPLE, "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert "verdicts" in json.loads(out.read_text(encoding="utf-8"))


def test_sweep(runner, write_doc, tmp_path):
    out = tmp_path / "summary.json"
    result = runner.invoke(app, ["sweep", "-s", str(write_doc(TINY_SPEC, "spec.json")), "-o", str(out)])
    assert result.exit_code == 0, result.output
    summary = json.loads(out.read_text(encoding="utf-8"))
    assert (summary["total"], summary["failed"]) == (14, 0)
    assert "jobs" not in summary["spec"]


def test_sweep_mutation_exits_one(runner, write_doc, tmp_path):
    spec = write_doc(TINY_SPEC, "spec.json")
    result = runner.invoke(app, ["sweep", "-s", str(spec), "--mutate-zeta", "-o", str(tmp_path / "s.json")])
    assert result.exit_code == 1


def test_empty_sweep(runner, write_doc, tmp_path):
    out = tmp_path / "summary.json"
    spec = write_doc({"q_values": [3], "n_min": 5, "n_max": 4}, "spec.json")
    result = runner.invoke(app, ["sweep", "-s", str(spec), "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text(encoding="utf-8"))["total"] == 0


def test_bad_sweep_spec(runner, write_doc):
    result = runner.invoke(app, ["sweep", "-s", str(write_doc({"z_policy": "all"}, "spec.json"))])
    assert result.exit_code == 2
    assert "Invalid sweep spec" in result.output


def test_certify_signature(runner, tmp_path):
    out = tmp_path / "cert.json"
    result = runner.invoke(app, ["certify-signature", "--bound", "30", "--exhaustive-limit", "10", "--output", str(out)])
    assert result.exit_code == 0, result.output
    assert len(json.loads(out.read_text(encoding="utf-8"))["fields"]) == 16
