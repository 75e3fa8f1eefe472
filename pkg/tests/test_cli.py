"""CLI entry points: pipeline run, export, option validation."""
from __future__ import annotations

import json

from click.testing import CliRunner

from ideamap.graph.snapshot import restore
from ideamap.service.cli import main


def test_help_lists_commands():
    result = CliRunner().invoke(main, ["--help"])
    assert result.exit_code == 0
    for command in ("serve", "pipeline", "export", "mockstack"):
        assert command in result.output


def fast_config(tmp_path) -> str:
    """Config file with rate limiting off so CLI runs do not wait."""
    path = tmp_path / "fast.json"
    path.write_text(json.dumps({"rate_limit_rps": 0.0}))
    return str(path)


def test_pipeline_run_writes_snapshot(tmp_path):
    out = tmp_path / "run.json"
    result = CliRunner().invoke(
        main,
        [
            "pipeline", "run",
            "--rq", "How do badges affect retention?",
            "--iterations", "1",
            "--out", str(out),
            "--config", fast_config(tmp_path),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "flow flow-0001 written to" in result.output
    flow = restore(out.read_text())
    assert len(flow.nodes) == 13


def test_pipeline_run_rejects_bad_select(tmp_path):
    result = CliRunner().invoke(
        main,
        ["pipeline", "run", "--rq", "q", "--out", str(tmp_path / "x.json"), "--select", "loudest"],
    )
    assert result.exit_code != 0
    assert "Invalid value" in result.output


def test_pipeline_then_export_round_trip(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"storage_path": str(tmp_path / "flows"), "rate_limit_rps": 0.0}))
    out = tmp_path / "run.json"
    runner = CliRunner()
    ran = runner.invoke(
        main,
        ["pipeline", "run", "--rq", "How do badges affect retention?", "--out", str(out), "--config", str(config)],
    )
    assert ran.exit_code == 0, ran.output

    exported = tmp_path / "export.json"
    result = runner.invoke(
        main, ["export", "--flow", "flow-0001", "--out", str(exported), "--config", str(config)]
    )
    assert result.exit_code == 0, result.output
    assert exported.read_text() == out.read_text()


def test_export_unknown_flow_fails(tmp_path):
    result = CliRunner().invoke(
        main, ["export", "--flow", "flow-9999", "--out", str(tmp_path / "x.json")]
    )
    assert result.exit_code == 1
    assert "error:" in result.output
    assert not (tmp_path / "x.json").exists()


def test_pipeline_run_requires_rq(tmp_path):
    result = CliRunner().invoke(main, ["pipeline", "run", "--out", str(tmp_path / "x.json")])
    assert result.exit_code != 0
    assert "--rq" in result.output
