"""Tests for the validate subcommand."""

from __future__ import annotations

from unittest.mock import patch

from typer.testing import CliRunner

from confkey.main import app
from confkey.validation.oracles import CheckResult

runner = CliRunner()


def test_all_checks_pass():
    result = runner.invoke(app, ["validate", "--draws", "10"])
    assert result.exit_code == 0, result.output
    assert "All 5 checks passed" in result.output
    assert "FAIL" not in result.output


def test_failure_exits_nonzero():
    failing = [
        CheckResult("star closed form vs density operator", False, 0.01, "5 draws"),
        CheckResult("entropy endpoints", True, 0.0),
    ]
    with patch("confkey.cli.validate_cmd.run_checks", return_value=failing):
        result = runner.invoke(app, ["validate"])
    assert result.exit_code == 1
    assert "1 check(s) failed" in result.output
