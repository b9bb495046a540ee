"""Tests for the compare subcommand."""

from __future__ import annotations

from pathlib import Path
from unittest.mock import patch

import pytest
from typer.testing import CliRunner

from confkey.core.errors import CapacityError, ContractViolationError
from confkey.main import app

runner = CliRunner()


def test_compare(config_file: Path):
    result = runner.invoke(app, ["compare", "--config", str(config_file)])
    assert result.exit_code == 0, result.output
    assert "Strategies" in result.output
    assert "Ratios against dynamic-single" in result.output
    assert "fixed-single" in result.output


def test_needs_two_strategies(tmp_path: Path, config_text: str):
    path = tmp_path / "one.conf"
    path.write_text(
        config_text.replace(
            "routing.strategy = dynamic-single,fixed-single", "routing.strategy = fixed-single"
        )
    )
    result = runner.invoke(app, ["compare", "-c", str(path)])
    assert result.exit_code == 2
    assert "at least two strategies" in result.output


@pytest.mark.parametrize(
    "error",
    [CapacityError("terminal set", 9, 8), ContractViolationError("plan has no structures")],
    ids=["capacity", "contract"],
)
def test_package_errors_exit_with_config_code(config_file: Path, error):
    with patch("confkey.cli.compare_cmd.compare_strategies", side_effect=error):
        result = runner.invoke(app, ["compare", "--config", str(config_file)])
    assert result.exit_code == 2
    assert "Comparison failed" in result.output
