"""CLI shared helpers used by every command."""

from __future__ import annotations

from pathlib import Path
from typing import NoReturn

import typer
from rich.console import Console

from confkey.core.config import ExperimentConfig, parse_config
from confkey.core.errors import ConfigError

console = Console()

EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def cli_error(message: str, code: int = 1) -> NoReturn:
    """Print a red error message and exit with *code*."""
    console.print(f"[red]{message}[/red]")
    raise typer.Exit(code=code)


def require_config(
    path: Path,
    *,
    seed: int | None = None,
    out: Path | None = None,
    threads: int | None = None,
) -> ExperimentConfig:
    """Load the config and apply flag overrides, or exit with the config error code."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        cli_error(f"Cannot read config {path}: {exc.strerror}", EXIT_IO)
    try:
        return parse_config(text).with_overrides(seed=seed, out=out, threads=threads)
    except ConfigError as exc:
        cli_error(f"Config error in {path}: {exc}", EXIT_CONFIG)


def parse_floats(value: str, option: str) -> list[float]:
    try:
        return [float(token) for token in value.split(",")]
    except ValueError:
        cli_error(f"{option} expects comma-separated numbers, got {value!r}", EXIT_CONFIG)


def parse_ints(value: str, option: str) -> list[int]:
    try:
        return [int(token) for token in value.split(",")]
    except ValueError:
        cli_error(f"{option} expects comma-separated integers, got {value!r}", EXIT_CONFIG)
