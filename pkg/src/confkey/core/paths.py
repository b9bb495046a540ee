"""Project path resolution: finding the project root."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path


@lru_cache(maxsize=1)
def find_project_root() -> Path:
    """Walk up from this source file to find the directory containing pyproject.toml."""
    for parent in Path(__file__).resolve().parents:
        if (parent / "pyproject.toml").exists():
            return parent
    # Fallback: assume src/confkey/core/paths.py → 3 levels up
    return Path(__file__).resolve().parents[3]


def package_data(name: str) -> Path:
    """Return the path of a data file shipped inside the ``confkey`` package."""
    return Path(str(resources.files("confkey").joinpath("data", name)))


def sidecar_path(output: Path, suffix: str) -> Path:
    """Return a file next to *output* sharing its stem, e.g. ``run.csv`` → ``run.log``."""
    return output.with_suffix(suffix)
