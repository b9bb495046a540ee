"""Runtime settings: loads ``.env`` and exposes environment-driven defaults.

On import, this module loads the project's ``.env`` file (if present) so that
values set there are available via ``os.environ``. Existing environment
variables always win.
"""

from __future__ import annotations

import logging
import os

from dotenv import load_dotenv

from confkey.core.errors import ConfigError
from confkey.core.paths import find_project_root

logger = logging.getLogger(__name__)

_env_path = find_project_root() / ".env"
load_dotenv(_env_path, override=False)
logger.debug("Loaded .env from %s (exists=%s)", _env_path, _env_path.exists())


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"expected an integer, got {raw!r}", key=name) from None


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


# ---------------------------------------------------------------------------
# Overridable defaults
# ---------------------------------------------------------------------------

DEFAULT_ROUNDS = _env_int("CONFKEY_DEFAULT_ROUNDS", 1000)
RGG_MAX_RETRIES = _env_int("CONFKEY_RGG_MAX_RETRIES", 1000)

# ---------------------------------------------------------------------------
# Capacity limits of the dense density-operator model.
# ---------------------------------------------------------------------------

MAX_QUBITS = 12
MAX_TERMINALS = 8


def check_states() -> bool:
    """Whether density operators are validated after every quantum operation.

    Read on each call so tests can flip it with ``patch.dict(os.environ, ...)``.
    """
    return _env_flag("CONFKEY_CHECK_STATES")
