"""Experiment configuration: the flat ``section.key = value`` text format.

Grammar::

    # full-line comment
    topology.kind = grid          # trailing comment
    params.gamma_list = 0.97,0.975,...,1.0

Lists are comma separated; ``a,b,...,c`` expands to the arithmetic
progression from ``a`` to ``c`` with step ``b - a``. Every key may appear
once. Keys not listed on the models below are rejected.
"""

from __future__ import annotations

import enum
import logging
import math
from pathlib import Path
from typing import Any

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from confkey.core import settings
from confkey.core.errors import ConfigError
from confkey.network.layouts import GRID_PRESETS, LayoutKind, LayoutSpec
from confkey.routing.planner import Strategy, StructureFamily

logger = logging.getLogger(__name__)

_ELLIPSIS = "..."
_STEP_TOL = 1e-9


# ---------------------------------------------------------------------------
# List values
# ---------------------------------------------------------------------------


def _number(token: str) -> int | float:
    try:
        return int(token)
    except ValueError:
        return float(token)


def _expand(tokens: list[str]) -> list[Any]:
    """Expand ``a, b, ..., c`` into the full progression."""
    if _ELLIPSIS not in tokens:
        return tokens
    if len(tokens) != 4 or tokens[2] != _ELLIPSIS:
        raise ValueError("a range must be written as a,b,...,c")
    try:
        a, b, c = (_number(t) for t in (tokens[0], tokens[1], tokens[3]))
    except ValueError:
        raise ValueError(f"range bounds must be numbers: {','.join(tokens)}") from None
    step = b - a
    if step == 0 or (c - a) / step < 0:
        raise ValueError(f"range {a},{b},...,{c} never reaches {c}")
    count = (c - a) / step
    if abs(count - round(count)) > _STEP_TOL:
        raise ValueError(f"range {a},{b},...,{c} does not land on {c}")
    values = [a + k * step for k in range(round(count) + 1)]
    if all(isinstance(x, int) for x in (a, b, c)):
        return [int(v) for v in values]
    return [round(float(v), 12) for v in values]


def split_list(value: Any) -> Any:
    """Before-validator for list fields: comma strings and bare scalars become lists."""
    if isinstance(value, str):
        tokens = [t.strip() for t in value.split(",")]
        if any(t == "" for t in tokens):
            raise ValueError(f"empty list element in {value!r}")
        return _expand(tokens)
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------


class TopologyKind(str, enum.Enum):
    GRID = "grid"
    RANDOM = "random"


class SwapMode(str, enum.Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte-carlo"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class TopologyConfig(_Section):
    kind: TopologyKind = TopologyKind.GRID
    width: int = Field(default=7, ge=2)
    height: int = Field(default=7, ge=2)
    n_nodes: int = Field(default=50, ge=2)
    radius: float = Field(default=0.3, gt=0.0)

    def label(self) -> str:
        if self.kind is TopologyKind.GRID:
            return f"grid-{self.width}x{self.height}"
        return f"random-{self.n_nodes}-r{self.radius:g}"


class LayoutConfig(_Section):
    kind: LayoutKind = LayoutKind.BET
    nodes: list[int] = Field(default_factory=list)

    @field_validator("nodes", mode="before")
    @classmethod
    def split_nodes(cls, value: Any) -> Any:
        return split_list(value)


class ProtocolConfig(_Section):
    n_parties: list[int] = Field(default_factory=lambda: [3], min_length=1)

    @field_validator("n_parties", mode="before")
    @classmethod
    def split_n_parties(cls, value: Any) -> Any:
        return split_list(value)

    @field_validator("n_parties")
    @classmethod
    def check_parties(cls, value: list[int]) -> list[int]:
        for n in value:
            if not 3 <= n <= settings.MAX_TERMINALS:
                raise ValueError(f"party count {n} outside 3..{settings.MAX_TERMINALS}")
        return value


class ParamsConfig(_Section):
    p: float = Field(default=0.85, ge=0.0, le=1.0)
    q: float = Field(default=0.85, ge=0.0, le=1.0)
    gamma_list: list[float] = Field(default_factory=lambda: [1.0], min_length=1)

    @field_validator("gamma_list", mode="before")
    @classmethod
    def split_gamma_list(cls, value: Any) -> Any:
        return split_list(value)

    @field_validator("gamma_list")
    @classmethod
    def check_gammas(cls, value: list[float]) -> list[float]:
        for g in value:
            if not 0.0 <= g <= 1.0:
                raise ValueError(f"gamma {g} outside [0, 1]")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("gamma_list must be strictly increasing")
        return value


class RoutingConfig(_Section):
    strategy: list[Strategy] = Field(
        default_factory=lambda: [Strategy.DYNAMIC_MULTI], min_length=1
    )
    structure: StructureFamily = StructureFamily.AUTO

    @field_validator("strategy", mode="before")
    @classmethod
    def split_strategy(cls, value: Any) -> Any:
        return split_list(value)


class SimConfig(_Section):
    rounds: int = Field(default_factory=lambda: settings.DEFAULT_ROUNDS, ge=1)
    graph_seeds: int = Field(default=1, ge=1)
    master_seed: int = Field(default=0, ge=0)
    swap_mode: SwapMode = SwapMode.ANALYTIC
    threads: int = Field(default=1, ge=1)


class OutputConfig(_Section):
    path: Path = Path("results.csv")


class ExperimentConfig(_Section):
    topology: TopologyConfig = Field(default_factory=TopologyConfig)
    layout: LayoutConfig = Field(default_factory=LayoutConfig)
    protocol: ProtocolConfig = Field(default_factory=ProtocolConfig)
    params: ParamsConfig = Field(default_factory=ParamsConfig)
    routing: RoutingConfig = Field(default_factory=RoutingConfig)
    sim: SimConfig = Field(default_factory=SimConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def check_layout(self) -> ExperimentConfig:
        kind = self.layout.kind
        if kind in GRID_PRESETS and self.topology.kind is not TopologyKind.GRID:
            raise ValueError(f"layout {kind.value} needs a grid topology")
        if kind is LayoutKind.EXPLICIT and len(self.layout.nodes) < max(self.protocol.n_parties):
            raise ValueError(
                f"explicit layout lists {len(self.layout.nodes)} nodes, "
                f"need {max(self.protocol.n_parties)}"
            )
        return self

    def layout_spec(self, n_parties: int, seed: int | None = None) -> LayoutSpec:
        """Layout for *n_parties*; explicit layouts use a prefix of their node list."""
        nodes = self.layout.nodes[:n_parties] if self.layout.kind is LayoutKind.EXPLICIT else []
        return LayoutSpec(kind=self.layout.kind, n_parties=n_parties, nodes=nodes, seed=seed)

    def topology_seeds(self) -> list[int]:
        return [self.sim.master_seed + g for g in range(self.sim.graph_seeds)]

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        out: Path | None = None,
        threads: int | None = None,
    ) -> ExperimentConfig:
        """Apply the command-line ``--seed``, ``--out`` and ``--threads`` flags."""
        sim_update: dict[str, Any] = {}
        if seed is not None:
            sim_update["master_seed"] = seed
        if threads is not None:
            sim_update["threads"] = threads
        data = self.model_dump()
        data["sim"].update(sim_update)
        if out is not None:
            data["output"]["path"] = out
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as exc:
            raise _config_error(exc, {}) from None


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _section_fields() -> dict[str, set[str]]:
    return {
        name: set(info.annotation.model_fields)
        for name, info in ExperimentConfig.model_fields.items()
    }


def _config_error(exc: ValidationError, lines: dict[str, int]) -> ConfigError:
    err = exc.errors()[0]
    loc = [str(part) for part in err["loc"] if not isinstance(part, int)]
    key = ".".join(loc[:2]) if loc else None
    message = err["msg"]
    if message.startswith("Value error, "):
        message = message[len("Value error, ") :]
    return ConfigError(message, key=key, line=lines.get(key) if key else None)


def parse_config(text: str) -> ExperimentConfig:
    """Parse the experiment config text into a validated :class:`ExperimentConfig`."""
    fields = _section_fields()
    raw: dict[str, dict[str, str]] = {}
    lines: dict[str, int] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected `section.key = value`, got {content!r}", line=lineno)
        key, value = (part.strip() for part in content.split("=", 1))
        if key.count(".") != 1:
            raise ConfigError("keys are written as section.key", key=key, line=lineno)
        section, name = key.split(".")
        if section not in fields or name not in fields[section]:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in lines:
            raise ConfigError(
                f"duplicate key (first set on line {lines[key]})", key=key, line=lineno
            )
        if not value:
            raise ConfigError("missing value", key=key, line=lineno)
        raw.setdefault(section, {})[name] = value
        lines[key] = lineno

    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        raise _config_error(exc, lines) from None
    logger.debug("Parsed config with keys %s", sorted(lines))
    return config


def load_config(path: Path) -> ExperimentConfig:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text)


def csv_float(value: float) -> str:
    """Ten significant digits, the precision of every float in sweep output."""
    if math.isnan(value):
        return "nan"
    return format(value, ".10g")
