"""Experiment declarations loaded from YAML (or JSON) files."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any

import yaml

from src.codes import CODES
from src.errors import ConfigError, InvalidParameterError
from src.lattice import MergePolicy, SingleFault
from src.purification import Scheme, Source

logger = logging.getLogger(__name__)

CONFIG_VERSION = 1


class ExperimentKind(str, Enum):
    PERFECT = "perfect"
    SINGLE_FAULT = "single_fault"
    RANDOM = "random"
    PURIFICATION = "purification"


@dataclass
class ExperimentConfig:
    """Everything needed to rerun an experiment; results depend on nothing else."""

    name: str
    kind: ExperimentKind
    p: list[float]
    version: int = CONFIG_VERSION
    description: str = ""
    distances: list[int] = field(default_factory=lambda: [3, 5])
    yields: list[float] = field(default_factory=lambda: [1.0])
    trials: int = 1000
    # Correction cycles per trial; None keeps the scheduler's default horizon.
    cycles: int | None = None
    # Wait identities inserted by the scheduler carry single-qubit error.
    idle: bool = False
    seed: int = 0
    lattices: int = 30
    placements: list[str] = field(default_factory=lambda: ["center", "west", "northwest"])
    policy: str = "superunit"
    cull: list[float] = field(default_factory=lambda: [0.0, 0.5, 0.9])
    reference_p: float = 0.002
    workers: int | None = None
    output_dir: str = "results"
    # purification only
    scheme: str = "physical"
    codes: list[str] = field(default_factory=lambda: ["physical", "physical"])
    max_rounds: int = 4
    source: str = "optical"
    hold_steps: int = 2

    def __post_init__(self) -> None:
        try:
            self.kind = ExperimentKind(self.kind)
        except ValueError:
            choices = [k.value for k in ExperimentKind]
            raise ConfigError(f"unknown experiment kind {self.kind!r}; choose from {choices}") from None
        # PyYAML reads 1e-3 (no dot) as a string
        try:
            self.p = [float(v) for v in self.p]
            self.yields = [float(v) for v in self.yields]
            self.cull = [float(v) for v in self.cull]
            self.distances = [int(v) for v in self.distances]
            self.reference_p = float(self.reference_p)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"non-numeric value in config {self.name!r}: {e}") from e
        self.validate()

    def validate(self) -> None:
        if self.version != CONFIG_VERSION:
            raise ConfigError(f"config version {self.version} is not supported (expected {CONFIG_VERSION})")
        if not self.name:
            raise ConfigError("config needs a non-empty name")
        if not self.p or any(not 0.0 <= v < 1.0 for v in self.p):
            raise ConfigError(f"p grid must be non-empty with values in [0, 1), got {self.p}")
        if self.trials <= 0:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if self.cycles is not None and self.cycles <= 0:
            raise ConfigError(f"cycles must be positive, got {self.cycles}")
        if self.kind is ExperimentKind.PURIFICATION:
            if len(self.codes) != 2:
                raise ConfigError(f"purification takes two codes, got {self.codes}")
            if self.max_rounds < 0:
                raise ConfigError(f"max_rounds must be >= 0, got {self.max_rounds}")
            unknown = [c for c in self.codes if c not in CODES]
            if unknown:
                raise ConfigError(f"unknown codes {unknown}; choose from {sorted(CODES)}")
            try:
                Scheme.parse(self.scheme)
                Source.parse(self.source)
            except InvalidParameterError as e:
                raise ConfigError(str(e)) from e
            return
        if not self.distances or any(d < 3 or d % 2 == 0 for d in self.distances):
            raise ConfigError(f"distances must be odd integers >= 3, got {self.distances}")
        if any(not 0.0 < y <= 1.0 for y in self.yields):
            raise ConfigError(f"yields must lie in (0, 1], got {self.yields}")
        if any(not 0.0 <= f < 1.0 for f in self.cull):
            raise ConfigError(f"cull fractions must lie in [0, 1), got {self.cull}")
        if self.policy not in {m.value for m in MergePolicy}:
            raise ConfigError(f"unknown policy {self.policy!r}; choose from {[m.value for m in MergePolicy]}")
        bad = [s for s in self.placements if s not in {f.value for f in SingleFault}]
        if self.kind is ExperimentKind.SINGLE_FAULT and (bad or not self.placements):
            raise ConfigError(f"placements must be drawn from {[f.value for f in SingleFault]}, got {self.placements}")
        if self.kind is ExperimentKind.RANDOM:
            if self.lattices <= 0:
                raise ConfigError(f"lattices must be positive, got {self.lattices}")
            if self.reference_p not in self.p:
                raise ConfigError(f"reference_p {self.reference_p} must be one of the simulated p values {self.p}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        if not isinstance(data, dict):
            raise ConfigError(f"config must be a mapping, got {type(data).__name__}")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys {unknown}")
        missing = [k for k in ("name", "kind", "p") if k not in data]
        if missing:
            raise ConfigError(f"config is missing required keys {missing}")
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["kind"] = self.kind.value
        return out

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an experiment file; JSON parses as a YAML subset."""
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from e
    cfg = ExperimentConfig.from_dict(data or {})
    logger.info("loaded %s experiment %r from %s", cfg.kind.value, cfg.name, path)
    return cfg
