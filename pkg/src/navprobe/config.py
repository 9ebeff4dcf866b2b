"""Run configuration: JSON file defaults overridden by command-line flags."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from .graph import AROUND_THRESHOLD, STAIR_Z_THRESHOLD, TURN_THRESHOLD
from .text import DEFAULT_MASK_TOKEN

CONFIG_ENV = "NAVPROBE_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    spatial_words: str | None = None
    object_words: str | None = None
    number_words: str | None = None
    tag_lexicon: str | None = None
    suffix_rules: str | None = None
    phrase_sets: str | None = None
    turn_threshold: float = TURN_THRESHOLD
    around_threshold: float = AROUND_THRESHOLD
    stair_z_threshold: float = STAIR_Z_THRESHOLD
    mask_rate: float = 0.15
    mask_token: str = DEFAULT_MASK_TOKEN
    min_edges: int = 6
    max_edges: int = 9
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("turn_threshold", "around_threshold", "stair_z_threshold", "mask_rate"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.mask_rate > 1:
            raise ConfigError("mask_rate must be at most 1")
        if self.around_threshold <= self.turn_threshold:
            raise ConfigError("around_threshold must exceed turn_threshold")
        if not 1 <= self.min_edges <= self.max_edges:
            raise ConfigError("need 1 <= min_edges <= max_edges")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not self.mask_token or any(c.isspace() for c in self.mask_token):
            raise ConfigError("mask_token must be non-empty without whitespace")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Read ``path`` (or ``$NAVPROBE_CONFIG``), then apply non-None overrides."""
    data: dict[str, Any] = {}
    path = path or os.environ.get(CONFIG_ENV) or None
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return RunConfig.from_mapping(data)
