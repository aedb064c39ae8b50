"""Pipeline configuration shared by the CLI subcommands.

A single JSON file provides defaults for ranking, validation and split
parameters plus the directory layout.  Only the directory layout can be
overridden from the environment; numeric knobs always come from the file
or the command line so runs stay reproducible.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .pairs import DEFAULT_MAX_RATIO, DEFAULT_MAX_TOKENS

ENV_DATA_DIR = "NEWSBITEXT_DATA_DIR"


class ConfigError(Exception):
    """The pipeline configuration file is unusable."""


@dataclass(frozen=True)
class PipelineConfig:
    profiles: tuple[str, ...] = ()
    language_pairs: tuple[tuple[str, str], ...] = ()
    k: int = 5
    min_score: float | None = None
    max_tokens: int = DEFAULT_MAX_TOKENS
    max_ratio: float = DEFAULT_MAX_RATIO
    split_ratio: float = 0.9
    seed: int = 42
    data_dir: str = "data"

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if not 0.0 < self.split_ratio < 1.0:
            raise ConfigError("split_ratio must be strictly between 0 and 1")
        if self.max_tokens < 1:
            raise ConfigError("max_tokens must be >= 1")
        if self.max_ratio < 1.0:
            raise ConfigError("max_ratio must be >= 1.0")
        if self.min_score is not None and not 0.0 <= self.min_score <= 1.0:
            raise ConfigError("min_score must lie in [0, 1]")


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Load configuration, or defaults when no file is given.

    The data directory may be overridden through NEWSBITEXT_DATA_DIR.
    """
    values: dict = {}
    if path is not None:
        try:
            values = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError(f"config {path} must be a JSON object")
        unknown = set(values) - {
            "profiles", "language_pairs", "k", "min_score", "max_tokens",
            "max_ratio", "split_ratio", "seed", "data_dir",
        }
        if unknown:
            raise ConfigError(f"config {path}: unknown keys {sorted(unknown)}")
    data_dir = os.environ.get(ENV_DATA_DIR) or values.get("data_dir", "data")
    config = PipelineConfig(
        profiles=tuple(values.get("profiles", ())),
        language_pairs=tuple(tuple(p) for p in values.get("language_pairs", ())),
        k=values.get("k", 5),
        min_score=values.get("min_score"),
        max_tokens=values.get("max_tokens", DEFAULT_MAX_TOKENS),
        max_ratio=values.get("max_ratio", DEFAULT_MAX_RATIO),
        split_ratio=values.get("split_ratio", 0.9),
        seed=values.get("seed", 42),
        data_dir=data_dir,
    )
    base = Path(path).parent if path is not None else Path.cwd()
    for profile in config.profiles:
        if not (base / profile).exists() and not Path(profile).exists():
            raise ConfigError(f"profile file {profile!r} does not exist")
    return config
