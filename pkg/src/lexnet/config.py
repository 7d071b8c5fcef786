"""Run configuration.

The configuration file is TOML with flat keys named like the RunConfig
fields, for example::

    inputs = ["transcripts/joel", "transcripts/ruth"]
    output_dir = "out"
    speakers = ["MOT", "CHI"]
    child_speaker = "CHI"
    mother_speaker = "MOT"
    exclusion_postcodes = ["imit", "sr", "pi"]
    unintelligible = ["xxx", "yyy", "www"]
    punctuation = [".", "?", "!", ","]
    mlu_ranges = ["[1,1.5]", "(1.5,2]", "(2,2.5]", "(2.5,3]", "(3,3.5]"]
    window_size = 5
    split_threshold = 10
    max_substages = 2
    placement = "start"      # start | center | end
    smoothing = 1            # odd moving-average width, 1 = off
    k = 10
    hits_tolerance = 1e-10
    hits_max_iterations = 1000
    shift_words = ["a", "the"]
    self_loops = true
    stage_plans = []         # stage_plan.tsv files pinning windows per child
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .builder import DEFAULT_RANGES, MluRange, validate_ranges
from .corpus import (
    DEFAULT_EXCLUSION_POSTCODES,
    DEFAULT_PUNCTUATION,
    DEFAULT_SPEAKERS,
    DEFAULT_UNINTELLIGIBLE,
    IngestConfig,
)
from .errors import ConfigError


@dataclass
class RunConfig:
    inputs: list[Path] = field(default_factory=list)
    output_dir: Path = Path("lexnet-out")
    speakers: tuple[str, ...] = DEFAULT_SPEAKERS
    child_speaker: str = "CHI"
    mother_speaker: str = "MOT"
    exclusion_postcodes: tuple[str, ...] = DEFAULT_EXCLUSION_POSTCODES
    unintelligible: tuple[str, ...] = DEFAULT_UNINTELLIGIBLE
    punctuation: tuple[str, ...] = DEFAULT_PUNCTUATION
    mlu_ranges: tuple[MluRange, ...] = DEFAULT_RANGES
    window_size: int = 5
    split_threshold: int | None = None
    max_substages: int = 2
    placement: str = "start"
    smoothing: int = 1
    k: int = 10
    hits_tolerance: float = 1e-10
    hits_max_iterations: int = 1000
    shift_words: tuple[str, ...] = ("a", "the")
    self_loops: bool = True
    stage_plans: list[Path] = field(default_factory=list)

    @property
    def effective_split_threshold(self) -> int:
        return 2 * self.window_size if self.split_threshold is None else self.split_threshold

    def ingest_config(self) -> IngestConfig:
        return IngestConfig(
            speakers=self.speakers,
            exclusion_postcodes=frozenset(self.exclusion_postcodes),
            unintelligible=frozenset(self.unintelligible),
            punctuation=frozenset(self.punctuation),
        )

    def validate(self) -> RunConfig:
        validate_ranges(self.mlu_ranges)
        if not self.mlu_ranges:
            raise ConfigError("at least one MLU range is required")
        if self.window_size < 1:
            raise ConfigError("window_size must be >= 1")
        if self.effective_split_threshold < 2 * self.window_size:
            raise ConfigError("split_threshold must be at least twice window_size")
        if self.max_substages not in (1, 2, 3):
            raise ConfigError("max_substages must be 1, 2 or 3")
        if self.placement not in ("start", "center", "end"):
            raise ConfigError(f"placement must be start, center or end, not {self.placement!r}")
        if self.smoothing < 1 or self.smoothing % 2 == 0:
            raise ConfigError("smoothing must be a positive odd integer")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if not self.hits_tolerance > 0:
            raise ConfigError("hits_tolerance must be > 0")
        if self.hits_max_iterations < 1:
            raise ConfigError("hits_max_iterations must be >= 1")
        if any(len(p) != 1 for p in self.punctuation):
            raise ConfigError("punctuation entries must be single characters")
        for role in (self.child_speaker, self.mother_speaker):
            if role not in self.speakers:
                raise ConfigError(f"speaker {role} is not among the ingested speakers {list(self.speakers)}")
        return self


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(name: str, value: Any) -> Any:
    try:
        if name in ("inputs", "stage_plans"):
            if isinstance(value, str):
                raise TypeError("expected a list of paths")
            return [Path(v) for v in value]
        if name == "output_dir":
            return Path(value)
        if name == "mlu_ranges":
            return tuple(MluRange.parse(str(v)) for v in value)
        if name in ("speakers", "exclusion_postcodes", "unintelligible", "punctuation", "shift_words"):
            if isinstance(value, str):
                raise TypeError("expected a list")
            return tuple(str(v) for v in value)
        if name == "hits_tolerance":
            return float(value)
        if name == "self_loops":
            if not isinstance(value, bool):
                raise TypeError("expected true or false")
            return value
        if name in ("window_size", "split_threshold", "max_substages", "smoothing", "k", "hits_max_iterations"):
            if value is None:
                return None
            if isinstance(value, bool) or int(value) != value:
                raise TypeError("expected an integer")
            return int(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config key {name!r}: {exc}") from exc


def config_from_mapping(data: dict[str, Any], base: RunConfig | None = None) -> RunConfig:
    cfg = dataclasses.replace(base) if base is not None else RunConfig()
    for name, value in data.items():
        if name not in _FIELDS:
            raise ConfigError(f"unknown config key {name!r}")
        setattr(cfg, name, _coerce(name, value))
    return cfg


def load_config(path: Path | str | None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Read a TOML file (optional), apply overrides, validate.

    Relative ``inputs`` and ``output_dir`` in the file resolve against the
    file's directory.
    """
    cfg = RunConfig()
    if path is not None:
        path = Path(path)
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config ({exc})") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        cfg = config_from_mapping(data, cfg)
        cfg.inputs = [p if p.is_absolute() else path.parent / p for p in cfg.inputs]
        cfg.stage_plans = [p if p.is_absolute() else path.parent / p for p in cfg.stage_plans]
        if "output_dir" in data and not cfg.output_dir.is_absolute():
            cfg.output_dir = path.parent / cfg.output_dir
    if overrides:
        cfg = config_from_mapping({k: v for k, v in overrides.items() if v is not None}, cfg)
    return cfg.validate()
