"""Experiment configuration: a flat JSON record with validated ranges."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from .errors import ConfigurationError
from .geometry import DomainSpec

SEED_MAX = 2**64 - 1


@dataclass
class ExperimentConfig:
    """Parameters shared by every subcommand.

    ``options`` carries the few knobs that only one experiment reads
    (tolerances, fit windows, radius lists); each experiment documents the
    keys it accepts.
    """

    function: dict = field(default_factory=lambda: {"name": "geometric", "a": 3})
    domain: dict | None = None
    depth: int = 1
    N: int = 16
    m: int | None = None
    k: list = field(default_factory=lambda: [0])
    eps: list = field(default_factory=lambda: [1e-6])
    trials: int = 20
    seed: int = 0
    res: int = 32
    angles: int = 16
    out: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigurationError(msg)

        need(isinstance(self.function, dict) and "name" in self.function, "function must be an object with a 'name'")
        if self.domain is not None:
            need(isinstance(self.domain, dict), "domain must be an object or null")
            DomainSpec.from_dict(self.domain)
        need(_is_int(self.depth) and 1 <= self.depth <= 12, "depth must be an integer in [1, 12]")
        need(_is_int(self.N) and 0 <= self.N <= 4096, "N must be an integer in [0, 4096]")
        need(self.m is None or (_is_int(self.m) and 1 <= self.m <= 2**16), "m must be null or an integer in [1, 65536]")
        need(isinstance(self.k, list) and self.k and all(_is_int(v) and 0 <= v <= 8 for v in self.k),
             "k must be a nonempty list of integers in [0, 8]")
        need(isinstance(self.eps, list) and self.eps
             and all(isinstance(v, (int, float)) and not isinstance(v, bool) and 0 < v < 1 and math.isfinite(v)
                     for v in self.eps),
             "eps must be a nonempty list of numbers in (0, 1)")
        need(_is_int(self.trials) and 0 <= self.trials <= 100_000, "trials must be an integer in [0, 100000]")
        need(_is_int(self.seed) and 0 <= self.seed <= SEED_MAX, "seed must be an unsigned 64-bit integer")
        need(_is_int(self.res) and 2 <= self.res <= 4096, "res must be an integer in [2, 4096]")
        need(_is_int(self.angles) and 1 <= self.angles <= 4096, "angles must be an integer in [1, 4096]")
        need(self.out is None or isinstance(self.out, str), "out must be a string or null")
        need(isinstance(self.options, dict), "options must be an object")

    def to_dict(self) -> dict:
        return copy.deepcopy(asdict(self))

    @classmethod
    def from_dict(cls, d: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
        """Build from a mapping; missing keys fall back to ``base``."""
        if not isinstance(d, dict):
            raise ConfigurationError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
        merged = base.to_dict() if base is not None else {}
        merged.update(copy.deepcopy(d))
        return cls(**merged)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(data, base)

    @classmethod
    def load(cls, path: str | Path, base: ExperimentConfig | None = None) -> ExperimentConfig:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from None
        return cls.from_json(text, base)

    def replace(self, **changes: Any) -> ExperimentConfig:
        d = self.to_dict()
        d.update(changes)
        return ExperimentConfig(**d)

    def option(self, key: str, default: Any) -> Any:
        return self.options.get(key, default)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)
