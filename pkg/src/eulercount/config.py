"""Run configuration: defaults, an optional JSON file, and explicit overrides."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from importlib import resources
from typing import Optional

CONFIG_ENV = "EULERCOUNT_CONFIG"


def calibrated_constant() -> float:
    """Layer constant fitted by ``chain.calibrate`` and shipped with the package."""
    text = resources.files("eulercount").joinpath("data/calibration.json").read_text()
    return float(json.loads(text)["C"])


@dataclass(frozen=True)
class RunConfig:
    threads: int = os.cpu_count() or 1
    precision: int = 128
    tol: float = 2.0 ** -64
    seed: int = 0
    budget: int = 24  # half-edge budget for brute-force checks
    size_cap: int = 250_000  # vertices in a synthesized gadget
    C: Optional[float] = None

    def __post_init__(self):
        if self.C is None:
            object.__setattr__(self, "C", calibrated_constant())
        for f in ("threads", "precision", "budget", "size_cap"):
            v = getattr(self, f)
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"config {f} must be a positive integer, got {v!r}")
        if not self.tol > 0 or not self.C > 0:
            raise ValueError("config tol and C must be positive")
        if self.seed < 0:
            raise ValueError("config seed must be non-negative")

    def override(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path: Optional[str] = None, **overrides) -> RunConfig:
    """Defaults, then the JSON file at ``path`` (or $EULERCOUNT_CONFIG), then overrides."""
    path = path or os.environ.get(CONFIG_ENV)
    data = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data).override(**overrides)
