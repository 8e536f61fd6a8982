from __future__ import annotations

import copy
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import yaml

from backend.core import ConfigError
from backend.harness import DEFAULT_SIZES, BenchConfig

ENV_CONFIG = "HTSP_CONFIG"
DEFAULT_CONFIG = "config/htsp.yaml"
REPO_ROOT = Path(__file__).resolve().parents[2]

_SUFFIX = {"": 1, "k": 1024, "m": 1024 * 1024}
_SIZE = re.compile(r"^\s*(\d+)\s*([kKmM]?)\s*$")


def default_config_path() -> str:
    return os.environ.get(ENV_CONFIG) or DEFAULT_CONFIG


def load_config_smart(path_str: str) -> dict:
    """Read a YAML run config: the path as given first, then relative to the repo."""
    cand = Path(path_str)
    if cand.exists():
        return yaml.safe_load(cand.read_text(encoding="utf-8")) or {}
    here = REPO_ROOT / path_str
    if here.exists():
        return yaml.safe_load(here.read_text(encoding="utf-8")) or {}
    raise FileNotFoundError(f"config not found: {path_str}")


def parse_size(text: str) -> int:
    m = _SIZE.match(text)
    if not m:
        raise ConfigError(f"bad size {text!r} (use e.g. 64, 8k, 1M)")
    return int(m.group(1)) * _SUFFIX[m.group(2).lower()]


def parse_sizes(text: str) -> Tuple[int, ...]:
    """`64..1M` picks the default sweep grid inside the range; `64,768,8k` is a list."""
    if ".." in text:
        lo, hi = (parse_size(p) for p in text.split("..", 1))
        if lo > hi:
            raise ConfigError(f"empty size range {text!r}")
        grid = tuple(s for s in DEFAULT_SIZES if lo <= s <= hi)
        return grid or (lo,)
    sizes: List[int] = [parse_size(p) for p in text.split(",") if p.strip()]
    if not sizes:
        raise ConfigError("no sizes given")
    return tuple(sizes)


@dataclass(frozen=True)
class RunConfig:
    """Command-line overrides; anything left None keeps the config file value."""

    config_path: str
    scenario: Optional[str] = None
    num_vc: Optional[int] = None
    burst_size_max: Optional[int] = None
    ber: Optional[float] = None
    seed: Optional[int] = None
    clock: Optional[str] = None
    sizes: Optional[Tuple[int, ...]] = None
    out: Optional[str] = None
    duration: Optional[float] = None
    workers: Optional[int] = None
    formula: Optional[str] = None

    def merge(self, raw: dict) -> dict:
        d = copy.deepcopy(raw or {})
        link = d.setdefault("link", {}) or {}
        engine = d.setdefault("engine", {}) or {}
        bench = d.setdefault("bench", {}) or {}
        d["link"], d["engine"], d["bench"] = link, engine, bench
        if self.ber is not None:
            link["ber"] = self.ber
        if self.clock is not None:
            link.pop("clock_hz", None)
            link["clock"] = self.clock
        if self.num_vc is not None:
            engine["num_vc"] = self.num_vc
        if self.burst_size_max is not None:
            engine["burst_size_max"] = self.burst_size_max
        for key in ("scenario", "seed", "sizes", "out", "duration", "workers", "formula"):
            value = getattr(self, key)
            if value is not None:
                bench[key] = list(value) if key == "sizes" else value
        return d

    def resolve(self) -> BenchConfig:
        """Load, merge and validate; raises before anything is simulated."""
        raw = load_config_smart(self.config_path)
        if not isinstance(raw, dict):
            raise ConfigError(f"{self.config_path}: top level must be a mapping")
        return BenchConfig.from_dict(self.merge(raw))
