from __future__ import annotations

from dataclasses import asdict, dataclass, replace

# 512-bit bus clock. "firmware" is the clock the reference firmware runs at,
# "exact" is 100 Gb/s / 512 bit.
CLOCK_PRESETS = {
    "firmware": 195.66e6,
    "exact": 195.3125e6,
}
LANE_MODES = ("CAUI-4", "CAUI-10")


class LinkConfigError(ValueError):
    pass


@dataclass(frozen=True)
class LinkConfig:
    word_bytes: int = 64
    clock_hz: float = CLOCK_PRESETS["firmware"]
    line_rate: float = 100e9
    overhead_cycles_small: int = 3
    overhead_cycles_large: int = 4
    overhead_threshold_bytes: int = 768
    ber: float = 0.0
    pipeline_latency_cycles: int = 102
    propagation_cycles: int = 0
    lane_mode: str = "CAUI-4"

    def validate(self) -> "LinkConfig":
        if self.word_bytes <= 0:
            raise LinkConfigError(f"word_bytes must be positive, got {self.word_bytes}")
        if self.clock_hz <= 0 or self.line_rate <= 0:
            raise LinkConfigError("clock_hz and line_rate must be positive")
        if not 0 <= self.overhead_cycles_small <= self.overhead_cycles_large:
            raise LinkConfigError(
                f"overhead cycles must satisfy 0 <= small ({self.overhead_cycles_small})"
                f" <= large ({self.overhead_cycles_large})"
            )
        if not 0.0 <= self.ber < 1.0:
            raise LinkConfigError(f"ber must be in [0, 1), got {self.ber}")
        if self.pipeline_latency_cycles < 0 or self.propagation_cycles < 0:
            raise LinkConfigError("latency cycles must be non-negative")
        if self.lane_mode not in LANE_MODES:
            raise LinkConfigError(f"lane_mode must be one of {LANE_MODES}, got {self.lane_mode!r}")
        return self

    @property
    def cycle_seconds(self) -> float:
        return 1.0 / self.clock_hz

    def seconds_to_cycles(self, seconds: float) -> int:
        return int(round(seconds * self.clock_hz))

    def cycles_to_seconds(self, cycles: float) -> float:
        return cycles / self.clock_hz

    @classmethod
    def from_dict(cls, d: dict) -> "LinkConfig":
        d = dict(d or {})
        preset = d.pop("clock", None)
        if preset is not None:
            if preset not in CLOCK_PRESETS:
                raise LinkConfigError(f"unknown clock preset {preset!r}; use {sorted(CLOCK_PRESETS)}")
            d["clock_hz"] = CLOCK_PRESETS[preset]
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise LinkConfigError(f"unknown link keys: {sorted(unknown)}")
        return cls(**d).validate()

    def with_(self, **changes) -> "LinkConfig":
        return replace(self, **changes).validate()

    def as_dict(self) -> dict:
        return asdict(self)
