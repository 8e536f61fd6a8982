from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Optional

from backend.codec import DEFAULT_BURST_SIZE_MAX, DEFAULT_ETHERTYPE, MAX_VC, WORD_BYTES, MacAddress


class ConfigError(ValueError):
    pass


ERROR_POLICIES = ("flag", "drop")


@dataclass(frozen=True)
class TxEngineConfig:
    num_vc: int = 1
    burst_size_max: int = DEFAULT_BURST_SIZE_MAX
    keepalive_interval: float = 100e-6          # seconds of simulated time
    local_mac: MacAddress = field(default_factory=lambda: MacAddress.parse("02:00:00:00:00:01"))
    remote_mac: MacAddress = field(default_factory=lambda: MacAddress.parse("02:00:00:00:00:02"))
    ether_type: int = DEFAULT_ETHERTYPE
    queue_depth: int = 2                        # application frames buffered per VC

    def validate(self) -> "TxEngineConfig":
        if not 1 <= self.num_vc <= MAX_VC:
            raise ConfigError(f"num_vc must be in 1..{MAX_VC}, got {self.num_vc}")
        _check_burst(self.burst_size_max)
        if self.keepalive_interval <= 0:
            raise ConfigError("keepalive_interval must be positive")
        if not 0 <= self.ether_type <= 0xFFFF:
            raise ConfigError(f"ether_type {self.ether_type:#x} does not fit in 16 bits")
        if self.queue_depth < 1:
            raise ConfigError("queue_depth must be >= 1")
        return self


@dataclass(frozen=True)
class RxEngineConfig:
    num_vc: int = 1
    burst_size_max: int = DEFAULT_BURST_SIZE_MAX
    fifo_capacity: int = 128 * 1024
    pause_threshold: float = 0.5
    pause_low_watermark: Optional[float] = None    # hysteresis; None = unpause below threshold
    link_timeout: Optional[float] = None           # seconds; None = 10 x keepalive
    error_policy: str = "flag"

    @property
    def reassembly_limit(self) -> int:
        """Largest frame `rx_pop` is sure to reassemble once the pause level holds the VC."""
        return int(self.fifo_capacity * self.pause_threshold)

    def validate(self) -> "RxEngineConfig":
        if not 1 <= self.num_vc <= MAX_VC:
            raise ConfigError(f"num_vc must be in 1..{MAX_VC}, got {self.num_vc}")
        _check_burst(self.burst_size_max)
        if self.fifo_capacity < self.burst_size_max:
            raise ConfigError(
                f"fifo_capacity {self.fifo_capacity} cannot hold one burst of {self.burst_size_max}"
            )
        if not 0.0 < self.pause_threshold <= 1.0:
            raise ConfigError(f"pause_threshold must be in (0, 1], got {self.pause_threshold}")
        if self.pause_low_watermark is not None and not (
            0.0 <= self.pause_low_watermark <= self.pause_threshold
        ):
            raise ConfigError("pause_low_watermark must be in [0, pause_threshold]")
        if self.link_timeout is not None and self.link_timeout <= 0:
            raise ConfigError("link_timeout must be positive")
        if self.error_policy not in ERROR_POLICIES:
            raise ConfigError(f"error_policy must be one of {ERROR_POLICIES}")
        return self


@dataclass(frozen=True)
class EngineConfig:
    """Both halves of one endpoint, as read from the `engine:` config section."""

    tx: TxEngineConfig = field(default_factory=TxEngineConfig)
    rx: RxEngineConfig = field(default_factory=RxEngineConfig)

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "EngineConfig":
        d = dict(d or {})
        tx_keys = set(TxEngineConfig.__dataclass_fields__)
        rx_keys = set(RxEngineConfig.__dataclass_fields__)
        unknown = set(d) - tx_keys - rx_keys
        if unknown:
            raise ConfigError(f"unknown engine keys: {sorted(unknown)}")
        for mac_key in ("local_mac", "remote_mac"):
            if isinstance(d.get(mac_key), str):
                d[mac_key] = MacAddress.parse(d[mac_key])
        tx = TxEngineConfig(**{k: v for k, v in d.items() if k in tx_keys})
        rx = RxEngineConfig(**{k: v for k, v in d.items() if k in rx_keys})
        return cls(tx, rx).validate()

    def validate(self) -> "EngineConfig":
        self.tx.validate()
        self.rx.validate()
        if self.tx.num_vc != self.rx.num_vc or self.tx.burst_size_max != self.rx.burst_size_max:
            raise ConfigError("tx and rx must agree on num_vc and burst_size_max")
        return self

    def with_(self, **changes) -> "EngineConfig":
        tx_keys = set(TxEngineConfig.__dataclass_fields__)
        rx_keys = set(RxEngineConfig.__dataclass_fields__)
        tx = replace(self.tx, **{k: v for k, v in changes.items() if k in tx_keys})
        rx = replace(self.rx, **{k: v for k, v in changes.items() if k in rx_keys})
        unknown = set(changes) - tx_keys - rx_keys
        if unknown:
            raise ConfigError(f"unknown engine keys: {sorted(unknown)}")
        return EngineConfig(tx, rx).validate()

    def as_dict(self) -> dict:
        out = asdict(self.rx)
        out.update(asdict(self.tx))
        out["local_mac"] = str(self.tx.local_mac)
        out["remote_mac"] = str(self.tx.remote_mac)
        return out


def _check_burst(burst: int) -> None:
    if burst < WORD_BYTES or burst % WORD_BYTES:
        raise ConfigError(f"burst_size_max must be a positive multiple of {WORD_BYTES}, got {burst}")
    if burst > 0xFFFF:
        raise ConfigError(f"burst_size_max {burst} does not fit the 16-bit PayloadSize field")
