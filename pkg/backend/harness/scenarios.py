"""Benchmark scenarios: sweep the testbench and tabulate measured vs calculated."""
from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

import pandas as pd

from backend.core import ConfigError, EngineConfig
from backend.physim import LinkConfig, SimulationAssertion, max_in_flight_bytes, wire_cycles

from .formulas import (
    burst_sizes,
    calc_bandwidth,
    calc_framerate,
    calc_latency_us,
    fcs_drop_probability,
)
from .profiler import ProfilerWindow
from .testbench import TOPOLOGIES, Testbench

log = logging.getLogger(__name__)

COLUMNS = ["frame_bytes", "measured", "calculated", "unit", "scenario", "seed"]
FORMULAS = ("aligned", "plain")

# powers of two 64 B..1 MiB plus both overhead-regime and burst boundaries
DEFAULT_SIZES: Tuple[int, ...] = tuple(sorted({1 << k for k in range(6, 21)} | {768, 769, 8128, 8256}))


class Scenario(str, enum.Enum):
    BANDWIDTH = "bandwidth"
    FRAME_RATE = "frame_rate"
    LATENCY = "latency"
    FLOW_CONTROL_STRESS = "flow_control_stress"
    ERROR_RATE = "error_rate"

    @classmethod
    def parse(cls, name: Union[str, "Scenario"]) -> "Scenario":
        """Accepts `bandwidth`, `BandwidthSweep`, `bandwidth_sweep`, `flow-control-stress`..."""
        if isinstance(name, Scenario):
            return name
        key = name.strip().replace("-", "_")
        if key.isupper():
            key = key.lower()
        key = "".join("_" + c.lower() if c.isupper() else c for c in key).lstrip("_")
        key = key.replace("__", "_")
        if key.endswith("_sweep"):
            key = key[: -len("_sweep")]
        if key == "framerate":
            key = "frame_rate"
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(f"unknown scenario {name!r}; choose from {[s.value for s in cls]}") from None


@dataclass(frozen=True)
class BenchConfig:
    scenario: Scenario = Scenario.BANDWIDTH
    sizes: Tuple[int, ...] = DEFAULT_SIZES
    duration: float = 0.01              # simulated seconds per sweep point
    min_frames: int = 1000
    max_frames: int = 20000
    seed: int = 0
    workers: int = 1
    topology: str = "loopback"
    stress_vcs: int = 16
    stress_frames: int = 2000
    error_ber: float = 1e-7             # used when link.ber is 0
    error_frames: int = 20000
    formula: str = "aligned"            # calculated column: whole bus words per burst, or "plain"
    out: Optional[str] = None
    link: LinkConfig = field(default_factory=LinkConfig)
    engine: EngineConfig = field(default_factory=EngineConfig)

    def validate(self) -> "BenchConfig":
        Scenario.parse(self.scenario)
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ConfigError(f"sizes must be a non-empty list of positive byte counts, got {self.sizes}")
        if self.duration <= 0:
            raise ConfigError("duration must be positive")
        if not 1 <= self.min_frames <= self.max_frames:
            raise ConfigError("need 1 <= min_frames <= max_frames")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.topology not in TOPOLOGIES:
            raise ConfigError(f"topology must be one of {TOPOLOGIES}")
        if not 2 <= self.stress_vcs <= 16:
            raise ConfigError("stress_vcs must be in 2..16")
        if self.stress_frames < 1 or self.error_frames < 1:
            raise ConfigError("stress_frames and error_frames must be >= 1")
        if not 0.0 < self.error_ber < 1.0:
            raise ConfigError("error_ber must be in (0, 1)")
        if self.formula not in FORMULAS:
            raise ConfigError(f"formula must be one of {FORMULAS}, got {self.formula!r}")
        self.link.validate()
        self.engine.validate()
        return self

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "BenchConfig":
        """Build from a parsed config file with `link:`, `engine:` and `bench:` sections."""
        d = dict(d or {})
        unknown = set(d) - {"link", "engine", "bench"}
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        bench = dict(d.get("bench") or {})
        bad = set(bench) - (set(cls.__dataclass_fields__) - {"link", "engine"})
        if bad:
            raise ConfigError(f"unknown bench keys: {sorted(bad)}")
        if "scenario" in bench:
            bench["scenario"] = Scenario.parse(bench["scenario"])
        if "sizes" in bench:
            bench["sizes"] = tuple(int(s) for s in bench["sizes"])
        try:
            link = LinkConfig.from_dict(d.get("link") or {})
        except ValueError as e:
            raise ConfigError(str(e)) from e
        cfg = cls(link=link, engine=EngineConfig.from_dict(d.get("engine")), **bench)
        return cfg.validate()

    @property
    def word_align(self) -> bool:
        return self.formula == "aligned"

    def with_(self, **changes) -> "BenchConfig":
        return replace(self, **changes).validate()

    def as_dict(self) -> dict:
        return {
            "link": self.link.as_dict(),
            "engine": self.engine.as_dict(),
            "bench": {k: v for k, v in asdict(self).items() if k not in ("link", "engine")}
            | {"scenario": Scenario.parse(self.scenario).value, "sizes": list(self.sizes)},
        }


def _row(size: int, measured: float, calculated: float, unit: str, scenario: str, seed: int) -> dict:
    return dict(zip(COLUMNS, (size, measured, calculated, unit, scenario, seed)))


def _app_frame_cycles(size: int, cfg: BenchConfig) -> int:
    return sum(wire_cycles(b, cfg.link) for b in burst_sizes(size, cfg.engine.tx.burst_size_max))


def _run_limit(cfg: BenchConfig, size: int, frames: int) -> int:
    """Cycle budget after which a run that has not met its goal is a failure."""
    keepalive = cfg.link.seconds_to_cycles(cfg.engine.tx.keepalive_interval)
    return cfg.link.seconds_to_cycles(cfg.duration) + 4 * (frames + 2) * _app_frame_cycles(size, cfg) + 2 * keepalive


def _check_ceiling(gbps: float, link: LinkConfig) -> None:
    ceiling = link.word_bytes * 8 * link.clock_hz / 1e9
    if gbps > ceiling * (1 + 1e-9):
        raise SimulationAssertion(f"measured {gbps:.3f} Gb/s above the {ceiling:.3f} Gb/s bus capacity")


def _throughput(cfg: BenchConfig, size: int) -> ProfilerWindow:
    tb = Testbench(cfg.link, cfg.engine, seed=cfg.seed, topology=cfg.topology,
                   frame_bytes=size, active_vcs=[0])
    prof = ProfilerWindow(cfg.link.clock_hz, window_seconds=cfg.duration)
    tb.sinks[0].on_frame.append(lambda now, vc, n: prof.record(now, n))
    duration = cfg.link.seconds_to_cycles(cfg.duration)

    def done() -> bool:
        return prof.frames_seen >= cfg.max_frames or (
            prof.span_cycles >= duration and prof.frames_seen >= cfg.min_frames
        )

    tb.start()
    tb.run(_run_limit(cfg, size, cfg.max_frames), stop=done)
    if not done():
        raise SimulationAssertion(
            f"{size} B: only {prof.frames_seen} frames measured, need {cfg.min_frames}"
        )
    tb.check_invariants()
    _check_ceiling(prof.bandwidth_gbps(), cfg.link)
    last = prof.last_report
    if last is not None:
        log.info("%d B: last %d-cycle window %.3f Gb/s, %.1f frames/s (%d windows)",
                 size, last.end_cycle - last.start_cycle, last.bandwidth_gbps,
                 last.frame_rate_hz, len(prof.reports))
    return prof


def bandwidth_point(cfg: BenchConfig, size: int) -> List[dict]:
    prof = _throughput(cfg, size)
    calc = calc_bandwidth(size, cfg.link, cfg.engine.tx.burst_size_max, cfg.word_align)
    return [_row(size, prof.bandwidth_gbps(), calc, "Gb/s", Scenario.BANDWIDTH.value, cfg.seed)]


def frame_rate_point(cfg: BenchConfig, size: int) -> List[dict]:
    prof = _throughput(cfg, size)
    calc = calc_framerate(size, cfg.link, cfg.engine.tx.burst_size_max, cfg.word_align)
    return [_row(size, prof.frame_rate_hz(), calc, "Hz", Scenario.FRAME_RATE.value, cfg.seed)]


def latency_point(cfg: BenchConfig, size: int) -> List[dict]:
    tb = Testbench(cfg.link, cfg.engine, seed=cfg.seed, topology=cfg.topology,
                   frame_bytes=size, active_vcs=[0], infinite_load=False)
    tb.start()
    tb.run_until_link_up(tb.dst.rx.link_timeout_cycles)
    probe = tb.start_probe(vc=0)
    sink = tb.sinks[0]
    tb.run(_run_limit(cfg, size, 1), stop=lambda: probe.done and sink.frames_ok + sink.frames_errored > 0)
    if not probe.done:
        raise SimulationAssertion(f"{size} B: one-shot frame never reached the RX")
    tb.check_invariants()
    measured = cfg.link.cycles_to_seconds(probe.latency_cycles) * 1e6
    calc = calc_latency_us(size, cfg.link, cfg.engine.tx.burst_size_max)
    return [_row(size, measured, calc, "us", Scenario.LATENCY.value, cfg.seed)]


def flow_control_point(cfg: BenchConfig, size: int) -> List[dict]:
    """VC0's sink stalls while the other VCs drain, then VC0 resumes."""
    engine = cfg.engine.with_(num_vc=cfg.stress_vcs)
    rx = engine.rx
    in_flight = max_in_flight_bytes(cfg.link, engine.tx.burst_size_max)
    headroom = rx.fifo_capacity - rx.pause_threshold * rx.fifo_capacity
    if headroom < in_flight:
        log.warning("FIFO headroom %d B is below the %d B that can land after pause",
                    headroom, in_flight)

    tb = Testbench(cfg.link, engine, seed=cfg.seed, topology=cfg.topology, frame_bytes=size)
    prof = ProfilerWindow(cfg.link.clock_hz, window_seconds=cfg.duration)
    for vc in range(1, cfg.stress_vcs):
        tb.sinks[vc].on_frame.append(lambda now, _vc, n: prof.record(now, n))
    tb.stall(0)
    tb.start()
    tb.run(_run_limit(cfg, size, cfg.stress_frames), stop=lambda: prof.frames_seen >= cfg.stress_frames)
    if prof.frames_seen < cfg.stress_frames:
        raise SimulationAssertion(f"{size} B: unpaused VCs moved only {prof.frames_seen} frames")
    unpaused = prof.bandwidth_gbps()
    stalled_bytes = tb.sinks[0].bytes_ok
    peak = tb.peak_fifo()
    log.info("stress %d B: %.3f Gb/s on %d unpaused VCs, VC0 FIFO %d B, paused=%s",
             size, unpaused, cfg.stress_vcs - 1, tb.dst.rx.fifos[0].occupancy,
             tb.dst.rx.fifos[0].paused)

    # everything VC0 pushed so far must now arrive intact, then a little more
    owed = tb.src.stats.vc_tx_bytes[0] + 2 * size
    sink0 = tb.sinks[0]
    tb.unstall(0)
    # VC0 gets one round-robin slot in stress_vcs
    budget = _run_limit(cfg, size, (owed // size + 2) * cfg.stress_vcs)
    tb.run(budget, stop=lambda: sink0.bytes_ok >= owed)
    if sink0.bytes_ok < owed:
        raise SimulationAssertion(f"VC0 delivered {sink0.bytes_ok} of {owed} B after unstall")
    tb.check_invariants()
    _check_ceiling(unpaused, cfg.link)

    label = Scenario.FLOW_CONTROL_STRESS.value
    return [
        _row(size, unpaused, calc_bandwidth(size, cfg.link, engine.tx.burst_size_max, cfg.word_align),
             "Gb/s", f"{label}/unpaused_bw", cfg.seed),
        _row(size, stalled_bytes, 0, "B", f"{label}/stalled_vc_bytes", cfg.seed),
        _row(size, peak, rx.fifo_capacity, "B", f"{label}/peak_fifo", cfg.seed),
    ]


def error_rate_point(cfg: BenchConfig, size: int) -> List[dict]:
    """FCS-drop fraction on a noisy link against the binomial model."""
    link = cfg.link if cfg.link.ber > 0 else cfg.link.with_(ber=cfg.error_ber)
    tb = Testbench(link, cfg.engine, seed=cfg.seed, topology=cfg.topology,
                   frame_bytes=size, active_vcs=[0])
    tb.start()
    tb.run(_run_limit(cfg, size, cfg.error_frames), stop=lambda: tb.full_frames_sent >= cfg.error_frames)
    tb.check_invariants()
    measured = tb.full_frames_fcs_errors / max(1, tb.full_frames_sent)
    bursts = burst_sizes(size, cfg.engine.tx.burst_size_max)
    calc = sum(fcs_drop_probability(b, link.ber) for b in bursts) / len(bursts)
    undetected = sum(s.undetected_bit_errors for s in tb.sinks.values())
    label = Scenario.ERROR_RATE.value
    return [
        _row(size, measured, calc, "ratio", f"{label}/fcs_drop_fraction", cfg.seed),
        _row(size, undetected, 0, "bits", f"{label}/undetected_bit_errors", cfg.seed),
    ]


_POINTS: Dict[Scenario, Callable[[BenchConfig, int], List[dict]]] = {
    Scenario.BANDWIDTH: bandwidth_point,
    Scenario.FRAME_RATE: frame_rate_point,
    Scenario.LATENCY: latency_point,
    Scenario.FLOW_CONTROL_STRESS: flow_control_point,
    Scenario.ERROR_RATE: error_rate_point,
}


def iter_benchmark(scenario: Union[str, Scenario], config: Optional[BenchConfig] = None) -> Iterator[dict]:
    """Yield result rows one sweep point at a time, in size order."""
    cfg = (config or BenchConfig()).validate()
    scen = Scenario.parse(scenario)
    point = partial(_POINTS[scen], cfg)
    log.info("%s: %d sweep points, seed=%d, workers=%d", scen.value, len(cfg.sizes), cfg.seed, cfg.workers)
    if scen in (Scenario.BANDWIDTH, Scenario.FRAME_RATE, Scenario.FLOW_CONTROL_STRESS):
        log.info("%s: calculated column uses the %s formula (%s)", scen.value, cfg.formula,
                 "payload rounded up to whole bus words per burst" if cfg.word_align else "frame + overhead")
    if cfg.workers == 1:
        for size in cfg.sizes:
            yield from point(size)
    else:
        # each point owns its own simulation; map keeps size order
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            for rows in pool.map(point, cfg.sizes):
                yield from rows
    log.info("%s: done", scen.value)


def run_benchmark(scenario: Union[str, Scenario], config: Optional[BenchConfig] = None) -> pd.DataFrame:
    return pd.DataFrame(list(iter_benchmark(scenario, config)), columns=COLUMNS)


def write_csv(table: pd.DataFrame, path_or_buf) -> None:
    table.to_csv(path_or_buf, index=False, float_format="%.9g")
