from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowReport:
    start_cycle: int
    end_cycle: int
    bandwidth_gbps: float
    frame_rate_hz: float
    frames: int


class ProfilerWindow:
    """AXIS-side throughput meter.

    The first completed frame only opens the measurement (the link
    establishment transient before it is discarded). After that every
    completed frame is counted; `report()` gives the steady-state rate over
    first-to-last completion and `reports` the fixed-length rolling windows.
    """

    def __init__(self, clock_hz: float, window_seconds: float = 1.0):
        self.clock_hz = clock_hz
        self.window_cycles = max(1, int(round(window_seconds * clock_hz)))
        self.start_cycle: Optional[int] = None
        self.last_cycle: Optional[int] = None
        self.bytes_seen = 0
        self.frames_seen = 0
        self.reports: List[WindowReport] = []
        self._win_start = 0
        self._win_bytes = 0
        self._win_frames = 0

    @property
    def span_cycles(self) -> int:
        if self.start_cycle is None or self.last_cycle is None:
            return 0
        return self.last_cycle - self.start_cycle

    def record(self, now: int, nbytes: int) -> None:
        if self.start_cycle is None:
            self.start_cycle = self.last_cycle = self._win_start = now
            return
        self.last_cycle = now
        self.bytes_seen += nbytes
        self.frames_seen += 1
        while now - self._win_start >= self.window_cycles:
            self._close_window()
        self._win_bytes += nbytes
        self._win_frames += 1

    def _close_window(self) -> None:
        end = self._win_start + self.window_cycles
        seconds = self.window_cycles / self.clock_hz
        rep = WindowReport(
            self._win_start, end,
            self._win_bytes * 8 / seconds / 1e9,
            self._win_frames / seconds,
            self._win_frames,
        )
        self.reports.append(rep)
        log.debug("profiler window %d..%d: %.3f Gb/s %.1f Hz",
                  rep.start_cycle, rep.end_cycle, rep.bandwidth_gbps, rep.frame_rate_hz)
        self._win_start = end
        self._win_bytes = 0
        self._win_frames = 0

    @property
    def last_report(self) -> Optional[WindowReport]:
        return self.reports[-1] if self.reports else None

    def bandwidth_gbps(self) -> float:
        if not self.span_cycles:
            return 0.0
        return self.bytes_seen * 8 * self.clock_hz / self.span_cycles / 1e9

    def frame_rate_hz(self) -> float:
        if not self.span_cycles:
            return 0.0
        return self.frames_seen * self.clock_hz / self.span_cycles


@dataclass
class LatencyProbe:
    """One-shot latency: start of a frame in at the TX to its start out at the RX."""

    frame_bytes: int
    vc: int = 0
    t_start_in: Optional[int] = None
    t_start_out: Optional[int] = None
    samples: List[int] = field(default_factory=list)

    @property
    def done(self) -> bool:
        return self.t_start_out is not None

    def start(self, now: int) -> None:
        if self.t_start_in is not None and not self.done:
            raise RuntimeError("latency probe already has a frame outstanding")
        self.t_start_in, self.t_start_out = now, None

    def observe(self, vc: int, sof: bool, now: int) -> None:
        if vc == self.vc and sof and self.t_start_in is not None and not self.done:
            self.t_start_out = now
            self.samples.append(now - self.t_start_in)

    @property
    def latency_cycles(self) -> Optional[int]:
        if not self.done:
            return None
        return self.t_start_out - self.t_start_in
