"""One direction of the simulated 100G link (CAUI + RS-FEC + GT stand-in)."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List

from .config import LinkConfig
from .fcs import FCS_BYTES, append_fcs, check_and_strip
from .injector import BitErrorInjector
from .timing import FrameTiming

log = logging.getLogger(__name__)


class SimulationAssertion(RuntimeError):
    """A simulation invariant was violated."""


class LinkBusyError(SimulationAssertion):
    pass


@dataclass(frozen=True)
class Delivery:
    rx_cycle: int
    data: bytes
    fcs_error: bool
    timing: FrameTiming
    flipped_bits: List[int] = field(default_factory=list)


@dataclass
class LinkStats:
    frames: int = 0
    corrupted_frames: int = 0
    fcs_errors: int = 0
    flipped_bits: int = 0
    busy_cycles: int = 0
    wire_bytes: int = 0
    payload_bytes: int = 0

    def snapshot(self, prefix: str = "link.") -> dict:
        return {prefix + k: v for k, v in self.__dict__.items()}


class PhyLink:
    def __init__(self, config: LinkConfig, seed: int = 0, name: str = "link"):
        self.config = config.validate()
        self.name = name
        self.injector = BitErrorInjector(config.ber, seed)
        self.stats = LinkStats()
        self.busy_until = 0
        self._seq = 0

    def is_idle(self, cycle: int) -> bool:
        return cycle >= self.busy_until

    def phy_send(self, frame: bytes, tx_cycle: int, payload_bytes: int = 0) -> Delivery:
        """Put one HTSP frame on the wire starting at `tx_cycle`.

        `payload_bytes` is the HTSP payload length (0 for header-only) and
        sets the cycle cost; the FCS is appended here and checked at the far
        end after error injection.
        """
        if tx_cycle < self.busy_until:
            raise LinkBusyError(
                f"{self.name}: frame at cycle {tx_cycle} overlaps previous frame "
                f"(busy until {self.busy_until})"
            )
        timing = FrameTiming.schedule(payload_bytes, tx_cycle, self.config)
        self.busy_until = tx_cycle + timing.wire_cycles
        self.stats.busy_cycles += timing.wire_cycles
        self.stats.frames += 1
        self.stats.wire_bytes += len(frame) + FCS_BYTES
        self.stats.payload_bytes += payload_bytes

        on_wire = append_fcs(frame)
        on_wire, flipped = self.injector.corrupt(on_wire, self._seq)
        self._seq += 1
        if flipped:
            self.stats.corrupted_frames += 1
            self.stats.flipped_bits += len(flipped)
        body, fcs_error = check_and_strip(on_wire)
        if fcs_error:
            self.stats.fcs_errors += 1
            log.debug("%s: FCS error on frame %d (%d bits flipped)", self.name, self._seq - 1, len(flipped))
        return Delivery(timing.rx_start, body, fcs_error, timing, flipped)
