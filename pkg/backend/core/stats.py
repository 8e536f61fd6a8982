from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional


@dataclass
class EngineStats:
    """Counters of one endpoint. `snapshot()` flattens them for CSV/JSON."""

    num_vc: int = 1
    tx_frames_full: int = 0
    tx_frames_header_only: int = 0
    tx_pause_updates: int = 0
    tx_opcodes_sent: int = 0
    tx_opcodes_dropped: int = 0
    tx_rejected: int = 0
    rx_frames: int = 0
    rx_frames_header_only: int = 0
    rx_tid_gaps: int = 0
    rx_link_up: int = 0
    rx_link_down: int = 0
    rx_frames_delivered: int = 0
    rx_frames_errored: int = 0
    rx_frames_discarded: int = 0
    drops: Counter = field(default_factory=Counter)
    vc_tx_bytes: Counter = field(default_factory=Counter)
    vc_rx_bytes: Counter = field(default_factory=Counter)
    vc_pause_cycles: Counter = field(default_factory=Counter)

    def snapshot(self, pause_cycles: Optional[Callable[[int], int]] = None) -> Dict[str, int]:
        """`pause_cycles(vc)` overrides the closed-interval pause counter, see `RxEngine.snapshot`."""
        out: Dict[str, int] = {}
        for name, value in self.__dict__.items():
            if isinstance(value, int) and name != "num_vc":
                out[name.replace("_", ".", 1)] = value
        for reason in sorted(self.drops):
            out[f"rx.drop.{reason}"] = self.drops[reason]
        for vc in range(self.num_vc):
            out[f"vc{vc}.tx_bytes"] = self.vc_tx_bytes[vc]
            out[f"vc{vc}.rx_bytes"] = self.vc_rx_bytes[vc]
            out[f"vc{vc}.pause_cycles"] = pause_cycles(vc) if pause_cycles else self.vc_pause_cycles[vc]
        return out
