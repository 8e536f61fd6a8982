from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class StreamSegment:
    """One burst of one VC's application frame."""

    vc: int
    data: bytes
    sof: bool
    eof: bool
    tuser_first: int = 0
    tuser_last: int = 0

    def __post_init__(self):
        if not self.data:
            raise ValueError("segment data must be non-empty")
        if self.vc < 0:
            raise ValueError(f"bad vc {self.vc}")


@dataclass
class RxSegment:
    """A segment as buffered in a VC receive FIFO.

    An empty, errored, eof segment is an abort marker closing a frame whose
    real end was lost on the link.
    """

    data: bytes
    sof: bool
    eof: bool
    tuser_first: Optional[int] = None
    tuser_last: int = 0
    errored: bool = False
    rx_time: int = 0

    @property
    def is_abort(self) -> bool:
        return not self.data and self.eof and self.errored


@dataclass(frozen=True)
class RxFrame:
    """A reassembled application frame handed to the RX application."""

    vc: int
    data: bytes
    tuser_first: Optional[int]      # None when the first segment was lost
    tuser_last: int
    error: bool
