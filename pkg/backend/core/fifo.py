from __future__ import annotations

from collections import deque
from typing import Deque, List, Optional

from backend.physim import SimulationAssertion

from .segment import RxSegment


class FifoOverflowError(SimulationAssertion):
    pass


class VcRxFifo:
    """Per-VC receive buffer; its fill level drives the local pause bit."""

    def __init__(self, vc: int, capacity: int, pause_threshold: float = 0.5,
                 low_watermark: Optional[float] = None):
        self.vc = vc
        self.capacity = capacity
        self.pause_level = pause_threshold * capacity
        self.resume_level = None if low_watermark is None else low_watermark * capacity
        self.occupancy = 0
        self.peak = 0
        self._queue: Deque[RxSegment] = deque()
        self._paused = False

    def __len__(self) -> int:
        return len(self._queue)

    @property
    def paused(self) -> bool:
        return self._paused

    def _update_pause(self) -> None:
        if self.occupancy >= self.pause_level:
            self._paused = True
        elif self.resume_level is None or self.occupancy < self.resume_level:
            self._paused = False

    def push(self, seg: RxSegment) -> None:
        if self.occupancy + len(seg.data) > self.capacity:
            raise FifoOverflowError(
                f"VC{self.vc} FIFO overflow: {self.occupancy} + {len(seg.data)} > {self.capacity}"
            )
        self._queue.append(seg)
        self.occupancy += len(seg.data)
        self.peak = max(self.peak, self.occupancy)
        self._update_pause()

    def last(self) -> Optional[RxSegment]:
        return self._queue[-1] if self._queue else None

    def pop(self) -> Optional[RxSegment]:
        if not self._queue:
            return None
        seg = self._queue.popleft()
        self.occupancy -= len(seg.data)
        self._update_pause()
        return seg

    def complete_frame_length(self) -> int:
        """Number of queued segments up to and including the first eof, 0 if none."""
        for i, seg in enumerate(self._queue):
            if seg.eof:
                return i + 1
        return 0

    def pop_many(self, n: int) -> List[RxSegment]:
        return [self.pop() for _ in range(n)]
