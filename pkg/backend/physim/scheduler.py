from __future__ import annotations

import heapq
import itertools
from typing import Any, Callable, List, Optional, Tuple


class EventQueue:
    """Discrete-event queue keyed by simulated cycle.

    Events at the same cycle run in insertion order.
    """

    def __init__(self):
        self._heap: List[Tuple[int, int, Callable[..., Any], tuple]] = []
        self._seq = itertools.count()
        self.now = 0
        self.processed = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, cycle: int, fn: Callable[..., Any], *args) -> None:
        if cycle < self.now:
            raise ValueError(f"cannot schedule in the past ({cycle} < {self.now})")
        heapq.heappush(self._heap, (int(cycle), next(self._seq), fn, args))

    def peek(self) -> Optional[int]:
        return self._heap[0][0] if self._heap else None

    def step(self) -> bool:
        if not self._heap:
            return False
        cycle, _, fn, args = heapq.heappop(self._heap)
        self.now = cycle
        self.processed += 1
        fn(*args)
        return True

    def run_until(self, end_cycle: int, stop: Optional[Callable[[], bool]] = None) -> int:
        """Process events with cycle < end_cycle, or until `stop()` is true."""
        while self._heap and self._heap[0][0] < end_cycle:
            self.step()
            if stop is not None and stop():
                return self.now
        self.now = max(self.now, end_cycle)
        return self.now
