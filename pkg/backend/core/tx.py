"""HTSP TX: VC mux, burst segmentation, pause publication and keepalive."""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Callable, Deque, List, Optional

from backend.codec import (
    U128_MASK,
    FrameKind,
    HtspFooter,
    HtspHeader,
    PauseMask,
    WireFrame,
)

from .config import TxEngineConfig
from .events import LinkState
from .segment import StreamSegment
from .stats import EngineStats

log = logging.getLogger(__name__)


@dataclass
class _Pending:
    data: bytes
    tuser_first: int
    tuser_last: int
    offset: int = 0


class TxEngine:
    """Single-owner state machine; the caller serializes all calls.

    `local_pause` returns the mask of our own RX FIFOs (published in every
    header). `link_state` is the paired RX engine's view of the far side;
    when given, payload is only sent while it is up and remote pauses gate
    the mux. Without it the engine runs standalone with the link assumed up.
    """

    def __init__(self, config: TxEngineConfig, *, clock_hz: float = 1.0,
                 local_pause: Optional[Callable[[], PauseMask]] = None,
                 link_state: Optional[LinkState] = None,
                 stats: Optional[EngineStats] = None):
        self.config = config.validate()
        self.keepalive_cycles = max(1, int(round(config.keepalive_interval * clock_hz)))
        self._local_pause = local_pause or PauseMask
        self.link_state = link_state
        self.stats = stats or EngineStats(num_vc=config.num_vc)
        self._queues: List[Deque[_Pending]] = [deque() for _ in range(config.num_vc)]
        self._rr = 0
        self._tid = 0
        self._last_frame_time: Optional[int] = None
        self._published_pause = PauseMask()
        self._opcode: Optional[int] = None
        self._user_data = 0

    # --- application side ---
    def tx_push(self, vc: int, frame: bytes, tuser_first: int = 0, tuser_last: int = 0) -> bool:
        """Queue one application frame. False means backpressure (retry later)."""
        if not 0 <= vc < self.config.num_vc:
            raise ValueError(f"vc {vc} out of range (num_vc={self.config.num_vc})")
        if not frame:
            raise ValueError("frame must be non-empty")
        if not 0 <= tuser_first <= 0xFF or not 0 <= tuser_last <= 0x7F:
            raise ValueError("tuser_first is 8 bits, tuser_last is 7 bits")
        q = self._queues[vc]
        if len(q) >= self.config.queue_depth:
            self.stats.tx_rejected += 1
            return False
        q.append(_Pending(bytes(frame), tuser_first, tuser_last))
        return True

    def queued_frames(self, vc: int) -> int:
        return len(self._queues[vc])

    def has_pending(self, vc: Optional[int] = None) -> bool:
        if vc is None:
            return any(self._queues)
        return bool(self._queues[vc])

    def tx_set_opcode(self, data: int) -> None:
        """One-shot: rides on exactly the next emitted frame."""
        if not 0 <= data <= U128_MASK:
            raise ValueError("opcode data is 128 bits")
        if self._opcode is not None:
            self.stats.tx_opcodes_dropped += 1
            log.warning("opcode %#x overwritten before it was sent", self._opcode)
        self._opcode = data

    def tx_set_userdata(self, data: int) -> None:
        """Level-sampled into every subsequent header."""
        if not 0 <= data <= U128_MASK:
            raise ValueError("user data is 128 bits")
        self._user_data = data

    # --- scheduling ---
    def _remote_paused(self, vc: int) -> bool:
        return self.link_state is not None and self.link_state.remote_pause.is_paused(vc)

    def _link_up(self) -> bool:
        return self.link_state is None or self.link_state.up

    def _arbitrate(self) -> Optional[int]:
        n = self.config.num_vc
        for i in range(n):
            vc = (self._rr + i) % n
            if self._queues[vc] and not self._remote_paused(vc):
                self._rr = (vc + 1) % n
                return vc
        return None

    def keepalive_due(self, now: int) -> bool:
        return self._last_frame_time is None or now - self._last_frame_time >= self.keepalive_cycles

    def next_keepalive(self) -> int:
        if self._last_frame_time is None:
            return 0
        return self._last_frame_time + self.keepalive_cycles

    def pause_dirty(self) -> bool:
        return self._local_pause() != self._published_pause

    def wants_to_send(self, now: int) -> bool:
        if self._link_up() and self._arbitrate_peek() is not None:
            return True
        return self.keepalive_due(now) or self.pause_dirty() or (
            self._opcode is not None and self._link_up()
        )

    def _arbitrate_peek(self) -> Optional[int]:
        rr = self._rr
        vc = self._arbitrate()
        self._rr = rr
        return vc

    def tx_next_frame(self, now: int) -> Optional[WireFrame]:
        if self._link_up():
            vc = self._arbitrate()
            if vc is not None:
                return self._emit_full(self._next_segment(vc), now)
        if self.keepalive_due(now):
            return self._emit_header_only(now)
        if self.pause_dirty():
            self.stats.tx_pause_updates += 1
            return self._emit_header_only(now)
        if self._opcode is not None and self._link_up():
            return self._emit_header_only(now)
        return None

    def _next_segment(self, vc: int) -> StreamSegment:
        q = self._queues[vc]
        p = q[0]
        burst = self.config.burst_size_max
        chunk = p.data[p.offset:p.offset + burst]
        sof = p.offset == 0
        p.offset += len(chunk)
        eof = p.offset >= len(p.data)
        if eof:
            q.popleft()
        return StreamSegment(vc, chunk, sof, eof, p.tuser_first, p.tuser_last)

    def _header(self, now: int, **fields) -> HtspHeader:
        pause = self._local_pause()
        opcode_en, opcode = 0, 0
        if self._opcode is not None:
            opcode_en, opcode = 1, self._opcode
            self._opcode = None
            self.stats.tx_opcodes_sent += 1
        h = HtspHeader(
            dest_mac=self.config.remote_mac,
            src_mac=self.config.local_mac,
            ether_type=self.config.ether_type,
            tid=self._tid,
            pause=pause,
            opcode_en=opcode_en,
            opcode_data=opcode,
            user_data=self._user_data,
            **fields,
        )
        self._tid = (self._tid + 1) & 0xFF
        self._published_pause = pause
        self._last_frame_time = now
        return h

    def _emit_full(self, seg: StreamSegment, now: int) -> WireFrame:
        header = self._header(now, vc=seg.vc, tuser_first=seg.tuser_first if seg.sof else 0)
        footer = HtspFooter.for_payload(
            len(seg.data),
            tlast=seg.eof,
            tuser_last=seg.tuser_last if seg.eof else 0,
            pause=header.pause,
        )
        self.stats.tx_frames_full += 1
        self.stats.vc_tx_bytes[seg.vc] += len(seg.data)
        log.debug("tx full vc=%d tid=%d %dB sof=%s eof=%s", seg.vc, header.tid,
                  len(seg.data), seg.sof, seg.eof)
        return WireFrame(FrameKind.FULL, header, seg.data, footer)

    def _emit_header_only(self, now: int) -> WireFrame:
        header = self._header(now)
        self.stats.tx_frames_header_only += 1
        log.debug("tx header-only tid=%d pause=%#06x", header.tid, header.pause.bits)
        return WireFrame(FrameKind.HEADER_ONLY, header)

    def latch_footer_pause(self, frame: WireFrame) -> WireFrame:
        """Resample the local pause mask into the footer as it leaves.

        Pause changes made while the payload was on the wire ride on the
        footer; the RX applies it after the header.
        """
        if frame.kind is not FrameKind.FULL:
            return frame
        latched = self._local_pause()
        self._published_pause = latched
        if latched == frame.footer.pause:
            return frame
        return replace(frame, footer=replace(frame.footer, pause=latched))
