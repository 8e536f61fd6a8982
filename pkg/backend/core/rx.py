"""HTSP RX: validation, link/pause tracking and per-VC reassembly."""
from __future__ import annotations

import logging
from typing import Dict, List, Optional

from backend.codec import (
    FOOTER_BYTES,
    HEADER_BYTES,
    CodecError,
    FrameKind,
    PauseMask,
    decode_footer,
    decode_header,
    parse_frame,
)

from .config import RxEngineConfig
from .events import (
    Drop,
    DropReason,
    LinkDown,
    LinkState,
    LinkStatus,
    LinkUp,
    OpCodeEvent,
    PauseChanged,
    RxEvent,
    SegmentDelivered,
)
from .fifo import VcRxFifo
from .segment import RxFrame, RxSegment
from .stats import EngineStats

log = logging.getLogger(__name__)


class RxEngine:
    def __init__(self, config: RxEngineConfig, *, clock_hz: float = 1.0,
                 keepalive_interval: float = 100e-6, stats: Optional[EngineStats] = None):
        self.config = config.validate()
        timeout = config.link_timeout if config.link_timeout is not None else 10 * keepalive_interval
        self.link_timeout_cycles = max(1, int(round(timeout * clock_hz)))
        self.stats = stats or EngineStats(num_vc=config.num_vc)
        self.fifos = [
            VcRxFifo(vc, config.fifo_capacity, config.pause_threshold, config.pause_low_watermark)
            for vc in range(config.num_vc)
        ]
        self.link_state = LinkState()
        self._vc_mask = (1 << config.num_vc) - 1
        self._expected_tid: Optional[int] = None
        self._in_frame = [False] * config.num_vc
        self._errored = [False] * config.num_vc
        self._pause_since: List[Optional[int]] = [None] * config.num_vc
        self._stuck_warned = [False] * config.num_vc
        self._now = 0

    # --- local pause ---
    def local_pause_mask(self) -> PauseMask:
        bits = 0
        for f in self.fifos:
            if f.paused:
                bits |= 1 << f.vc
        return PauseMask(bits)

    def _track_pause(self, now: int) -> None:
        self._now = max(self._now, now)
        for f in self.fifos:
            since = self._pause_since[f.vc]
            if f.paused and since is None:
                self._pause_since[f.vc] = self._now
            elif not f.paused and since is not None:
                self.stats.vc_pause_cycles[f.vc] += self._now - since
                self._pause_since[f.vc] = None

    def pause_cycles(self, vc: int, now: Optional[int] = None) -> int:
        """Cycles VC `vc` has advertised pause, including a still-open interval."""
        total = self.stats.vc_pause_cycles[vc]
        since = self._pause_since[vc]
        if since is not None:
            total += (self._now if now is None else now) - since
        return total

    def snapshot(self, now: Optional[int] = None) -> Dict[str, int]:
        """Counter snapshot with still-open pause intervals counted up to `now`."""
        return self.stats.snapshot(pause_cycles=lambda vc: self.pause_cycles(vc, now))

    # --- link ---
    def link_check(self, now: int) -> List[RxEvent]:
        ls = self.link_state
        if ls.up and ls.last_rx_header_time is not None and (
            now - ls.last_rx_header_time >= self.link_timeout_cycles
        ):
            ls.state = LinkStatus.DOWN
            self._expected_tid = None
            self.stats.rx_link_down += 1
            log.warning("link down at cycle %d: no valid header for %d cycles",
                        now, now - ls.last_rx_header_time)
            return [LinkDown(now)]
        return []

    def link_deadline(self) -> Optional[int]:
        ls = self.link_state
        if not ls.up or ls.last_rx_header_time is None:
            return None
        return ls.last_rx_header_time + self.link_timeout_cycles

    def _set_remote_pause(self, mask: PauseMask, now: int, events: List[RxEvent]) -> None:
        mask = PauseMask(mask.bits & self._vc_mask)
        old = self.link_state.remote_pause
        if mask != old:
            self.link_state.remote_pause = mask
            events.append(PauseChanged(old, mask, now))

    # --- ingest ---
    def rx_ingest(self, data: bytes, fcs_error: bool, now: int) -> List[RxEvent]:
        """Process one frame from the PHY and return what happened, in order."""
        self._now = max(self._now, now)
        events: List[RxEvent] = []
        if fcs_error:
            self._drop_fcs(data, now, events)
            return events
        try:
            frame = parse_frame(data, self.config.burst_size_max)
        except CodecError as exc:
            reason = DropReason.from_reason(exc.reason)
            self.stats.drops[reason.value] += 1
            log.debug("rx drop %s: %s", reason.value, exc)
            events.append(Drop(reason, now))
            return events

        h = frame.header
        self.stats.rx_frames += 1
        ls = self.link_state
        ls.last_rx_header_time = now
        if not ls.up:
            ls.state = LinkStatus.UP
            self.stats.rx_link_up += 1
            log.info("link up at cycle %d", now)
            events.append(LinkUp(now))
        if self._expected_tid is not None and h.tid != self._expected_tid:
            missing = (h.tid - self._expected_tid) & 0xFF
            self.stats.rx_tid_gaps += missing
            log.debug("tid gap: expected %d got %d (%d missing)", self._expected_tid, h.tid, missing)
        self._expected_tid = (h.tid + 1) & 0xFF

        self._set_remote_pause(h.pause, now, events)
        ls.remote_user_data = h.user_data
        if h.opcode_en == 1:
            events.append(OpCodeEvent(h.opcode_data, now))
        elif h.opcode_en:
            log.debug("OpCodeEn %#x is not 1, opcode ignored", h.opcode_en)

        if frame.kind is FrameKind.HEADER_ONLY:
            self.stats.rx_frames_header_only += 1
            return events

        # footer was sampled after the payload, so it is the newer pause view
        self._set_remote_pause(frame.footer.pause, now, events)
        vc = h.vc
        if vc >= self.config.num_vc:
            self.stats.drops[DropReason.UNKNOWN_VC.value] += 1
            events.append(Drop(DropReason.UNKNOWN_VC, now, vc))
            return events

        sof = not self._in_frame[vc]
        eof = frame.footer.tlast
        seg = RxSegment(
            data=frame.payload,
            sof=sof,
            eof=eof,
            tuser_first=h.tuser_first if sof else None,
            tuser_last=frame.footer.tuser_last if eof else 0,
            errored=self._errored[vc],
            rx_time=now,
        )
        self.fifos[vc].push(seg)
        self._in_frame[vc] = not eof
        if eof:
            self._errored[vc] = False
        self.stats.vc_rx_bytes[vc] += len(frame.payload)
        self._track_pause(now)
        events.append(SegmentDelivered(vc, len(frame.payload), sof, eof, now))
        return events

    def _drop_fcs(self, data: bytes, now: int, events: List[RxEvent]) -> None:
        self.stats.drops[DropReason.FCS_ERROR.value] += 1
        vc = self._attribute_vc(data)
        events.append(Drop(DropReason.FCS_ERROR, now, vc))
        if vc is None:
            for v in range(self.config.num_vc):
                if self._in_frame[v]:
                    self._mark_errored(v)
            return
        tlast = self._footer_tlast(data)
        if self._in_frame[vc]:
            self._mark_errored(vc)
            if tlast:
                self.fifos[vc].push(RxSegment(b"", sof=False, eof=True, errored=True, rx_time=now))
                self._in_frame[vc] = False
                self._errored[vc] = False
        elif tlast is False:
            # lost the opening segment of a multi-burst frame
            self._in_frame[vc] = True
            self._errored[vc] = True

    def _mark_errored(self, vc: int) -> None:
        self._errored[vc] = True
        last = self.fifos[vc].last()
        if last is not None and not last.eof:
            last.errored = True

    def _attribute_vc(self, data: bytes) -> Optional[int]:
        if len(data) <= HEADER_BYTES + FOOTER_BYTES:
            return None
        try:
            h = decode_header(bytes(data[:HEADER_BYTES]))
        except CodecError:
            return None
        return h.vc if h.vc < self.config.num_vc else None

    def _footer_tlast(self, data: bytes) -> Optional[bool]:
        try:
            return decode_footer(bytes(data[-FOOTER_BYTES:]), self.config.burst_size_max).tlast
        except CodecError:
            return None

    # --- application side ---
    def rx_pop_segment(self, vc: int, now: Optional[int] = None) -> Optional[RxSegment]:
        """Streaming read: one buffered segment, frees FIFO space immediately."""
        seg = self.fifos[vc].pop()
        if seg is not None:
            if seg.eof:
                self._count_frame(seg.errored)
            self._track_pause(self._now if now is None else now)
        return seg

    def rx_pop(self, vc: int, now: Optional[int] = None) -> Optional[RxFrame]:
        """Next fully reassembled frame on `vc`, or None.

        A frame is returned only once all its segments are buffered, so frames
        larger than `config.reassembly_limit` never complete here under flow
        control; stream those with `rx_pop_segment`.

        With error_policy "drop" errored frames are discarded here and the
        next complete frame, if any, is returned instead.
        """
        fifo = self.fifos[vc]
        while True:
            n = fifo.complete_frame_length()
            if n == 0:
                if fifo.paused and fifo.occupancy >= fifo.pause_level and not self._stuck_warned[vc]:
                    self._stuck_warned[vc] = True
                    log.warning(
                        "VC%d: incomplete frame holds %d B at the pause level of a %d B FIFO; "
                        "frames above %d B only complete through rx_pop_segment",
                        vc, fifo.occupancy, fifo.capacity, self.config.reassembly_limit,
                    )
                return None
            self._stuck_warned[vc] = False
            segs = fifo.pop_many(n)
            self._track_pause(self._now if now is None else now)
            error = any(s.errored for s in segs)
            self._count_frame(error)
            if error and self.config.error_policy == "drop":
                self.stats.rx_frames_discarded += 1
                continue
            first = segs[0]
            return RxFrame(
                vc=vc,
                data=b"".join(s.data for s in segs),
                tuser_first=first.tuser_first if first.sof else None,
                tuser_last=segs[-1].tuser_last,
                error=error,
            )

    def _count_frame(self, error: bool) -> None:
        if error:
            self.stats.rx_frames_errored += 1
        else:
            self.stats.rx_frames_delivered += 1
