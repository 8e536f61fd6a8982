"""Event-driven PRBS testbench around one or two HTSP endpoints.

Loopback wires an endpoint's output back to its own input; the pair
topology sends traffic from endpoint a to endpoint b over two PhyLinks.
"""
from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, List, Optional

from backend.codec import FrameKind, WireFrame, serialize_frame
from backend.core import (
    EngineConfig,
    Endpoint,
    LinkDown,
    LinkUp,
    PauseChanged,
    RxEvent,
    RxSegment,
    SegmentDelivered,
)
from backend.physim import (
    Delivery,
    EventQueue,
    LinkConfig,
    PhyLink,
    SimulationAssertion,
    data_words,
    wire_cycles,
)

from .prbs import PrbsChecker, PrbsState, bit_errors, prbs_frame
from .profiler import LatencyProbe

log = logging.getLogger(__name__)

TOPOLOGIES = ("loopback", "pair")


def stream_seed(seed: int, vc: int) -> int:
    return (seed << 4) | vc


class PrbsSource:
    """Infinite offered load for one VC: fixed-size PRBS frames, tagged by sequence."""

    def __init__(self, vc: int, seed: int, frame_bytes: int):
        self.vc = vc
        self.frame_bytes = frame_bytes
        self.state = PrbsState.from_seed(stream_seed(seed, vc))
        self.sent = 0

    def next_frame(self):
        tag = self.sent % 256
        self.sent += 1
        return prbs_frame(self.state, self.frame_bytes), tag


class PrbsSink:
    """Streams one VC's segments out of the RX and checks them against PRBS."""

    def __init__(self, vc: int, seed: int, frame_bytes: int):
        self.vc = vc
        self.checker = PrbsChecker(stream_seed(seed, vc), frame_bytes)
        self.stalled = False
        self.frames_ok = 0
        self.frames_errored = 0
        self.bytes_ok = 0
        self.undetected_frames = 0
        self.undetected_bit_errors = 0
        self.on_frame: List[Callable[[int, int, int], None]] = []
        self._expected: Optional[bytes] = None
        self._in_frame = False
        self._pos = 0
        self._error = False
        self._bit_errors = 0

    @property
    def frames_skipped(self) -> int:
        return self.checker.frames_skipped

    def consume(self, seg: RxSegment, now: int) -> None:
        if seg.sof:
            if self._in_frame:
                self._finish(now, forced_error=True)
            self._in_frame = True
            self._expected = self.checker.expect(seg.tuser_first or 0)
            self._pos, self._error, self._bit_errors = 0, False, 0
        elif not self._in_frame:
            # continuation of a frame whose start was lost
            self._in_frame = True
            self._expected = None
            self._pos, self._error, self._bit_errors = 0, True, 0
        if seg.errored:
            self._error = True
        if seg.data:
            if self._expected is not None:
                chunk = self._expected[self._pos:self._pos + len(seg.data)]
                if len(chunk) != len(seg.data):
                    self._error = True
                else:
                    self._bit_errors += bit_errors(chunk, seg.data)
            self._pos += len(seg.data)
        if seg.eof:
            self._finish(now)

    def _finish(self, now: int, forced_error: bool = False) -> None:
        if self._expected is None or self._pos != len(self._expected):
            self._error = True
        if self._error or forced_error:
            self.frames_errored += 1
        else:
            self.frames_ok += 1
            self.bytes_ok += self._pos
            if self._bit_errors:
                self.undetected_frames += 1
                self.undetected_bit_errors += self._bit_errors
            for cb in self.on_frame:
                cb(now, self.vc, self._pos)
        self._in_frame = False
        self._expected = None


class Testbench:
    __test__ = False

    def __init__(self, link: LinkConfig, engine: EngineConfig, *, seed: int = 0,
                 topology: str = "loopback", frame_bytes: int = 8192,
                 active_vcs: Optional[Iterable[int]] = None, infinite_load: bool = True):
        if topology not in TOPOLOGIES:
            raise ValueError(f"topology must be one of {TOPOLOGIES}, got {topology!r}")
        self.link = link.validate()
        self.engine = engine.validate()
        self.seed = seed
        self.topology = topology
        self.frame_bytes = frame_bytes
        self.queue = EventQueue()
        if topology == "loopback":
            self.src = self.dst = Endpoint.loopback(engine, link, seed)
            self.endpoints = [self.src]
        else:
            self.src, self.dst = Endpoint.pair(engine, link, seed)
            self.endpoints = [self.src, self.dst]
        vcs = list(range(engine.tx.num_vc)) if active_vcs is None else list(active_vcs)
        self.sources: Dict[int, PrbsSource] = {vc: PrbsSource(vc, seed, frame_bytes) for vc in vcs}
        self.sinks: Dict[int, PrbsSink] = {vc: PrbsSink(vc, seed, frame_bytes) for vc in vcs}
        self.infinite_load = infinite_load
        self.probe: Optional[LatencyProbe] = None
        self.full_frames_sent = 0
        self.full_frames_fcs_errors = 0
        self.events: List[RxEvent] = []
        self.record_events = False
        self.wire_cycles_sent = {id(ep): 0 for ep in self.endpoints}
        self._tx_busy = {id(ep): False for ep in self.endpoints}
        self._tx_scheduled = {id(ep): False for ep in self.endpoints}
        self._wake_at: Dict[int, Optional[int]] = {id(ep): None for ep in self.endpoints}

    @property
    def now(self) -> int:
        return self.queue.now

    # --- control ---
    def start(self) -> None:
        for ep in self.endpoints:
            self.kick(ep)
            self._arm_wake(ep)

    def run(self, cycles: int, stop: Optional[Callable[[], bool]] = None) -> int:
        return self.queue.run_until(self.queue.now + cycles, stop)

    def run_until_link_up(self, limit_cycles: int) -> None:
        self.run(limit_cycles, stop=lambda: self.src.rx.link_state.up)
        if not self.src.rx.link_state.up:
            raise SimulationAssertion(f"link did not come up within {limit_cycles} cycles")

    def stall(self, vc: int) -> None:
        self.sinks[vc].stalled = True

    def unstall(self, vc: int) -> None:
        self.sinks[vc].stalled = False
        self._drain(self.dst)
        self.kick(self.dst)

    def offer(self, vc: int, data: bytes, tag: int = 0) -> bool:
        ok = self.src.tx.tx_push(vc, data, tuser_first=tag, tuser_last=tag & 0x7F)
        self.kick(self.src)
        return ok

    def start_probe(self, vc: int = 0) -> LatencyProbe:
        """Offer one frame on an idle link and time it through the RX."""
        probe = LatencyProbe(self.frame_bytes, vc)
        self.probe = probe
        t0 = max(self.now, self.src.phy.busy_until)

        def push():
            probe.start(self.now)
            data, tag = self.sources[vc].next_frame()
            if not self.offer(vc, data, tag):
                raise SimulationAssertion("TX queue full on an idle link")

        self.queue.schedule(t0, push)
        return probe

    # --- TX side ---
    def kick(self, ep: Endpoint) -> None:
        key = id(ep)
        if self._tx_busy[key] or self._tx_scheduled[key]:
            return
        self._tx_scheduled[key] = True
        self.queue.schedule(max(self.now, ep.phy.busy_until), self._tx_ready, ep)

    def _refill(self, ep: Endpoint) -> None:
        if not self.infinite_load or ep is not self.src:
            return
        tx = ep.tx
        for vc, src in self.sources.items():
            while tx.queued_frames(vc) < tx.config.queue_depth:
                data, tag = src.next_frame()
                tx.tx_push(vc, data, tuser_first=tag, tuser_last=tag & 0x7F)

    def _tx_ready(self, ep: Endpoint) -> None:
        key = id(ep)
        self._tx_scheduled[key] = False
        now = self.now
        if now < ep.phy.busy_until:
            self.kick(ep)
            return
        self._refill(ep)
        frame = ep.tx.tx_next_frame(now)
        if frame is None:
            return
        if frame.kind is FrameKind.FULL:
            self._tx_busy[key] = True
            # footer goes out after the last payload word
            footer_at = now + 1 + data_words(len(frame.payload), self.link)
            self.queue.schedule(footer_at, self._footer, ep, frame, now)
        else:
            self._transmit(ep, frame, now)

    def _footer(self, ep: Endpoint, frame: WireFrame, tx_cycle: int) -> None:
        self._transmit(ep, ep.tx.latch_footer_pause(frame), tx_cycle)

    def _transmit(self, ep: Endpoint, frame: WireFrame, tx_cycle: int) -> None:
        d = ep.phy.phy_send(serialize_frame(frame), tx_cycle, len(frame.payload))
        self.wire_cycles_sent[id(ep)] += wire_cycles(len(frame.payload), self.link)
        self._tx_busy[id(ep)] = False
        if frame.kind is FrameKind.FULL:
            self.full_frames_sent += 1
            self.full_frames_fcs_errors += d.fcs_error
        self.queue.schedule(d.rx_cycle, self._deliver, ep.peer, d)
        self.kick(ep)
        self._arm_wake(ep)

    # --- keepalive / link timeout ---
    def _arm_wake(self, ep: Endpoint) -> None:
        key = id(ep)
        t = ep.tx.next_keepalive()
        deadline = ep.rx.link_deadline()
        if deadline is not None:
            t = min(t, deadline)
        t = max(t, self.now)
        pending = self._wake_at[key]
        if pending is None or t < pending:
            self._wake_at[key] = t
            self.queue.schedule(t, self._wake, ep, t)

    def _wake(self, ep: Endpoint, t: int) -> None:
        key = id(ep)
        if self._wake_at[key] != t:
            return
        self._wake_at[key] = None
        self._handle(ep, ep.rx.link_check(self.now))
        if ep.tx.wants_to_send(self.now):
            self.kick(ep)
        self._arm_wake(ep)

    # --- RX side ---
    def _deliver(self, ep: Endpoint, d: Delivery) -> None:
        events = ep.rx.rx_ingest(d.data, d.fcs_error, self.now)
        self._handle(ep, events)
        self._drain(ep)
        if ep.tx.wants_to_send(self.now):
            self.kick(ep)

    def _handle(self, ep: Endpoint, events: List[RxEvent]) -> None:
        for ev in events:
            if self.record_events:
                self.events.append(ev)
            if isinstance(ev, SegmentDelivered):
                if self.probe is not None and ep is self.dst:
                    self.probe.observe(ev.vc, ev.sof, ev.rx_time)
            elif isinstance(ev, (LinkUp, PauseChanged)):
                self.kick(ep)
            elif isinstance(ev, LinkDown):
                log.warning("%s: link down at cycle %d", ep.name, ev.rx_time)

    def _drain(self, ep: Endpoint) -> None:
        if ep is not self.dst:
            return
        for vc, sink in self.sinks.items():
            if sink.stalled:
                continue
            while True:
                seg = ep.rx.rx_pop_segment(vc, self.now)
                if seg is None:
                    break
                sink.consume(seg, self.now)

    # --- invariants ---
    def check_invariants(self, strict_tid: Optional[bool] = None) -> None:
        """Raise SimulationAssertion when the run broke a model invariant."""
        if strict_tid is None:
            strict_tid = self.link.ber == 0
        for ep in self.endpoints:
            busy = ep.phy.stats.busy_cycles
            if busy != self.wire_cycles_sent[id(ep)]:
                raise SimulationAssertion(
                    f"{ep.phy.name}: {busy} busy cycles but the frames sent cost "
                    f"{self.wire_cycles_sent[id(ep)]} wire cycles"
                )
            if busy > ep.phy.busy_until:
                raise SimulationAssertion(f"{ep.phy.name}: {busy} busy cycles exceed wire time {ep.phy.busy_until}")
            # every missing TID is a frame the far end sent and the PHY lost
            lost = self.inbound_phy(ep).stats.fcs_errors
            if ep.stats.rx_tid_gaps > lost:
                raise SimulationAssertion(f"{ep.name}: {ep.stats.rx_tid_gaps} TID gaps but only {lost} frames lost")
            if strict_tid and ep.stats.rx_tid_gaps:
                raise SimulationAssertion(f"{ep.name}: {ep.stats.rx_tid_gaps} TID gaps on an error-free link")
        for sink in self.sinks.values():
            if sink.undetected_bit_errors:
                raise SimulationAssertion(
                    f"VC{sink.vc}: {sink.undetected_bit_errors} PRBS bit errors in "
                    f"{sink.undetected_frames} frames passed as good"
                )
            if self.link.ber == 0 and (sink.frames_errored or sink.frames_skipped):
                raise SimulationAssertion(
                    f"VC{sink.vc}: {sink.frames_errored} errored / {sink.frames_skipped} "
                    f"missing frames on an error-free link"
                )

    def inbound_phy(self, ep: Endpoint) -> PhyLink:
        """The PhyLink that delivers into `ep.rx`."""
        return next(e.phy for e in self.endpoints if e.peer is ep)

    def peak_fifo(self) -> int:
        return max(f.peak for f in self.dst.rx.fifos)
