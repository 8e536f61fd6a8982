"""Closed-form bandwidth, frame-rate and latency models for the sweeps."""
from __future__ import annotations

import math
from typing import List, Optional

from backend.codec import DEFAULT_BURST_SIZE_MAX
from backend.physim import LinkConfig, latency_model, overhead_cycles

_DEFAULT_LINK = LinkConfig()


def burst_sizes(frame_bytes: int, burst_size_max: int = DEFAULT_BURST_SIZE_MAX) -> List[int]:
    """How the TX segments one application frame."""
    if frame_bytes < 1:
        raise ValueError(f"frame_bytes must be >= 1, got {frame_bytes}")
    full, rest = divmod(frame_bytes, burst_size_max)
    return [burst_size_max] * full + ([rest] if rest else [])


def overhead_bytes(frame_bytes: int, link: Optional[LinkConfig] = None,
                   burst_size_max: int = DEFAULT_BURST_SIZE_MAX) -> int:
    """Header/footer/IPG bytes spent on one application frame, summed per burst."""
    link = link or _DEFAULT_LINK
    return sum(overhead_cycles(b, link) * link.word_bytes for b in burst_sizes(frame_bytes, burst_size_max))


def wire_bytes(frame_bytes: int, link: Optional[LinkConfig] = None,
               burst_size_max: int = DEFAULT_BURST_SIZE_MAX, word_align: bool = True) -> int:
    """Denominator of both formulas.

    With `word_align` each burst's payload is rounded up to whole bus words,
    which is what the wire actually carries; without it this is the plain
    frame size plus overhead.
    """
    link = link or _DEFAULT_LINK
    bursts = burst_sizes(frame_bytes, burst_size_max)
    if word_align:
        payload = sum(math.ceil(b / link.word_bytes) * link.word_bytes for b in bursts)
    else:
        payload = frame_bytes
    return payload + overhead_bytes(frame_bytes, link, burst_size_max)


def calc_bandwidth(frame_bytes: int, link: Optional[LinkConfig] = None,
                   burst_size_max: int = DEFAULT_BURST_SIZE_MAX, word_align: bool = True) -> float:
    """Goodput in Gb/s: line rate x frame / (frame + overhead)."""
    link = link or _DEFAULT_LINK
    return link.line_rate * frame_bytes / wire_bytes(frame_bytes, link, burst_size_max, word_align) / 1e9


def calc_framerate(frame_bytes: int, link: Optional[LinkConfig] = None,
                   burst_size_max: int = DEFAULT_BURST_SIZE_MAX, word_align: bool = True) -> float:
    """Application frames per second: line rate / (frame + overhead)."""
    link = link or _DEFAULT_LINK
    return link.line_rate / 8 / wire_bytes(frame_bytes, link, burst_size_max, word_align)


def calc_latency_us(frame_bytes: int, link: Optional[LinkConfig] = None,
                    burst_size_max: int = DEFAULT_BURST_SIZE_MAX) -> float:
    return latency_model(frame_bytes, link or _DEFAULT_LINK, burst_size_max) * 1e6


def fcs_drop_probability(payload_bytes: int, ber: float) -> float:
    """Chance one full HTSP frame (header, payload, footer, FCS) takes at least one flip."""
    bits = 8 * (64 + payload_bytes + 6 + 4)
    return -math.expm1(bits * math.log1p(-ber)) if ber else 0.0
