from __future__ import annotations

from .errors import EncodeError, PayloadSizeMismatch, Truncated
from .footer import decode_footer, encode_footer
from .header import decode_header, encode_header
from .types import (
    DEFAULT_BURST_SIZE_MAX,
    FOOTER_BYTES,
    HEADER_BYTES,
    FrameKind,
    WireFrame,
)


def serialize_frame(w: WireFrame) -> bytes:
    head = encode_header(w.header)
    if w.kind is FrameKind.HEADER_ONLY:
        if w.payload or w.footer is not None:
            raise EncodeError("header-only frame carries payload or footer")
        return head
    if w.footer is None:
        raise EncodeError("full frame without footer")
    if w.footer.payload_size != len(w.payload):
        raise PayloadSizeMismatch(
            f"footer says {w.footer.payload_size} bytes, payload has {len(w.payload)}"
        )
    return head + bytes(w.payload) + encode_footer(w.footer)


def parse_frame(data: bytes, burst_size_max: int = DEFAULT_BURST_SIZE_MAX) -> WireFrame:
    """Length decides the kind: exactly 64 bytes is header-only."""
    n = len(data)
    if n < HEADER_BYTES:
        raise Truncated(f"{n} bytes, header alone needs {HEADER_BYTES}")
    header = decode_header(bytes(data[:HEADER_BYTES]))
    if n == HEADER_BYTES:
        return WireFrame(FrameKind.HEADER_ONLY, header)
    if n < HEADER_BYTES + 1 + FOOTER_BYTES:
        raise Truncated(f"{n} bytes is too short for header + payload + footer")
    footer = decode_footer(bytes(data[-FOOTER_BYTES:]), burst_size_max)
    payload = bytes(data[HEADER_BYTES:-FOOTER_BYTES])
    if footer.payload_size != len(payload):
        raise PayloadSizeMismatch(
            f"footer says {footer.payload_size} bytes, frame carries {len(payload)}"
        )
    return WireFrame(FrameKind.FULL, header, payload, footer)
