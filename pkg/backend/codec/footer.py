"""
HTSP footer (6 bytes)

 byte   field
 0      TKeepLast      valid bytes in last payload word (1..64)
 1      TLast/TUSER    BIT(0)=tlast, BIT(7:1)=tuser_last
 2:3    Pause          little endian, latched during the payload
 4:5    PayloadSize    little endian byte count
"""
from __future__ import annotations

import struct

from .errors import EncodeError, MalformedFooter, Truncated
from .types import DEFAULT_BURST_SIZE_MAX, FOOTER_BYTES, HtspFooter, PauseMask, tkeep_for

_FOOTER = struct.Struct("<BBHH")


def encode_footer(f: HtspFooter) -> bytes:
    if not 1 <= f.payload_size <= 0xFFFF:
        raise EncodeError(f"payload_size {f.payload_size} out of range")
    if f.tkeep_last != tkeep_for(f.payload_size):
        raise EncodeError(
            f"tkeep_last {f.tkeep_last} inconsistent with payload_size {f.payload_size}"
        )
    if not 0 <= f.tuser_last < 0x80:
        raise EncodeError(f"tuser_last {f.tuser_last:#x} does not fit in 7 bits")
    packed = (f.tuser_last << 1) | int(bool(f.tlast))
    return _FOOTER.pack(f.tkeep_last, packed, f.pause.bits, f.payload_size)


def decode_footer(block: bytes, burst_size_max: int = DEFAULT_BURST_SIZE_MAX) -> HtspFooter:
    if len(block) != FOOTER_BYTES:
        raise Truncated(f"footer needs {FOOTER_BYTES} bytes, got {len(block)}")
    tkeep_last, packed, pause, payload_size = _FOOTER.unpack(block)
    if payload_size == 0 or payload_size > burst_size_max:
        raise MalformedFooter(f"payload_size {payload_size} outside 1..{burst_size_max}")
    if tkeep_last != tkeep_for(payload_size):
        raise MalformedFooter(
            f"tkeep_last {tkeep_last} does not match payload_size {payload_size}"
        )
    return HtspFooter(
        tkeep_last=tkeep_last,
        tlast=bool(packed & 1),
        tuser_last=packed >> 1,
        pause=PauseMask(pause),
        payload_size=payload_size,
    )
