"""
HTSP header (64 bytes)

 byte   field
 ----   -----------------------------------------------
 0:5    DestMac        network order
 6:11   SrcMac         network order
 12:13  EtherType      network order
 14     Version        always 0x1
 15     TID            8-bit transaction counter
 16:17  Pause          little endian, bit i = VC i
 18     VC             virtual channel index (0..15)
 19     TUserFirst     first 8 bits of AXIS TUSER
 20     OpCodeEn       0 or 1
 21:29  Reserved       zeros
 30:31  HdrXsum        little endian ones'-complement checksum
 32:47  OpCodeData     128-bit little endian
 48:63  UserData       128-bit little endian
"""
from __future__ import annotations

import struct

from .errors import BadChecksum, BadVersion, EncodeError, Truncated
from .types import (
    HEADER_BYTES,
    HTSP_VERSION,
    MAX_VC,
    U128_MASK,
    HtspHeader,
    MacAddress,
    PauseMask,
)

XSUM_OFFSET = 30
RESERVED = slice(21, 30)

# fixed part up to (not including) the reserved bytes
_FIXED = struct.Struct("<6s6sHBBHBBB")
_XSUM = struct.Struct("<H")


def compute_header_checksum(block: bytes) -> int:
    """Ones'-complement sum of little-endian 16-bit words, complemented.

    The checksum field (bytes 30-31) must already be zero.
    """
    if len(block) != HEADER_BYTES:
        raise Truncated(f"header checksum needs {HEADER_BYTES} bytes, got {len(block)}")
    total = sum(v for (v,) in struct.iter_unpack("<H", block))
    while total >> 16:
        total = (total & 0xFFFF) + (total >> 16)
    return ~total & 0xFFFF


def encode_header(h: HtspHeader) -> bytes:
    if not 0 <= h.vc < MAX_VC:
        raise EncodeError(f"vc index {h.vc} does not fit (max {MAX_VC - 1})")
    if h.version != HTSP_VERSION:
        raise EncodeError(f"version must be {HTSP_VERSION:#x}, got {h.version:#x}")
    if h.opcode_en not in (0, 1):
        raise EncodeError(f"opcode_en must be 0 or 1, got {h.opcode_en}")
    for name, value, width in (("tid", h.tid, 8), ("tuser_first", h.tuser_first, 8),
                               ("ether_type", h.ether_type, 16)):
        if not 0 <= value < (1 << width):
            raise EncodeError(f"{name}={value} does not fit in {width} bits")
    for name, value in (("opcode_data", h.opcode_data), ("user_data", h.user_data)):
        if not 0 <= value <= U128_MASK:
            raise EncodeError(f"{name} does not fit in 128 bits")

    buf = bytearray(HEADER_BYTES)
    _FIXED.pack_into(
        buf, 0,
        h.dest_mac.octets, h.src_mac.octets,
        0, h.version, h.tid, h.pause.bits, h.vc, h.tuser_first, h.opcode_en,
    )
    buf[12:14] = h.ether_type.to_bytes(2, "big")
    buf[32:48] = h.opcode_data.to_bytes(16, "little")
    buf[48:64] = h.user_data.to_bytes(16, "little")
    _XSUM.pack_into(buf, XSUM_OFFSET, compute_header_checksum(bytes(buf)))
    return bytes(buf)


def stored_checksum(block: bytes) -> int:
    return _XSUM.unpack_from(block, XSUM_OFFSET)[0]


def checksum_ok(block: bytes) -> bool:
    zeroed = block[:XSUM_OFFSET] + b"\x00\x00" + block[XSUM_OFFSET + 2:]
    return compute_header_checksum(zeroed) == stored_checksum(block)


def decode_header(block: bytes) -> HtspHeader:
    if len(block) != HEADER_BYTES:
        raise Truncated(f"header needs {HEADER_BYTES} bytes, got {len(block)}")
    if not checksum_ok(block):
        raise BadChecksum(
            f"stored {stored_checksum(block):#06x} != computed "
            f"{compute_header_checksum(block[:XSUM_OFFSET] + bytes(2) + block[XSUM_OFFSET + 2:]):#06x}"
        )
    dest, src, _, version, tid, pause, vc, tuser_first, opcode_en = _FIXED.unpack_from(block, 0)
    if version != HTSP_VERSION:
        raise BadVersion(f"version {version:#x} (expected {HTSP_VERSION:#x})")
    return HtspHeader(
        dest_mac=MacAddress(dest),
        src_mac=MacAddress(src),
        ether_type=int.from_bytes(block[12:14], "big"),
        version=version,
        tid=tid,
        pause=PauseMask(pause),
        vc=vc,
        tuser_first=tuser_first,
        opcode_en=opcode_en,
        hdr_xsum=stored_checksum(block),
        opcode_data=int.from_bytes(block[32:48], "little"),
        user_data=int.from_bytes(block[48:64], "little"),
    )
