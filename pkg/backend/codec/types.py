from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .errors import EncodeError

# -------------------- CONST --------------------
HEADER_BYTES = 64
FOOTER_BYTES = 6
WORD_BYTES = 64
HTSP_VERSION = 0x1
DEFAULT_ETHERTYPE = 0x88B5      # IEEE local experimental
DEFAULT_BURST_SIZE_MAX = 8192
MAX_VC = 16
U128_MASK = (1 << 128) - 1


@dataclass(frozen=True)
class MacAddress:
    octets: bytes = b"\x00" * 6

    def __post_init__(self):
        if len(self.octets) != 6:
            raise EncodeError(f"MAC needs 6 octets, got {len(self.octets)}")

    @classmethod
    def parse(cls, text: str) -> "MacAddress":
        parts = text.replace("-", ":").split(":")
        if len(parts) != 6:
            raise ValueError(f"not a MAC address: {text!r}")
        return cls(bytes(int(p, 16) for p in parts))

    def __str__(self) -> str:
        return ":".join(f"{b:02x}" for b in self.octets)


@dataclass(frozen=True)
class PauseMask:
    """Bit i set means VC i is paused."""

    bits: int = 0

    def __post_init__(self):
        if not 0 <= self.bits <= 0xFFFF:
            raise EncodeError(f"pause mask out of range: {self.bits:#x}")

    def is_paused(self, vc: int) -> bool:
        return bool(self.bits >> vc & 1)


@dataclass(frozen=True)
class HtspHeader:
    dest_mac: MacAddress = field(default_factory=MacAddress)
    src_mac: MacAddress = field(default_factory=MacAddress)
    ether_type: int = DEFAULT_ETHERTYPE
    version: int = HTSP_VERSION
    tid: int = 0
    pause: PauseMask = field(default_factory=PauseMask)
    vc: int = 0
    tuser_first: int = 0
    opcode_en: int = 0
    hdr_xsum: int = field(default=0, compare=False)   # set by decode, ignored by encode
    opcode_data: int = 0
    user_data: int = 0


@dataclass(frozen=True)
class HtspFooter:
    tkeep_last: int
    tlast: bool
    tuser_last: int
    pause: PauseMask
    payload_size: int

    @classmethod
    def for_payload(cls, payload_size: int, *, tlast: bool, tuser_last: int = 0,
                    pause: Optional[PauseMask] = None) -> "HtspFooter":
        return cls(
            tkeep_last=tkeep_for(payload_size),
            tlast=tlast,
            tuser_last=tuser_last,
            pause=pause or PauseMask(),
            payload_size=payload_size,
        )


class FrameKind(enum.Enum):
    HEADER_ONLY = "header_only"
    FULL = "full"


@dataclass(frozen=True)
class WireFrame:
    kind: FrameKind
    header: HtspHeader
    payload: bytes = b""
    footer: Optional[HtspFooter] = None

    @property
    def wire_bytes(self) -> int:
        if self.kind is FrameKind.HEADER_ONLY:
            return HEADER_BYTES
        return HEADER_BYTES + len(self.payload) + FOOTER_BYTES


def tkeep_for(payload_size: int) -> int:
    """Valid bytes in the last 64-byte payload word (1..64)."""
    return (payload_size - 1) % WORD_BYTES + 1
