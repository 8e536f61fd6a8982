from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from backend.codec import PauseMask


class DropReason(enum.Enum):
    BAD_VERSION = "bad_version"
    BAD_CHECKSUM = "bad_checksum"
    PAYLOAD_SIZE_MISMATCH = "payload_size_mismatch"
    MALFORMED_FOOTER = "malformed_footer"
    TRUNCATED = "truncated"
    FCS_ERROR = "fcs_error"
    UNKNOWN_VC = "unknown_vc"

    @classmethod
    def from_reason(cls, reason: str) -> "DropReason":
        return cls(reason)


class LinkStatus(enum.Enum):
    DOWN = "down"
    UP = "up"


@dataclass
class LinkState:
    state: LinkStatus = LinkStatus.DOWN
    last_rx_header_time: Optional[int] = None
    remote_pause: PauseMask = field(default_factory=PauseMask)
    remote_user_data: int = 0

    @property
    def up(self) -> bool:
        return self.state is LinkStatus.UP


class RxEvent:
    pass


@dataclass(frozen=True)
class SegmentDelivered(RxEvent):
    vc: int
    size: int
    sof: bool
    eof: bool
    rx_time: int


@dataclass(frozen=True)
class OpCodeEvent(RxEvent):
    data: int
    rx_time: int


@dataclass(frozen=True)
class LinkUp(RxEvent):
    rx_time: int


@dataclass(frozen=True)
class LinkDown(RxEvent):
    rx_time: int


@dataclass(frozen=True)
class PauseChanged(RxEvent):
    old: PauseMask
    new: PauseMask
    rx_time: int


@dataclass(frozen=True)
class Drop(RxEvent):
    reason: DropReason
    rx_time: int
    vc: Optional[int] = None
