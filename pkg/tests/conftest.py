import pytest

from backend.codec import FrameKind, HtspFooter, HtspHeader, MacAddress, WireFrame
from backend.core import EngineConfig
from backend.harness import BenchConfig
from backend.physim import LinkConfig

DEST = MacAddress.parse("02:00:00:00:00:02")
SRC = MacAddress.parse("02:00:00:00:00:01")


def full_frame(payload: bytes, *, vc=0, tid=0, tlast=True, tuser_first=0, tuser_last=0, **hdr) -> WireFrame:
    header = HtspHeader(dest_mac=DEST, src_mac=SRC, tid=tid, vc=vc, tuser_first=tuser_first, **hdr)
    footer = HtspFooter.for_payload(len(payload), tlast=tlast, tuser_last=tuser_last, pause=header.pause)
    return WireFrame(FrameKind.FULL, header, payload, footer)


def header_only(**hdr) -> WireFrame:
    return WireFrame(FrameKind.HEADER_ONLY, HtspHeader(dest_mac=DEST, src_mac=SRC, **hdr))


@pytest.fixture
def link():
    return LinkConfig()


@pytest.fixture
def engine():
    return EngineConfig()


@pytest.fixture
def quick_bench():
    """Small windows: periodic steady state makes a few hundred frames exact."""
    return BenchConfig(min_frames=50, max_frames=200, duration=1e-5,
                       stress_frames=300, error_frames=2000)
