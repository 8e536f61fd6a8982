"""Golden wire-format fixtures: one frame per `fixtures/<name>.hex` file."""
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, List

from .frame import serialize_frame
from .types import FrameKind, HtspFooter, HtspHeader, MacAddress, PauseMask, WireFrame

log = logging.getLogger(__name__)

FIXTURE_DIR = Path(__file__).resolve().parents[2] / "fixtures"
DEST = MacAddress.parse("02:00:00:00:00:01")
SRC = MacAddress.parse("02:00:00:00:00:02")

_HEX_LINE = 16
_comment = re.compile(r"#.*$", re.MULTILINE)


def _header(**kw) -> HtspHeader:
    return HtspHeader(dest_mac=DEST, src_mac=SRC, **kw)


def canonical_fixtures() -> Dict[str, WireFrame]:
    return {
        "header_only": WireFrame(FrameKind.HEADER_ONLY, _header()),
        "header_opcode": WireFrame(
            FrameKind.HEADER_ONLY,
            _header(
                tid=0x05, pause=PauseMask(0x0001), vc=0x03, tuser_first=0x01, opcode_en=1,
                opcode_data=int.from_bytes(bytes(range(0x00, 0x10)), "little"),
                user_data=int.from_bytes(bytes(range(0x10, 0x20)), "little"),
            ),
        ),
        "full_64": WireFrame(
            FrameKind.FULL,
            _header(tid=0x01, vc=0x02, tuser_first=0x01),
            bytes(range(64)),
            HtspFooter.for_payload(64, tlast=True),
        ),
        "full_100": WireFrame(
            FrameKind.FULL,
            _header(tid=0x02, pause=PauseMask(0x0003), vc=0x01),
            bytes(range(100)),
            HtspFooter.for_payload(100, tlast=True, tuser_last=0x05, pause=PauseMask(0x0003)),
        ),
    }


def read_hex(path: Path) -> bytes:
    text = _comment.sub("", Path(path).read_text(encoding="utf-8"))
    return bytes.fromhex("".join(text.split()))


def to_hex(data: bytes) -> str:
    lines = [
        " ".join(f"{b:02x}" for b in data[i:i + _HEX_LINE])
        for i in range(0, len(data), _HEX_LINE)
    ]
    return "\n".join(lines) + "\n"


def write_hex(path: Path, data: bytes) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(to_hex(data), encoding="utf-8")


def generate_fixtures(directory: Path = FIXTURE_DIR) -> List[Path]:
    written = []
    for name, frame in canonical_fixtures().items():
        path = Path(directory) / f"{name}.hex"
        write_hex(path, serialize_frame(frame))
        log.info("fixture written: %s", path)
        written.append(path)
    return written


def byte_diff(expected: bytes, actual: bytes, limit: int = 16) -> List[str]:
    out = []
    if len(expected) != len(actual):
        out.append(f"length {len(actual)} != expected {len(expected)}")
    for i, (e, a) in enumerate(zip(expected, actual)):
        if e != a:
            out.append(f"byte {i}: {a:02x} != expected {e:02x}")
            if len(out) >= limit:
                out.append("...")
                break
    return out


def verify_fixtures(directory: Path = FIXTURE_DIR) -> Dict[str, List[str]]:
    """Re-encode every canonical frame and compare with the stored file.

    Returns name -> list of differences (empty list means the fixture matches).
    """
    results: Dict[str, List[str]] = {}
    for name, frame in canonical_fixtures().items():
        path = Path(directory) / f"{name}.hex"
        if not path.exists():
            results[name] = [f"missing file {path}"]
            continue
        results[name] = byte_diff(serialize_frame(frame), read_hex(path))
    return results
