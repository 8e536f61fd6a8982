"""Field-by-field dump of a raw HTSP frame, tolerant of broken input."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .header import XSUM_OFFSET, compute_header_checksum, stored_checksum
from .types import DEFAULT_BURST_SIZE_MAX, FOOTER_BYTES, HEADER_BYTES, HTSP_VERSION, tkeep_for


@dataclass
class FieldRow:
    offset: str
    name: str
    raw: str
    value: str
    note: str = ""

    def as_dict(self) -> dict:
        return {"offset": self.offset, "name": self.name, "raw": self.raw,
                "value": self.value, "note": self.note}


@dataclass
class DissectReport:
    kind: str
    length: int
    rows: List[FieldRow] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "length": self.length,
            "ok": self.ok,
            "fields": [r.as_dict() for r in self.rows],
            "diagnostics": list(self.diagnostics),
        }

    def render(self) -> str:
        lines = [f"frame: {self.kind}, {self.length} bytes"]
        for r in self.rows:
            note = f"  <-- {r.note}" if r.note else ""
            lines.append(f"  [{r.offset:>9}] {r.name:<12} {r.raw:<34} {r.value}{note}")
        for d in self.diagnostics:
            lines.append(f"[ERR] {d}")
        if self.ok:
            lines.append("[OK] frame is valid")
        return "\n".join(lines)


def _mac(b: bytes) -> str:
    return ":".join(f"{x:02x}" for x in b)


def _le(b: bytes) -> str:
    return f"{int.from_bytes(b, 'little'):#x}"


def _u8(b: bytes) -> str:
    return f"{b[0]:#04x}"


# (start, end_inclusive, name, formatter)
_HEADER_FIELDS: List[tuple] = [
    (0, 5, "DestMac", _mac),
    (6, 11, "SrcMac", _mac),
    (12, 13, "EtherType", lambda b: f"{int.from_bytes(b, 'big'):#06x}"),
    (14, 14, "Version", _u8),
    (15, 15, "TID", lambda b: str(b[0])),
    (16, 17, "Pause", lambda b: f"{int.from_bytes(b, 'little'):#06x}"),
    (18, 18, "VC", lambda b: str(b[0])),
    (19, 19, "TUserFirst", _u8),
    (20, 20, "OpCodeEn", lambda b: str(b[0])),
    (21, 29, "Reserved", lambda b: "zero" if not any(b) else "NONZERO"),
    (30, 31, "HdrXsum", lambda b: f"{int.from_bytes(b, 'little'):#06x}"),
    (32, 47, "OpCodeData", _le),
    (48, 63, "UserData", _le),
]

_FOOTER_FIELDS: List[tuple] = [
    (0, 0, "TKeepLast", lambda b: str(b[0])),
    (1, 1, "TLast/TUSER", lambda b: f"tlast={b[0] & 1} tuser={b[0] >> 1:#04x}"),
    (2, 3, "Pause", lambda b: f"{int.from_bytes(b, 'little'):#06x}"),
    (4, 5, "PayloadSize", lambda b: str(int.from_bytes(b, "little"))),
]


def _rows(data: bytes, base: int, fields: List[tuple], report: DissectReport,
          prefix: str = "") -> None:
    for start, end, name, fmt in fields:
        offset = f"{base + start}" if start == end else f"{base + start}:{base + end}"
        chunk = data[start:end + 1]
        if len(chunk) < end - start + 1:
            report.rows.append(FieldRow(offset, prefix + name, chunk.hex(), "-", "missing"))
            report.diagnostics.append(f"Truncated: {prefix}{name} (bytes {offset}) missing")
            continue
        report.rows.append(FieldRow(offset, prefix + name, chunk.hex(), fmt(chunk)))


def _note(report: DissectReport, name: str, note: str) -> None:
    for r in report.rows:
        if r.name == name:
            r.note = note


def dissect_frame(data: bytes, burst_size_max: int = DEFAULT_BURST_SIZE_MAX,
                  num_vc: Optional[int] = None) -> DissectReport:
    n = len(data)
    if n == HEADER_BYTES:
        kind = "header_only"
    elif n > HEADER_BYTES + FOOTER_BYTES:
        kind = "full"
    else:
        kind = "truncated"
    report = DissectReport(kind=kind, length=n)

    _rows(data[:HEADER_BYTES], 0, _HEADER_FIELDS, report)
    if n < HEADER_BYTES:
        return report

    header = bytes(data[:HEADER_BYTES])
    zeroed = header[:XSUM_OFFSET] + b"\x00\x00" + header[XSUM_OFFSET + 2:]
    want = compute_header_checksum(zeroed)
    got = stored_checksum(header)
    if want != got:
        _note(report, "HdrXsum", f"expected {want:#06x}")
        report.diagnostics.append(f"BadChecksum: stored {got:#06x}, computed {want:#06x}")
    else:
        _note(report, "HdrXsum", "checksum OK")
    if header[14] != HTSP_VERSION:
        _note(report, "Version", "expected 0x01")
        report.diagnostics.append(f"BadVersion: {header[14]:#04x}")
    if any(header[21:30]):
        report.diagnostics.append("Reserved bytes 21:29 are not zero")
    if header[20] not in (0, 1):
        report.diagnostics.append(f"OpCodeEn must be 0 or 1, got {header[20]}")
    limit = num_vc if num_vc is not None else 16
    if header[18] >= limit:
        report.diagnostics.append(f"UnknownVc: {header[18]} (limit {limit})")

    if kind == "truncated":
        report.diagnostics.append(
            f"Truncated: {n} bytes is neither header-only (64) nor header+payload+footer (>= 71)"
        )
        return report
    if kind == "header_only":
        return report

    payload_len = n - HEADER_BYTES - FOOTER_BYTES
    footer = bytes(data[-FOOTER_BYTES:])
    report.rows.append(FieldRow(f"{HEADER_BYTES}:{n - FOOTER_BYTES - 1}", "Payload",
                                bytes(data[HEADER_BYTES:HEADER_BYTES + 8]).hex() + "...",
                                f"{payload_len} bytes"))
    _rows(footer, n - FOOTER_BYTES, _FOOTER_FIELDS, report, prefix="Footer.")
    size = int.from_bytes(footer[4:6], "little")
    if size != payload_len:
        _note(report, "Footer.PayloadSize", f"frame carries {payload_len}")
        report.diagnostics.append(
            f"PayloadSizeMismatch: footer says {size}, frame carries {payload_len}"
        )
    if size == 0 or size > burst_size_max:
        report.diagnostics.append(f"MalformedFooter: payload size {size} outside 1..{burst_size_max}")
    elif footer[0] != tkeep_for(size):
        _note(report, "Footer.TKeepLast", f"expected {tkeep_for(size)}")
        report.diagnostics.append(
            f"MalformedFooter: tkeep_last {footer[0]} does not match payload size {size}"
        )
    return report
