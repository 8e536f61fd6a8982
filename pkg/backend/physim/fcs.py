import zlib

FCS_BYTES = 4


def fcs32(data: bytes) -> int:
    """Ethernet FCS: reflected CRC-32, poly 0x04C11DB7, init and xorout all ones."""
    return zlib.crc32(data) & 0xFFFFFFFF


def append_fcs(data: bytes) -> bytes:
    # transmitted least significant byte first, as on the wire
    return bytes(data) + fcs32(data).to_bytes(FCS_BYTES, "little")


def check_and_strip(data: bytes):
    """Return (frame_without_fcs, fcs_error)."""
    if len(data) < FCS_BYTES:
        return b"", True
    body, trailer = data[:-FCS_BYTES], data[-FCS_BYTES:]
    return body, fcs32(body) != int.from_bytes(trailer, "little")
