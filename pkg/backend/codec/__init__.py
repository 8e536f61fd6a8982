from .dissect import DissectReport, dissect_frame
from .errors import (
    BadChecksum,
    BadVersion,
    CodecError,
    EncodeError,
    MalformedFooter,
    PayloadSizeMismatch,
    Truncated,
)
from .footer import decode_footer, encode_footer
from .frame import parse_frame, serialize_frame
from .header import compute_header_checksum, decode_header, encode_header
from .types import (
    DEFAULT_BURST_SIZE_MAX,
    DEFAULT_ETHERTYPE,
    FOOTER_BYTES,
    HEADER_BYTES,
    HTSP_VERSION,
    MAX_VC,
    U128_MASK,
    WORD_BYTES,
    FrameKind,
    HtspFooter,
    HtspHeader,
    MacAddress,
    PauseMask,
    WireFrame,
    tkeep_for,
)

__all__ = [
    "BadChecksum", "BadVersion", "CodecError", "EncodeError", "MalformedFooter",
    "PayloadSizeMismatch", "Truncated",
    "compute_header_checksum", "encode_header", "decode_header",
    "encode_footer", "decode_footer", "serialize_frame", "parse_frame",
    "dissect_frame", "DissectReport",
    "DEFAULT_BURST_SIZE_MAX", "DEFAULT_ETHERTYPE", "FOOTER_BYTES", "HEADER_BYTES",
    "HTSP_VERSION", "MAX_VC", "U128_MASK", "WORD_BYTES",
    "FrameKind", "HtspFooter", "HtspHeader", "MacAddress", "PauseMask", "WireFrame",
    "tkeep_for",
]
