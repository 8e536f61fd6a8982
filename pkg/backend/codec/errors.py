class CodecError(ValueError):
    """Base class for wire-format failures. `reason` doubles as a stats key."""

    reason = "codec_error"


class EncodeError(CodecError):
    reason = "encode_error"


class BadVersion(CodecError):
    reason = "bad_version"


class BadChecksum(CodecError):
    reason = "bad_checksum"


class MalformedFooter(CodecError):
    reason = "malformed_footer"


class PayloadSizeMismatch(CodecError):
    reason = "payload_size_mismatch"


class Truncated(CodecError):
    reason = "truncated"
