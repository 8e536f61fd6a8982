"""PRBS-31 (x^31 + x^28 + 1) generator and checker.

The register holds the last 31 output bits, newest in bit 0. Bits are
packed into bytes MSB first in generation order.
"""
from __future__ import annotations

from dataclasses import dataclass

PRBS_BITS = 31
PRBS_MASK = (1 << PRBS_BITS) - 1
PRBS_PERIOD = PRBS_MASK              # 2^31 - 1
_TAP_A = 31                          # s[n] = s[n-31] ^ s[n-28]
_TAP_B = 28


@dataclass
class PrbsState:
    lfsr: int
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.lfsr <= PRBS_MASK:
            raise ValueError(f"lfsr must be a nonzero 31-bit value, got {self.lfsr:#x}")

    @classmethod
    def from_seed(cls, seed: int) -> "PrbsState":
        """Map any integer seed onto a valid (nonzero) register."""
        return cls(lfsr=seed % PRBS_MASK + 1, seed=seed)

    def copy(self) -> "PrbsState":
        return PrbsState(self.lfsr, self.seed)


def lfsr_step(lfsr: int) -> tuple:
    """One shift. Returns (output bit, new register)."""
    bit = ((lfsr >> 30) ^ (lfsr >> 27)) & 1
    return bit, ((lfsr << 1) | bit) & PRBS_MASK


def _generate_bits(lfsr: int, nbits: int) -> int:
    # The recurrence also holds at stride 2^k (squaring in GF(2)), so the
    # history grows by 28 * 2^k bits per step once it holds 31 * 2^k.
    hist, length, done, k = lfsr, PRBS_BITS, 0, 0
    while done < nbits:
        while (_TAP_A << (k + 1)) <= length:
            k += 1
        a, b = _TAP_A << k, _TAP_B << k
        m = min(b, nbits - done)
        block = ((hist >> (a - m)) ^ (hist >> (b - m))) & ((1 << m) - 1)
        hist = (hist << m) | block
        length += m
        done += m
    return hist


def prbs_bits(state: PrbsState, nbits: int) -> int:
    """Next `nbits` of the stream as an int, first bit in the MSB."""
    if nbits <= 0:
        return 0
    hist = _generate_bits(state.lfsr, nbits)
    state.lfsr = hist & PRBS_MASK
    return hist & ((1 << nbits) - 1)


def prbs_frame(state: PrbsState, size_bytes: int) -> bytes:
    if size_bytes < 1:
        raise ValueError(f"size_bytes must be >= 1, got {size_bytes}")
    return prbs_bits(state, 8 * size_bytes).to_bytes(size_bytes, "big")


def prbs_skip(state: PrbsState, size_bytes: int) -> None:
    prbs_bits(state, 8 * size_bytes)


def bit_errors(expected: bytes, actual: bytes) -> int:
    if len(expected) != len(actual):
        raise ValueError("bit_errors needs equal-length inputs")
    if not expected:
        return 0
    diff = int.from_bytes(expected, "big") ^ int.from_bytes(actual, "big")
    return diff.bit_count()


def prbs_check(state: PrbsState, data: bytes) -> int:
    """Mismatched bits between `data` and the stream; advances `state`."""
    if not data:
        return 0
    return bit_errors(prbs_frame(state, len(data)), data)


class PrbsChecker:
    """Tracks one VC's stream of fixed-size frames.

    Each frame carries its sequence number (mod 256) in tuserFirst; a jump
    in the sequence means frames were lost, and the checker fast-forwards so
    later frames still line up.
    """

    def __init__(self, seed: int, frame_bytes: int):
        self.state = PrbsState.from_seed(seed)
        self.frame_bytes = frame_bytes
        self.next_tag = 0
        self.frames_skipped = 0

    def expect(self, tag: int) -> bytes:
        lost = (tag - self.next_tag) % 256
        for _ in range(lost):
            prbs_skip(self.state, self.frame_bytes)
        self.frames_skipped += lost
        self.next_tag = (tag + 1) % 256
        return prbs_frame(self.state, self.frame_bytes)
