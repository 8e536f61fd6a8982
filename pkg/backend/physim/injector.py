"""Residual post-FEC bit errors.

Every frame draws from its own Philox stream keyed by (seed, frame sequence),
so the corruption pattern of frame N does not depend on how many random
numbers earlier frames consumed.
"""
from __future__ import annotations

from typing import List, Tuple

import numpy as np


class BitErrorInjector:
    def __init__(self, ber: float, seed: int = 0):
        if not 0.0 <= ber < 1.0:
            raise ValueError(f"ber must be in [0, 1), got {ber}")
        self.ber = ber
        self.seed = seed
        self.frames = 0
        self.corrupted_frames = 0
        self.flipped_bits = 0

    def _rng(self, frame_seq: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([self.seed, frame_seq])))

    def flip_positions(self, nbits: int, frame_seq: int) -> np.ndarray:
        if self.ber == 0.0 or nbits == 0:
            return np.empty(0, dtype=np.int64)
        rng = self._rng(frame_seq)
        k = int(rng.binomial(nbits, self.ber))
        if k == 0:
            return np.empty(0, dtype=np.int64)
        return np.sort(rng.choice(nbits, size=k, replace=False))

    def corrupt(self, data: bytes, frame_seq: int) -> Tuple[bytes, List[int]]:
        """Flip each bit independently with probability `ber`."""
        self.frames += 1
        positions = self.flip_positions(len(data) * 8, frame_seq)
        if positions.size == 0:
            return data, []
        buf = np.frombuffer(data, dtype=np.uint8).copy()
        np.bitwise_xor.at(buf, positions >> 3, (1 << (positions & 7)).astype(np.uint8))
        self.corrupted_frames += 1
        self.flipped_bits += int(positions.size)
        return buf.tobytes(), positions.tolist()
