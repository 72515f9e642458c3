"""Deterministic 96-bit word stream built on splitmix64.

Keys and nonces for every simulation come from here, so a seed fully
determines a run.
"""

from dataclasses import dataclass

from .word96 import MASK, Word96

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 output finaliser"""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Independent seed for trial `index` of a run seeded with `seed`"""
    return mix64((seed ^ mix64((index + 1) * GOLDEN_GAMMA & MASK64)) & MASK64)


@dataclass
class NonceSource:
    seed: int
    counter: int = 0

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise ValueError(f"Seed must be an unsigned 64-bit value, got {self.seed}")

    def next_u64(self) -> int:
        self.counter = (self.counter + 1) & MASK64
        return mix64((self.seed + self.counter * GOLDEN_GAMMA) & MASK64)

    def next_word(self) -> Word96:
        """First output fills bits 95..32, low half of the second fills 31..0"""
        high = self.next_u64()
        low = self.next_u64() & 0xFFFFFFFF
        return Word96(((high << 32) | low) & MASK)

    def next_multiple(self, n: int) -> Word96:
        """Uniform multiple of n below 2^96"""
        count = MASK // n + 1
        return Word96((self.next_word() % count) * n)
