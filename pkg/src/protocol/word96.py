from enum import Enum
from typing import NewType

WIDTH = 96
MASK = (1 << WIDTH) - 1
HEX_DIGITS = WIDTH // 4

Word96 = NewType("Word96", int)


class RotationVariant(str, Enum):
    """How the second operand of Rot(A, B) selects the rotation amount"""

    MODULAR = "modular"
    HAMMING = "hamming"


def xor(a: Word96, b: Word96) -> Word96:
    return Word96(a ^ b)


def add_mod(a: Word96, b: Word96) -> Word96:
    return Word96((a + b) & MASK)


def sub_mod(a: Word96, b: Word96) -> Word96:
    return Word96((a - b) & MASK)


def bitor(a: Word96, b: Word96) -> Word96:
    return Word96(a | b)


def hamming_weight(a: Word96) -> int:
    return a.bit_count()


def rotation_amount(b: Word96, variant: RotationVariant) -> int:
    """Number of positions Rot(·, b) shifts by, always in [0, 96)"""
    if variant is RotationVariant.MODULAR:
        return b % WIDTH
    # wt(b) == 96 only for the all-ones word; a full turn is the identity
    return hamming_weight(b) % WIDTH


def rotate_left(a: Word96, r: int) -> Word96:
    r %= WIDTH
    if r == 0:
        return a
    return Word96(((a << r) | (a >> (WIDTH - r))) & MASK)


def rot(a: Word96, b: Word96, variant: RotationVariant) -> Word96:
    """Circular left rotation of a by the amount b selects under variant"""
    return rotate_left(a, rotation_amount(b, variant))


def mod_small(a: int, n: int) -> int:
    """Exact non-negative residue of a modulo a small modulus n"""
    if n < 2:
        raise ValueError(f"Modulus must be at least 2, got {n}")
    return a % n


def to_hex(a: Word96) -> str:
    return format(a, f"0{HEX_DIGITS}x")


def from_hex(text: str) -> Word96:
    """Parse exactly 24 hex digits; anything else is rejected"""
    if len(text) != HEX_DIGITS:
        raise ValueError(f"Expected {HEX_DIGITS} hex digits, got {len(text)}: {text!r}")
    # int() would also accept a sign or underscores
    if not all(c in "0123456789abcdefABCDEF" for c in text):
        raise ValueError(f"Not a hex word: {text!r}")
    return Word96(int(text, 16))
