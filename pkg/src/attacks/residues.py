"""Public-value expressions the passive attacks reduce modulo a small N.

All differences here are exact signed integers reduced with `mod_small`,
never wrapped to 96 bits first: 2^96 is not a multiple of N unless N is a
power of two, so the two readings disagree.
"""

from protocol.sasi import Transcript
from protocol.word96 import mod_small, xor


def detect_condition(t: Transcript, n: int) -> bool:
    """C = (A xor IDS) + (B - IDS) (mod n): the zero-rotation signature"""
    return mod_small(t.c, n) == mod_small(xor(t.a, t.ids) + (t.b - t.ids), n)


def delta_residue(t: Transcript, n: int) -> int:
    """(IDS_next - IDS) mod n, the per-session estimate of ID mod n"""
    return mod_small(t.ids_next - t.ids, n)
