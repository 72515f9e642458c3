from itertools import islice
from typing import Iterable, Optional

from protocol.sasi import Transcript
from protocol.word96 import RotationVariant

from .fig2 import GuessReport, vote
from .residues import delta_residue

MAX_BITS = 8


def distribution_attack(
    transcripts: Iterable[Transcript],
    k: int,
    budget: int,
    variant: Optional[RotationVariant] = None,
) -> GuessReport:
    """Unfiltered vote of (IDS_next - IDS) mod 2^k over every session.

    The most frequent delta is the guess for the k low bits of ID. On
    simulated SASI chains of 2^10 sessions the skew is weak: the guess is
    right in a minority of runs and the histogram passes for uniform.
    """
    if not 1 <= k <= MAX_BITS:
        raise ValueError(f"k must be in [1, {MAX_BITS}], got {k}")
    if budget < 0:
        raise ValueError(f"Budget must be non-negative, got {budget}")

    modulus = 1 << k
    residues = [delta_residue(t, modulus) for t in islice(transcripts, budget)]
    return vote(residues, modulus, len(residues), variant)
