"""Residue-vote attack on SASI with modular rotations.

Sessions whose rotations were the identity leak ID through
IDS_next = (IDS + ID) xor K1. They cannot be seen directly, but they
satisfy C = (A xor IDS) + (B - IDS) (mod N), which only involves public
values. Every session passing that check votes for (IDS_next - IDS) mod N
and the most voted residue is the guess for ID mod N.
"""

import logging
from dataclasses import dataclass
from itertools import islice
from typing import Iterable, Optional

from generators.session_generator import AnnotatedSession, is_degenerate
from protocol.sasi import Transcript
from protocol.word96 import RotationVariant
from utils.config import AttackConfig

from .histogram import ObservationHistogram
from .residues import delta_residue, detect_condition

logger = logging.getLogger(__name__)


@dataclass
class GuessReport:
    guess: Optional[int]
    histogram: ObservationHistogram
    sessions_consumed: int
    variant: Optional[RotationVariant] = None

    @property
    def modulus(self) -> int:
        return self.histogram.modulus

    @property
    def useful_sessions(self) -> int:
        return self.histogram.total

    @property
    def observed(self) -> bool:
        """False for the no-observation outcome, where there is no guess"""
        return self.guess is not None

    @property
    def useful_rate(self) -> float:
        if self.sessions_consumed == 0:
            return 0.0
        return self.useful_sessions / self.sessions_consumed

    def summary(self) -> dict:
        return {
            'guess': self.guess,
            'useful_sessions': self.useful_sessions,
            'sessions_consumed': self.sessions_consumed,
            'modulus': self.modulus,
            'variant': self.variant.value if self.variant else None,
        }


def vote(
    residues: list[int], modulus: int, consumed: int, variant: Optional[RotationVariant]
) -> GuessReport:
    histogram = ObservationHistogram.from_residues(residues, modulus)
    report = GuessReport(histogram.argmax(), histogram, consumed, variant)
    if not report.observed:
        logger.warning(f"No useful session among {consumed} observed")
    else:
        logger.info(
            f"Guess {report.guess} mod {modulus} from {report.useful_sessions} "
            f"of {consumed} sessions"
        )
    return report


def fig2_attack(transcripts: Iterable[Transcript], cfg: AttackConfig) -> GuessReport:
    n = cfg.modulus
    residues = []
    consumed = 0
    for transcript in islice(transcripts, cfg.session_budget):
        consumed += 1
        if detect_condition(transcript, n):
            residues.append(delta_residue(transcript, n))
    return vote(residues, n, consumed, cfg.variant)


def oracle_filtered_attack(
    cfg: AttackConfig, debug_secrets: Iterable[AnnotatedSession]
) -> GuessReport:
    """Vote only with sessions whose keys really were degenerate.

    Needs the simulator's view of K1 and K2, so it measures how often the
    delta estimate itself is right, apart from detection false positives.
    """
    n = cfg.modulus
    residues = []
    consumed = 0
    for state, transcript in islice(debug_secrets, cfg.session_budget):
        consumed += 1
        if is_degenerate(state, n, cfg.variant):
            residues.append(delta_residue(transcript, n))
    return vote(residues, n, consumed, cfg.variant)
