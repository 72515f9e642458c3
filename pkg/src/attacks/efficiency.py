import logging
from dataclasses import dataclass, field
from typing import Optional

from generators.session_generator import SessionGenerator
from protocol.word96 import mod_small
from utils.config import AttackConfig

from .histogram import ObservationHistogram
from .residues import delta_residue, detect_condition
from .scoring import matching_low_bits

logger = logging.getLogger(__name__)


@dataclass
class Checkpoint:
    sessions: int
    guess: Optional[int]
    useful_sessions: int
    low_bits_correct: int
    exact: bool


@dataclass
class EfficiencyResult:
    modulus: int
    seed: int
    checkpoints: list[Checkpoint] = field(default_factory=list)

    @property
    def sessions_to_success(self) -> Optional[int]:
        """First checkpoint from which the guess stays equal to ID mod N"""
        first = None
        for checkpoint in self.checkpoints:
            if checkpoint.exact:
                first = first or checkpoint.sessions
            else:
                first = None
        return first

    def to_rows(self) -> list[dict]:
        return [
            {
                'seed': self.seed,
                'modulus': self.modulus,
                'sessions': c.sessions,
                'guess': c.guess,
                'useful_sessions': c.useful_sessions,
                'low_bits_correct': c.low_bits_correct,
                'exact': c.exact,
            }
            for c in self.checkpoints
        ]


def checkpoint_schedule(first: int, budget: int) -> list[int]:
    """Powers of two from `first`, closed by the budget itself"""
    points = []
    size = first
    while size < budget:
        points.append(size)
        size *= 2
    points.append(budget)
    return points


def measure_sessions_to_success(
    cfg: AttackConfig, first_checkpoint: int = 2**10
) -> EfficiencyResult:
    """Run the residue-vote attack on one seeded tag and snapshot its guess.

    The guess is checked after every power-of-two number of sessions, which
    shows how many sessions the low bits of ID actually take.
    """
    n = cfg.modulus
    generator = SessionGenerator.random(cfg.seed, cfg.variant)
    truth = mod_small(generator.tag.id, n)
    bits = n.bit_length() - 1

    histogram = ObservationHistogram(n)
    result = EfficiencyResult(modulus=n, seed=cfg.seed)
    schedule = iter(checkpoint_schedule(first_checkpoint, cfg.session_budget))
    next_point = next(schedule)

    for seen, transcript in enumerate(generator.transcripts(cfg.session_budget), 1):
        if detect_condition(transcript, n):
            histogram.record(delta_residue(transcript, n))
        if seen == next_point:
            guess = histogram.argmax()
            result.checkpoints.append(
                Checkpoint(
                    sessions=seen,
                    guess=guess,
                    useful_sessions=histogram.total,
                    low_bits_correct=(
                        0 if guess is None else matching_low_bits(guess, truth, bits)
                    ),
                    exact=guess == truth,
                )
            )
            next_point = next(schedule, None)

    logger.info(
        f"seed {cfg.seed}: N={n} reached after {result.sessions_to_success} sessions"
    )
    return result
