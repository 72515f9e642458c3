"""How often the residue relations hold jointly, by modulus family.

Given K1 = K2 = 0 (mod N), the detection relation and
ID = IDS_next - IDS (mod N) hold together with a probability that only
depends on the shape of N:

    N         2^t    3*2^t    4t+10    2t+5
    P         1.00   0.33     2/N      1/N
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from generators.session_generator import Precondition, forced_session
from protocol.nonce import NonceSource, derive_seed
from protocol.word96 import mod_small

from .residues import delta_residue, detect_condition

logger = logging.getLogger(__name__)


class ModulusKind(str, Enum):
    POWER_OF_TWO = "2^t"
    THREE_TIMES_POWER_OF_TWO = "3*2^t"
    FOUR_T_PLUS_TEN = "4t+10"
    TWO_T_PLUS_FIVE = "2t+5"
    UNCOVERED = "uncovered"


@dataclass(frozen=True)
class ModulusClass:
    kind: ModulusKind
    t: Optional[int] = None

    def __str__(self):
        if self.t is None:
            return self.kind.value
        return f"{self.kind.value} (t={self.t})"


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def classify_modulus(n: int) -> ModulusClass:
    """First matching family, in the order the table lists them"""
    if n < 2:
        raise ValueError(f"Modulus must be at least 2, got {n}")
    if _is_power_of_two(n):
        return ModulusClass(ModulusKind.POWER_OF_TWO, n.bit_length() - 1)
    if n % 3 == 0 and _is_power_of_two(n // 3):
        t = (n // 3).bit_length() - 1
        return ModulusClass(ModulusKind.THREE_TIMES_POWER_OF_TWO, t)
    if n % 4 == 2 and n >= 10:
        return ModulusClass(ModulusKind.FOUR_T_PLUS_TEN, (n - 10) // 4)
    if n % 2 == 1 and n >= 5:
        return ModulusClass(ModulusKind.TWO_T_PLUS_FIVE, (n - 5) // 2)
    return ModulusClass(ModulusKind.UNCOVERED)


def theoretical_probability(c: ModulusClass, n: int) -> Optional[float]:
    """Tabulated probability, or None where the table has no entry"""
    if c.kind is ModulusKind.POWER_OF_TWO:
        return 1.0
    if c.kind is ModulusKind.THREE_TIMES_POWER_OF_TWO:
        return 0.33
    if c.kind is ModulusKind.FOUR_T_PLUS_TEN:
        return 2 / n
    if c.kind is ModulusKind.TWO_T_PLUS_FIVE:
        return 1 / n
    return None


def count_joint_hits(
    n: int, seed: int, start: int, stop: int, precondition: Precondition
) -> int:
    """Joint-event count over trials start..stop-1, each with its own seed"""
    hits = 0
    for trial in range(start, stop):
        src = NonceSource(derive_seed(seed, trial))
        tag, session = forced_session(n, src, precondition)
        transcript = session.transcript
        if not detect_condition(transcript, n):
            continue
        if delta_residue(transcript, n) == mod_small(tag.id, n):
            hits += 1
    return hits


def estimate_joint_probability(
    n: int,
    trials: int,
    seed: int,
    precondition: Precondition = Precondition.DEGENERATE,
    workers: int = 1,
) -> float:
    """Fraction of forced-precondition sessions where both relations hold.

    Trials are seeded individually, so splitting them across `workers`
    processes gives exactly the sequential result.
    """
    if n < 2:
        raise ValueError(f"Modulus must be at least 2, got {n}")
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}")

    if workers <= 1:
        hits = count_joint_hits(n, seed, 0, trials, precondition)
    else:
        chunk = math.ceil(trials / workers)
        bounds = [
            (start, min(start + chunk, trials)) for start in range(0, trials, chunk)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(count_joint_hits, n, seed, start, stop, precondition)
                for start, stop in bounds
            ]
            hits = sum(future.result() for future in futures)

    logger.debug(f"N={n}: {hits}/{trials} joint hits ({precondition.value})")
    return hits / trials


def binomial_standard_error(p: float, trials: int) -> float:
    return math.sqrt(p * (1 - p) / trials)


@dataclass
class Table1Row:
    modulus: int
    modulus_class: ModulusClass
    theoretical: Optional[float]
    empirical: float
    trials: int
    standard_error: float

    @property
    def within_three_sigma(self) -> Optional[bool]:
        if self.theoretical is None:
            return None
        sigma = binomial_standard_error(self.theoretical, self.trials)
        # a tabulated 1.00 admits no failures at all
        return abs(self.empirical - self.theoretical) <= 3 * sigma

    def to_dict(self) -> dict:
        return {
            'modulus': self.modulus,
            'class': str(self.modulus_class),
            'theoretical': (
                'n/a' if self.theoretical is None else round(self.theoretical, 6)
            ),
            'empirical': round(self.empirical, 6),
            'trials': self.trials,
            'std_error': round(self.standard_error, 6),
            'within_3_sigma': (
                'n/a' if self.within_three_sigma is None else self.within_three_sigma
            ),
        }


def table1_rows(
    moduli: list[int],
    trials: int,
    seed: int,
    precondition: Precondition = Precondition.DEGENERATE,
    workers: int = 1,
) -> list[Table1Row]:
    """One row per modulus, in ascending modulus order"""
    rows = []
    for n in sorted(set(moduli)):
        modulus_class = classify_modulus(n)
        empirical = estimate_joint_probability(n, trials, seed, precondition, workers)
        rows.append(
            Table1Row(
                modulus=n,
                modulus_class=modulus_class,
                theoretical=theoretical_probability(modulus_class, n),
                empirical=empirical,
                trials=trials,
                standard_error=binomial_standard_error(empirical, trials),
            )
        )
        logger.info(f"N={n} [{modulus_class}]: empirical {empirical:.4f}")
    return rows
