from typing import Iterable, Optional

import numpy as np
from scipy import stats


class ObservationHistogram:
    """Vote counts over the residues 0..N-1"""

    def __init__(self, modulus: int, counts: Optional[np.ndarray] = None):
        if modulus < 2:
            raise ValueError(f"Modulus must be at least 2, got {modulus}")
        self.modulus = modulus
        if counts is None:
            counts = np.zeros(modulus, dtype=np.int64)
        elif len(counts) != modulus:
            raise ValueError(f"Expected {modulus} counters, got {len(counts)}")
        self.counts = np.asarray(counts, dtype=np.int64)

    @classmethod
    def from_residues(
        cls, residues: Iterable[int], modulus: int
    ) -> "ObservationHistogram":
        values = np.fromiter(residues, dtype=np.int64)
        if values.size and (values.min() < 0 or values.max() >= modulus):
            raise ValueError(f"Residue outside [0, {modulus})")
        return cls(modulus, np.bincount(values, minlength=modulus))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def record(self, residue: int):
        self.counts[residue] += 1

    def argmax(self) -> Optional[int]:
        """Most voted residue, lowest on ties; None when nothing was recorded"""
        if self.total == 0:
            return None
        return int(np.argmax(self.counts))

    def ranked(self) -> list[int]:
        # stable sort keeps lower residues first among equal counts
        return [int(r) for r in np.argsort(-self.counts, kind='stable')]

    def margin(self) -> int:
        """Lead of the winning residue over the runner-up"""
        top = np.sort(self.counts)[::-1]
        return int(top[0] - top[1])

    def chi_square(self) -> tuple[float, float]:
        """Statistic and p-value of a test against the uniform distribution"""
        if self.total == 0:
            return 0.0, 1.0
        result = stats.chisquare(self.counts)
        return float(result.statistic), float(result.pvalue)

    def to_rows(self) -> list[dict]:
        return [
            {'residue': residue, 'count': int(count)}
            for residue, count in enumerate(self.counts)
        ]
