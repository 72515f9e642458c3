"""Compare attack guesses against the residues kept in a secrets file.

The attack path never sees these values; scoring is a separate step.
"""

from typing import Optional

from protocol.word96 import mod_small

SECRET_MODULI = (16, 32, 96, 256)


class ScoringError(ValueError):
    pass


def id_residues(tag_id: int) -> dict[str, int]:
    return {str(m): mod_small(tag_id, m) for m in SECRET_MODULI}


def true_residue(residues: dict[str, int], modulus: int) -> int:
    """ID mod `modulus`, derived from any stored residue whose modulus it divides"""
    for stored in SECRET_MODULI:
        if stored % modulus == 0 and str(stored) in residues:
            return residues[str(stored)] % modulus
    raise ScoringError(f"ID mod {modulus} cannot be derived from the secrets file")


def matching_low_bits(guess: int, truth: int, limit: int) -> int:
    """How many least significant bits agree, at most `limit`"""
    diff = guess ^ truth
    if diff == 0:
        return limit
    return min((diff & -diff).bit_length() - 1, limit)


def is_power_of_two_or_zero(value: int) -> bool:
    return value & (value - 1) == 0


def score_guess(summary: dict, residues: dict[str, int]) -> dict:
    modulus = summary['modulus']
    guess: Optional[int] = summary.get('guess')
    if guess is None:
        raise ScoringError("Report holds no guess (no useful session was observed)")

    truth = true_residue(residues, modulus)
    bits = modulus.bit_length() - 1
    return {
        'modulus': modulus,
        'guess': guess,
        'truth': truth,
        'exact': guess == truth,
        'low_bits_correct': matching_low_bits(guess, truth, bits),
        'difference_power_of_two': is_power_of_two_or_zero(abs(guess - truth)),
    }
