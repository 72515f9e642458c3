"""One SASI authentication session between a reader and a tag.

Messages, in the order they cross the radio channel:

    R -> T  hello
    T -> R  IDS
    R -> T  A || B || C
    T -> R  D

Both parties then move to (IDS_next, K1_bar, K2_bar). All arithmetic is
on 96-bit words; the rotation variant decides how Rot(x, K) is computed.
"""

from dataclasses import dataclass
from typing import NamedTuple

from .nonce import NonceSource
from .word96 import RotationVariant, Word96, add_mod, bitor, rot, sub_mod, xor


class AuthenticationError(Exception):
    """A party rejected the session; no state was changed"""

    def __init__(self, party: str, message: str):
        super().__init__(f"{party} rejected session: {message} mismatch")
        self.party = party
        self.message = message


@dataclass(frozen=True, slots=True)
class TagIdentity:
    id: Word96


@dataclass(frozen=True, slots=True)
class PartyState:
    ids: Word96
    k1: Word96
    k2: Word96


class SessionSecrets(NamedTuple):
    n1: Word96
    n2: Word96
    k1bar: Word96
    k2bar: Word96


class Transcript(NamedTuple):
    """Everything an eavesdropper sees for one session"""

    ids: Word96
    a: Word96
    b: Word96
    c: Word96
    d: Word96
    ids_next: Word96


class Challenge(NamedTuple):
    a: Word96
    b: Word96
    c: Word96
    secrets: SessionSecrets


class TagResponse(NamedTuple):
    d: Word96
    state: PartyState


class SessionResult(NamedTuple):
    ids: Word96
    a: Word96
    b: Word96
    c: Word96
    d: Word96
    reader: PartyState
    tag: PartyState


def session_secrets(
    state: PartyState, n1: Word96, n2: Word96, variant: RotationVariant
) -> SessionSecrets:
    k1bar = rot(xor(state.k1, n2), state.k1, variant)
    k2bar = rot(xor(state.k2, n1), state.k2, variant)
    return SessionSecrets(n1, n2, k1bar, k2bar)


def _message_c(state: PartyState, secrets: SessionSecrets) -> Word96:
    return add_mod(xor(state.k1, secrets.k2bar), xor(state.k2, secrets.k1bar))


def _message_d(state: PartyState, tag: TagIdentity, secrets: SessionSecrets) -> Word96:
    return xor(
        add_mod(secrets.k2bar, tag.id),
        bitor(xor(state.k1, state.k2), secrets.k1bar),
    )


def next_state(
    state: PartyState, tag: TagIdentity, secrets: SessionSecrets
) -> PartyState:
    """Pseudonym and key update shared by both parties"""
    ids_next = xor(add_mod(state.ids, tag.id), xor(secrets.n2, secrets.k1bar))
    return PartyState(ids_next, secrets.k1bar, secrets.k2bar)


def reader_challenge(
    state: PartyState,
    tag: TagIdentity,
    n1: Word96,
    n2: Word96,
    variant: RotationVariant,
) -> Challenge:
    secrets = session_secrets(state, n1, n2, variant)
    a = xor(xor(state.ids, state.k1), n1)
    b = add_mod(bitor(state.ids, state.k2), n2)
    return Challenge(a, b, _message_c(state, secrets), secrets)


def tag_process(
    state: PartyState,
    tag: TagIdentity,
    a: Word96,
    b: Word96,
    c: Word96,
    variant: RotationVariant,
) -> TagResponse:
    """Recover the nonces from A and B, check C, answer with D.

    Raises AuthenticationError when the locally computed C differs.
    """
    n1 = xor(xor(a, state.ids), state.k1)
    n2 = sub_mod(b, bitor(state.ids, state.k2))
    secrets = session_secrets(state, n1, n2, variant)
    if _message_c(state, secrets) != c:
        raise AuthenticationError("tag", "C")
    return TagResponse(_message_d(state, tag, secrets), next_state(state, tag, secrets))


def reader_verify_and_update(
    state: PartyState,
    tag: TagIdentity,
    secrets: SessionSecrets,
    d: Word96,
    variant: RotationVariant,
) -> PartyState:
    # rotations under `variant` are already folded into secrets
    if _message_d(state, tag, secrets) != d:
        raise AuthenticationError("reader", "D")
    return next_state(state, tag, secrets)


def run_session(
    reader: PartyState,
    tag_state: PartyState,
    tag: TagIdentity,
    src: NonceSource,
    variant: RotationVariant,
) -> SessionResult:
    """Full hello/IDS/A||B||C/D exchange with nonces drawn from src"""
    n1 = src.next_word()
    n2 = src.next_word()
    # the reader looks the tag up by the IDS the tag announced
    ids = tag_state.ids
    a, b, c, secrets = reader_challenge(reader, tag, n1, n2, variant)
    d, new_tag = tag_process(tag_state, tag, a, b, c, variant)
    new_reader = reader_verify_and_update(reader, tag, secrets, d, variant)
    return SessionResult(ids, a, b, c, d, new_reader, new_tag)
