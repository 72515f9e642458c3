"""Seeded chains of honest SASI sessions, as an eavesdropper would record them.

A fresh tag takes IDS, ID, K1 and K2 (in that order) from one
NonceSource; the same source then supplies n1 and n2 for every session.
"""

import math
from enum import Enum
from itertools import count as counter
from typing import Iterator, NamedTuple, Optional

from parsers.trace_format import SessionRecord
from protocol.nonce import NonceSource
from protocol.sasi import PartyState, TagIdentity, Transcript, run_session
from protocol.word96 import WIDTH, RotationVariant, Word96, mod_small, rotation_amount


class Precondition(str, Enum):
    """How forced sessions satisfy K1 = K2 = 0 (mod n)"""

    # multiples of lcm(n, 96): zero residue and zero modular rotation
    DEGENERATE = "degenerate"
    ZERO_KEYS = "zero-keys"
    # multiples of n only; rotation amounts left to chance
    RESIDUE = "residue"


class AnnotatedSession(NamedTuple):
    """A transcript together with the secrets in force when it was recorded"""

    state: PartyState
    transcript: Transcript


def is_degenerate(state: PartyState, n: int, variant: RotationVariant) -> bool:
    """Both rotations are the identity and K1 = K2 = 0 (mod n)"""
    return (
        rotation_amount(state.k1, variant) == 0
        and rotation_amount(state.k2, variant) == 0
        and mod_small(state.k1, n) == 0
        and mod_small(state.k2, n) == 0
    )


class SessionGenerator:
    def __init__(
        self,
        tag: TagIdentity,
        state: PartyState,
        src: NonceSource,
        variant: RotationVariant = RotationVariant.MODULAR,
    ):
        self.tag = tag
        self.reader = state
        self.tag_state = state
        self.src = src
        self.variant = variant
        self.sessions_run = 0

    @classmethod
    def random(
        cls, seed: int, variant: RotationVariant = RotationVariant.MODULAR
    ) -> "SessionGenerator":
        src = NonceSource(seed)
        ids = src.next_word()
        tag = TagIdentity(src.next_word())
        k1 = src.next_word()
        k2 = src.next_word()
        return cls(tag, PartyState(ids, k1, k2), src, variant)

    @property
    def current_ids(self) -> Word96:
        """Pseudonym the tag will announce at the next hello"""
        return self.tag_state.ids

    def annotated(self, sessions: Optional[int] = None) -> Iterator[AnnotatedSession]:
        """Run `sessions` consecutive sessions, or forever when None"""
        steps = range(sessions) if sessions is not None else counter()
        for _ in steps:
            before = self.reader
            result = run_session(
                self.reader, self.tag_state, self.tag, self.src, self.variant
            )
            self.reader = result.reader
            self.tag_state = result.tag
            self.sessions_run += 1
            yield AnnotatedSession(
                before,
                Transcript(
                    result.ids, result.a, result.b, result.c, result.d, result.tag.ids
                ),
            )

    def transcripts(self, sessions: Optional[int] = None) -> Iterator[Transcript]:
        for session in self.annotated(sessions):
            yield session.transcript

    def records(self, sessions: int) -> Iterator[SessionRecord]:
        for index, transcript in enumerate(self.transcripts(sessions)):
            yield SessionRecord(index, *transcript[:5])


def forced_key(src: NonceSource, n: int, precondition: Precondition) -> Word96:
    if precondition is Precondition.ZERO_KEYS:
        return Word96(0)
    if precondition is Precondition.DEGENERATE:
        return src.next_multiple(math.lcm(n, WIDTH))
    return src.next_multiple(n)


def forced_session(
    n: int,
    src: NonceSource,
    precondition: Precondition = Precondition.DEGENERATE,
    variant: RotationVariant = RotationVariant.MODULAR,
) -> tuple[TagIdentity, AnnotatedSession]:
    """One session from fresh secrets whose keys meet `precondition`"""
    ids = src.next_word()
    tag = TagIdentity(src.next_word())
    state = PartyState(
        ids, forced_key(src, n, precondition), forced_key(src, n, precondition)
    )
    generator = SessionGenerator(tag, state, src, variant)
    return tag, next(generator.annotated(1))
