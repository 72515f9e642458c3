from .nonce import NonceSource, derive_seed
from .sasi import (
    AuthenticationError,
    PartyState,
    SessionSecrets,
    TagIdentity,
    Transcript,
    reader_challenge,
    reader_verify_and_update,
    run_session,
    tag_process,
)
from .word96 import RotationVariant, Word96

__all__ = [
    'NonceSource',
    'derive_seed',
    'AuthenticationError',
    'PartyState',
    'SessionSecrets',
    'TagIdentity',
    'Transcript',
    'reader_challenge',
    'reader_verify_and_update',
    'run_session',
    'tag_process',
    'RotationVariant',
    'Word96',
]
