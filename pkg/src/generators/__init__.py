from .session_generator import (
    AnnotatedSession,
    Precondition,
    SessionGenerator,
    forced_session,
    is_degenerate,
)
from .trace_writer import write_trace

__all__ = [
    'AnnotatedSession',
    'Precondition',
    'SessionGenerator',
    'forced_session',
    'is_degenerate',
    'write_trace',
]
