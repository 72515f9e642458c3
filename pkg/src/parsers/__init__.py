from .trace_format import SessionRecord, TraceFormatError, TraceHeader
from .trace_parser import TraceParser, TraceReader, link_transcripts, read_trace

__all__ = [
    'SessionRecord',
    'TraceFormatError',
    'TraceHeader',
    'TraceParser',
    'TraceReader',
    'link_transcripts',
    'read_trace',
]
