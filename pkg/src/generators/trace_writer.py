import logging
from typing import Callable, Iterable, TextIO, Union

from parsers.trace_format import (
    SessionRecord,
    TraceHeader,
    format_final,
    format_header,
    format_record,
)
from protocol.word96 import Word96

logger = logging.getLogger(__name__)


def write_trace(
    header: TraceHeader,
    records: Iterable[SessionRecord],
    final_ids: Union[Word96, Callable[[], Word96]],
    sink: TextIO,
) -> int:
    """Stream a trace to `sink` and return the number of sessions written.

    `final_ids` may be a callable, evaluated after the last record, for
    record streams that are still being simulated.
    """
    sink.write(format_header(header))
    written = 0
    for record in records:
        if record.index != written:
            raise ValueError(
                f"Record index {record.index} out of order, expected {written}"
            )
        sink.write(format_record(record))
        written += 1
    last = final_ids() if callable(final_ids) else final_ids
    sink.write(format_final(last))
    logger.debug(f"Wrote {written} sessions")
    return written
