import io
import logging
from pathlib import Path
from typing import BinaryIO, Callable, Iterable, Iterator, Optional, TextIO, Union

from protocol.sasi import Transcript
from protocol.word96 import Word96

from .trace_format import (
    TraceFormatError,
    TraceHeader,
    SessionRecord,
    parse_header,
    parse_record,
    parse_word,
)

logger = logging.getLogger(__name__)


def _numbered(lines: Iterable[Union[str, bytes]]) -> Iterator[tuple[int, str]]:
    """Number lines from 1, decoding raw bytes as UTF-8"""
    iterator = iter(lines)
    line_number = 0
    while True:
        line_number += 1
        try:
            line = next(iterator)
            if isinstance(line, bytes):
                line = line.decode('utf-8')
        except StopIteration:
            return
        except UnicodeDecodeError as exc:
            message = f"invalid UTF-8: {exc.reason}"
            raise TraceFormatError(line_number, message) from None
        yield line_number, line


class TraceReader:
    """Streaming view over one trace.

    The header is parsed on construction; session records are yielded
    lazily by `records()` and the final IDS becomes available once they
    have all been read.
    """

    def __init__(
        self,
        lines: Iterable[Union[str, bytes]],
        handle: Optional[BinaryIO] = None,
    ):
        self._lines = _numbered(lines)
        self._handle = handle
        self._final_ids: Optional[Word96] = None
        self._consumed = False
        self._pending: Optional[tuple[int, str]] = None
        self.sessions_read = 0
        self.header = self._read_header()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def close(self):
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def _read_header(self) -> TraceHeader:
        for line_number, line in self._lines:
            header = parse_header(line, line_number)
            note_lines = []
            # the first line after the notes is parked for records()
            for next_number, next_line in self._lines:
                if next_line.startswith('#'):
                    if next_line[1:].strip():
                        note_lines.append(next_line[1:].strip())
                    continue
                self._pending = (next_number, next_line)
                break
            if note_lines:
                try:
                    header = TraceHeader(
                        variant=header.variant,
                        format_version=header.format_version,
                        width=header.width,
                        seed_note=' '.join(note_lines),
                    )
                except ValueError as exc:
                    raise TraceFormatError(line_number + 1, str(exc)) from None
            return header
        raise TraceFormatError(1, "empty trace, missing header")

    def _remaining_lines(self) -> Iterator[tuple[int, str]]:
        if self._pending is not None:
            pending, self._pending = self._pending, None
            yield pending
        yield from self._lines

    def records(self) -> Iterator[SessionRecord]:
        if self._consumed:
            raise RuntimeError("Trace records can only be iterated once")
        self._consumed = True

        expected_index = 0
        last_line = 1
        for line_number, line in self._remaining_lines():
            last_line = line_number
            fields = line.split()
            if not fields or line.startswith('#'):
                continue
            if self._final_ids is not None:
                raise TraceFormatError(line_number, "content after final IDS line")

            kind = fields[0]
            if kind == 'S':
                record = parse_record(fields, line_number)
                if record.index != expected_index:
                    raise TraceFormatError(
                        line_number,
                        f"non-consecutive index {record.index}, "
                        f"expected {expected_index}",
                    )
                expected_index += 1
                self.sessions_read = expected_index
                yield record
            elif kind == 'F':
                if len(fields) != 2:
                    raise TraceFormatError(line_number, "final line needs 2 fields")
                self._final_ids = parse_word(fields[1], line_number)
            else:
                raise TraceFormatError(line_number, f"unknown line type {kind!r}")

        if self._final_ids is None:
            raise TraceFormatError(last_line + 1, "missing final IDS")
        logger.debug(f"Read {expected_index} sessions from trace")

    @property
    def final_ids(self) -> Word96:
        if self._final_ids is None:
            raise RuntimeError("Final IDS is only known after all records are read")
        return self._final_ids

    def transcripts(self) -> Iterator[Transcript]:
        return link_transcripts(self.records(), lambda: self.final_ids)


class TraceParser:
    def parse_file(self, file_path: Union[str, Path]) -> TraceReader:
        """Open a trace file for streaming; close it via the returned reader"""
        file_path = Path(file_path)

        if not file_path.exists():
            raise FileNotFoundError(f"File not found: {file_path}")

        logger.info(f"Loading trace file: {file_path}")
        handle = open(file_path, 'rb')
        try:
            return TraceReader(handle, handle=handle)
        except Exception:
            handle.close()
            raise

    def parse_text(self, text: str) -> TraceReader:
        return TraceReader(io.StringIO(text))


def read_trace(source: Union[str, Path, TextIO, BinaryIO]) -> TraceReader:
    """Read a trace from a path or an open text or binary stream"""
    if isinstance(source, (str, Path)):
        return TraceParser().parse_file(source)
    return TraceReader(source)


def link_transcripts(
    records: Iterable[SessionRecord],
    final_ids: Union[Word96, Callable[[], Word96]],
) -> Iterator[Transcript]:
    """Pair each session with the IDS announced by the one after it.

    `final_ids` may be a callable so streaming readers can supply the
    last pseudonym only once the records are exhausted.
    """
    previous: Optional[SessionRecord] = None
    for record in records:
        if previous is not None:
            yield Transcript(*previous[1:], ids_next=record.ids)
        previous = record
    if previous is not None:
        last = final_ids() if callable(final_ids) else final_ids
        yield Transcript(*previous[1:], ids_next=last)
