"""Line format of recorded SASI session traces.

    SASI-TRACE v1 variant=<modular|hamming> width=96
    # optional one-line note
    S <index> <ids> <a> <b> <c> <d>
    ...
    F <ids announced after the last session>

Every word is 24 lowercase hex digits.
"""

import re
from dataclasses import dataclass
from typing import NamedTuple, Optional

from protocol.word96 import WIDTH, RotationVariant, Word96, from_hex, to_hex

FORMAT_VERSION = 1
MAGIC = "SASI-TRACE"

HEADER_PATTERN = re.compile(
    r'^SASI-TRACE v(?P<version>\d+) variant=(?P<variant>\w+) width=(?P<width>\d+)$'
)


class TraceFormatError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def _is_one_line(note: str) -> bool:
    return bool(note) and note == note.strip() and not any(c in note for c in "\r\n")


@dataclass(frozen=True)
class TraceHeader:
    variant: RotationVariant
    format_version: int = FORMAT_VERSION
    width: int = WIDTH
    seed_note: Optional[str] = None

    def __post_init__(self):
        if self.width != WIDTH:
            raise ValueError(f"Trace width must be {WIDTH}, got {self.width}")
        note = self.seed_note
        if note is not None and not _is_one_line(note):
            raise ValueError(
                f"Note must be one non-empty line without edge whitespace: {note!r}"
            )


class SessionRecord(NamedTuple):
    index: int
    ids: Word96
    a: Word96
    b: Word96
    c: Word96
    d: Word96


def format_header(header: TraceHeader) -> str:
    line = (
        f"{MAGIC} v{header.format_version} "
        f"variant={header.variant.value} width={header.width}\n"
    )
    if header.seed_note:
        line += f"# {header.seed_note}\n"
    return line


def format_record(record: SessionRecord) -> str:
    return (
        f"S {record.index} {to_hex(record.ids)} {to_hex(record.a)} "
        f"{to_hex(record.b)} {to_hex(record.c)} {to_hex(record.d)}\n"
    )


def format_final(ids: Word96) -> str:
    return f"F {to_hex(ids)}\n"


def parse_header(line: str, line_number: int = 1) -> TraceHeader:
    match = HEADER_PATTERN.match(line.strip())
    if not match:
        raise TraceFormatError(line_number, f"malformed header {line.strip()!r}")

    version = int(match.group('version'))
    if version != FORMAT_VERSION:
        raise TraceFormatError(line_number, f"unsupported format version {version}")
    try:
        variant = RotationVariant(match.group('variant'))
    except ValueError:
        raise TraceFormatError(
            line_number, f"unknown variant {match.group('variant')!r}"
        ) from None
    width = int(match.group('width'))
    if width != WIDTH:
        raise TraceFormatError(line_number, f"unsupported width {width}")

    return TraceHeader(variant=variant, format_version=version, width=width)


def parse_word(field: str, line_number: int) -> Word96:
    try:
        return from_hex(field)
    except ValueError as exc:
        raise TraceFormatError(line_number, str(exc)) from None


def parse_record(fields: list[str], line_number: int) -> SessionRecord:
    if len(fields) != 7:
        raise TraceFormatError(
            line_number, f"session line needs 7 fields, found {len(fields)}"
        )
    if not (fields[1].isascii() and fields[1].isdigit()):
        raise TraceFormatError(line_number, f"bad session index {fields[1]!r}")
    words = [parse_word(field, line_number) for field in fields[2:]]
    return SessionRecord(int(fields[1]), *words)
