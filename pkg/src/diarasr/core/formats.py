"""RTTM, segment-list (SegLST) and UEM readers/writers.

RTTM SPEAKER line layout (1-based fields)::

    SPEAKER <session> <channel> <onset> <duration> <NA> <NA> <speaker> <NA> <NA>

Segment lists are a JSON array of records with the keys ``session_id``,
``speaker``, ``start_time``, ``end_time`` and ``words``.
"""

import json
import math
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, FiniteFloat, ValidationError

from ..utils.errors import FormatError
from .segments import Segment, SegmentList
from .timeline import Interval, merge_intervals

RTTM_MIN_FIELDS = 9
RTTM_SUFFIXES = (".rttm",)
SEGLST_SUFFIXES = (".json", ".seglst")

TextInput = Union[str, bytes]


class SegLSTRecord(BaseModel):
    """One record of a segment-list document; unknown keys are tolerated."""

    model_config = ConfigDict(extra="allow")

    session_id: str
    speaker: str
    start_time: FiniteFloat
    end_time: FiniteFloat
    words: str


def _decode(text: TextInput, source: str) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"input is not valid UTF-8 ({e.reason} at byte {e.start})", source=source)
    return text


def _parse_float(token: str, line_no: int, field: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"not a number: {token!r}", location=f"line {line_no}", field=field)
    if not math.isfinite(value):
        raise FormatError(f"not a finite number: {token!r}", location=f"line {line_no}", field=field)
    return value


def parse_rttm(text: TextInput) -> SegmentList:
    text = _decode(text, "rttm")
    segments: List[Segment] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        fields = line.split()
        if fields[0] != "SPEAKER":
            raise FormatError(
                f"expected record type SPEAKER, got {fields[0]!r}",
                location=f"line {line_no}",
                field="1 (type)",
            )
        if len(fields) < RTTM_MIN_FIELDS:
            raise FormatError(
                f"expected at least {RTTM_MIN_FIELDS} fields, got {len(fields)}",
                location=f"line {line_no}",
                field=str(len(fields) + 1),
            )

        onset = _parse_float(fields[3], line_no, "4 (onset)")
        duration = _parse_float(fields[4], line_no, "5 (duration)")
        if duration < 0:
            raise FormatError(
                f"negative duration {fields[4]}", location=f"line {line_no}", field="5 (duration)"
            )
        if onset < 0:
            raise FormatError(
                f"negative onset {fields[3]}", location=f"line {line_no}", field="4 (onset)"
            )
        if duration == 0:
            raise FormatError(
                "zero duration", location=f"line {line_no}", field="5 (duration)"
            )

        # channel (field 3) is ignored: single-channel audio only
        try:
            segments.append(
                Segment(session_id=fields[1], speaker=fields[7], start=onset, end=onset + duration)
            )
        except FormatError as e:
            raise FormatError(e.reason, location=f"line {line_no}", field=e.field)

    return SegmentList(tuple(segments))


def format_time(value: float) -> str:
    """3 decimals when that is exact to 1e-9, otherwise up to 9 decimals."""
    text = f"{value:.3f}"
    if abs(float(text) - value) <= 1e-9:
        return text
    text = f"{value:.9f}".rstrip("0")
    return text if len(text.split(".")[1]) >= 3 else f"{value:.3f}"


def serialize_rttm(segs: SegmentList) -> str:
    lines = []
    for seg in segs:
        for name, value in (("session_id", seg.session_id), ("speaker", seg.speaker)):
            if not value or any(ch.isspace() for ch in value):
                raise FormatError(f"{name} {value!r} cannot be written to RTTM", field=name)
        lines.append(
            f"SPEAKER {seg.session_id} 1 {format_time(seg.start)} {format_time(seg.end - seg.start)} "
            f"<NA> <NA> {seg.speaker} <NA> <NA>"
        )
    return "".join(f"{line}\n" for line in lines)


def parse_seglst(text: TextInput) -> SegmentList:
    text = _decode(text, "seglst")
    if not text.strip():
        return SegmentList()

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", location=f"line {e.lineno}")
    except RecursionError:
        raise FormatError("invalid JSON: nesting too deep")

    if not isinstance(data, list):
        raise FormatError("segment list must be a JSON array of records")

    segments: List[Segment] = []
    for index, record in enumerate(data):
        if not isinstance(record, dict):
            raise FormatError("record must be an object", location=f"record {index}")
        try:
            parsed = SegLSTRecord.model_validate(record)
        except ValidationError as e:
            err = e.errors()[0]
            key = ".".join(str(part) for part in err["loc"]) or None
            if err["type"] == "missing":
                raise FormatError("missing key", location=f"record {index}", field=key)
            raise FormatError(f"invalid value: {err['msg']}", location=f"record {index}", field=key)

        try:
            segments.append(
                Segment(
                    session_id=parsed.session_id,
                    speaker=parsed.speaker,
                    start=parsed.start_time,
                    end=parsed.end_time,
                    words=parsed.words,
                )
            )
        except FormatError as e:
            raise FormatError(e.reason, location=f"record {index}", field=e.field)

    return SegmentList(tuple(segments))


def seglst_records(segs: SegmentList) -> List[SegLSTRecord]:
    return [
        SegLSTRecord(
            session_id=seg.session_id,
            speaker=seg.speaker,
            start_time=seg.start,
            end_time=seg.end,
            words=seg.words if seg.words is not None else "",
        )
        for seg in segs
    ]


def serialize_seglst(segs: SegmentList) -> str:
    records = [record.model_dump() for record in seglst_records(segs)]
    return json.dumps(records, indent=2, ensure_ascii=False) + "\n"


def parse_uem(text: TextInput) -> Dict[str, List[Interval]]:
    """UEM lines: ``<session> <channel> <start> <end>``; returns merged intervals per session."""
    text = _decode(text, "uem")
    regions: Dict[str, List[Interval]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) < 4:
            raise FormatError(
                f"expected 4 fields, got {len(fields)}", location=f"line {line_no}", field=str(len(fields) + 1)
            )
        start = _parse_float(fields[2], line_no, "3 (start)")
        end = _parse_float(fields[3], line_no, "4 (end)")
        if end < start:
            raise FormatError("end before start", location=f"line {line_no}", field="4 (end)")
        regions.setdefault(fields[0], []).append((start, end))
    return {sid: merge_intervals(spans) for sid, spans in sorted(regions.items())}


def _format_for(path: Path) -> str:
    name = path.name.lower()
    if name.endswith(RTTM_SUFFIXES):
        return "rttm"
    if name.endswith(SEGLST_SUFFIXES):
        return "seglst"
    raise FormatError(
        "unknown file type (expected .rttm, .json or .seglst)", source=str(path)
    )


def load_segments(path: Union[str, Path], fmt: Optional[str] = None) -> SegmentList:
    path = Path(path)
    fmt = fmt or _format_for(path)
    data = path.read_bytes()
    try:
        return parse_rttm(data) if fmt == "rttm" else parse_seglst(data)
    except FormatError as e:
        raise e.with_source(str(path)) from None


def dump_segments(segs: SegmentList, path: Union[str, Path], fmt: Optional[str] = None) -> None:
    path = Path(path)
    fmt = fmt or _format_for(path)
    text = serialize_rttm(segs) if fmt == "rttm" else serialize_seglst(segs)
    path.write_text(text, encoding="utf-8")


def load_uem(path: Union[str, Path]) -> Dict[str, List[Interval]]:
    path = Path(path)
    try:
        return parse_uem(path.read_bytes())
    except FormatError as e:
        raise e.with_source(str(path)) from None
