from .segments import Segment, SegmentList, SpeakerEmbedding
from .formats import (
    SegLSTRecord,
    dump_segments,
    load_segments,
    load_uem,
    parse_rttm,
    parse_seglst,
    parse_uem,
    serialize_rttm,
    serialize_seglst,
)
from .timeline import (
    elementary_intervals,
    intersect_intervals,
    merge_intervals,
    subtract_intervals,
    total_length,
)

__all__ = [
    "Segment",
    "SegmentList",
    "SpeakerEmbedding",
    "SegLSTRecord",
    "dump_segments",
    "load_segments",
    "load_uem",
    "parse_rttm",
    "parse_seglst",
    "parse_uem",
    "serialize_rttm",
    "serialize_seglst",
    "elementary_intervals",
    "intersect_intervals",
    "merge_intervals",
    "subtract_intervals",
    "total_length",
]
