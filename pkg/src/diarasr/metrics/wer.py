"""Concatenated (cpWER) and time-constrained (tcpWER) permutation word error rates."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

from ..core.segments import SegmentList
from ..utils.errors import MetricError
from .alignment import (
    ErrorCounts,
    TimedWord,
    check_collar,
    edit_distance,
    time_constrained_edit_distance,
    words_with_times,
)
from .assignment import solve_assignment
from .tokenizer import WORD, Tokenizer, tokenize

UNMATCHED = "unmatched"

Stream = TypeVar("Stream")


@dataclass(frozen=True)
class AlignmentReport:
    counts: ErrorCounts
    speaker_mapping: Dict[str, str] = field(default_factory=dict)

    @property
    def rate(self) -> Optional[float]:
        return self.counts.rate

    @property
    def undefined(self) -> bool:
        return self.counts.undefined


def check_single_session(ref: SegmentList, hyp: SegmentList) -> Optional[str]:
    sessions = sorted({s.session_id for s in ref} | {s.session_id for s in hyp})
    if len(sessions) > 1:
        raise MetricError(f"expected a single session, got {len(sessions)}: {', '.join(sessions)}")
    for name, segs in (("reference", ref), ("hypothesis", hyp)):
        for seg in segs:
            if seg.words is None:
                raise MetricError(
                    f"{name} segment {seg.speaker} [{seg.start}, {seg.end}] carries no words"
                )
    return sessions[0] if sessions else None


def _ordered_by_speaker(segs: SegmentList) -> Dict[str, list]:
    return {
        speaker: sorted(group, key=lambda s: s.sort_key())
        for speaker, group in segs.by_speaker().items()
    }


def permutation_align(
    ref_streams: Dict[str, Stream],
    hyp_streams: Dict[str, Stream],
    pair_counts: Callable[[Sequence, Sequence], ErrorCounts],
) -> AlignmentReport:
    """Optimal speaker mapping over per-speaker streams.

    The smaller side is padded with empty pseudo-speakers, so a surplus
    hypothesis speaker costs all insertions and a surplus reference speaker
    all deletions.
    """
    ref_speakers = sorted(ref_streams)
    hyp_speakers = sorted(hyp_streams)
    size = max(len(ref_speakers), len(hyp_speakers))

    def stream(streams: Dict[str, Stream], names: List[str], index: int) -> Sequence:
        return streams[names[index]] if index < len(names) else []

    table = [
        [pair_counts(stream(ref_streams, ref_speakers, c), stream(hyp_streams, hyp_speakers, r)) for c in range(size)]
        for r in range(size)
    ]
    pairs = solve_assignment([[cell.errors for cell in row] for row in table])

    counts = ErrorCounts()
    mapping: Dict[str, str] = {}
    for r, c in pairs:
        counts = counts + table[r][c]
        if r < len(hyp_speakers):
            mapping[hyp_speakers[r]] = ref_speakers[c] if c < len(ref_speakers) else UNMATCHED
    return AlignmentReport(counts=counts, speaker_mapping=mapping)


def cpwer(ref: SegmentList, hyp: SegmentList, tok: Tokenizer = WORD) -> AlignmentReport:
    check_single_session(ref, hyp)

    def streams(segs: SegmentList) -> Dict[str, List[str]]:
        return {
            speaker: [t for seg in group for t in tokenize(seg.words, tok)]
            for speaker, group in _ordered_by_speaker(segs).items()
        }

    return permutation_align(streams(ref), streams(hyp), edit_distance)


def tcpwer(
    ref: SegmentList, hyp: SegmentList, collar: float = 5.0, tok: Tokenizer = WORD
) -> AlignmentReport:
    check_single_session(ref, hyp)
    collar = check_collar(collar)

    # same concatenation order as cpwer, so an infinite collar reproduces it exactly
    def streams(segs: SegmentList) -> Dict[str, List[TimedWord]]:
        return {
            speaker: [w for seg in group for w in words_with_times(seg, tok)]
            for speaker, group in _ordered_by_speaker(segs).items()
        }

    return permutation_align(
        streams(ref),
        streams(hyp),
        lambda r, h: time_constrained_edit_distance(r, h, collar),
    )
