"""Diarization error rate with md-eval style collars and overlap scoring."""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.segments import SegmentList
from ..core.timeline import Interval, intersect_intervals, merge_intervals, subtract_intervals, total_length
from ..utils.errors import MetricError
from .alignment import check_collar
from .assignment import solve_assignment
from .wer import UNMATCHED


@dataclass(frozen=True)
class DerReport:
    missed: float = 0.0
    false_alarm: float = 0.0
    confusion: float = 0.0
    total_ref_speech: float = 0.0
    scored_time: float = 0.0
    error_time: float = 0.0
    speaker_mapping: Dict[str, str] = field(default_factory=dict)

    @property
    def undefined(self) -> bool:
        return self.total_ref_speech <= 0

    @property
    def der(self) -> Optional[float]:
        if self.undefined:
            return None
        return (self.missed + self.false_alarm + self.confusion) / self.total_ref_speech

    def __add__(self, other: "DerReport") -> "DerReport":
        return DerReport(
            missed=self.missed + other.missed,
            false_alarm=self.false_alarm + other.false_alarm,
            confusion=self.confusion + other.confusion,
            total_ref_speech=self.total_ref_speech + other.total_ref_speech,
            scored_time=self.scored_time + other.scored_time,
            error_time=self.error_time + other.error_time,
        )


def speaker_tracks(segs: SegmentList) -> Dict[str, List[Interval]]:
    """Merged activity per speaker; a speaker overlapping itself counts once."""
    return {
        speaker: merge_intervals((s.start, s.end) for s in group)
        for speaker, group in segs.by_speaker().items()
    }


def scoring_regions(
    ref: SegmentList,
    hyp: SegmentList,
    collar: float,
    uem: Optional[Sequence[Interval]] = None,
) -> List[Interval]:
    """UEM (or the ref+hyp hull) minus ±collar around every reference boundary."""
    if uem is not None:
        base = merge_intervals(uem)
    else:
        extent = (ref + hyp).extent()
        base = [extent] if extent else []
    if collar <= 0:
        return base
    no_score = [(b - collar, b + collar) for s in ref for b in (s.start, s.end)]
    return subtract_intervals(base, no_score)


def overlap_matrix(
    ref_tracks: Dict[str, List[Interval]],
    hyp_tracks: Dict[str, List[Interval]],
    scored: Sequence[Interval],
) -> np.ndarray:
    ref_names, hyp_names = sorted(ref_tracks), sorted(hyp_tracks)
    matrix = np.zeros((len(hyp_names), len(ref_names)))
    for i, h in enumerate(hyp_names):
        hyp_scored = intersect_intervals(hyp_tracks[h], scored)
        for j, r in enumerate(ref_names):
            matrix[i, j] = total_length(intersect_intervals(hyp_scored, ref_tracks[r]))
    return matrix


def map_speakers(
    ref_tracks: Dict[str, List[Interval]],
    hyp_tracks: Dict[str, List[Interval]],
    scored: Sequence[Interval],
) -> Dict[str, str]:
    """One-to-one hyp→ref mapping maximising total overlap on scored time."""
    ref_names, hyp_names = sorted(ref_tracks), sorted(hyp_tracks)
    size = max(len(ref_names), len(hyp_names))
    padded = np.zeros((size, size))
    padded[: len(hyp_names), : len(ref_names)] = overlap_matrix(ref_tracks, hyp_tracks, scored)

    mapping: Dict[str, str] = {}
    for r, c in solve_assignment(padded, maximize=True):
        if r < len(hyp_names):
            mapping[hyp_names[r]] = ref_names[c] if c < len(ref_names) else UNMATCHED
    return mapping


def _events(
    ref_tracks: Dict[str, List[Interval]],
    hyp_tracks: Dict[str, List[Interval]],
    scored: Sequence[Interval],
) -> List[Tuple[float, int, str, str]]:
    events = []
    for side, tracks in (("ref", ref_tracks), ("hyp", hyp_tracks)):
        for name, spans in tracks.items():
            for start, end in spans:
                events.append((start, 1, side, name))
                events.append((end, -1, side, name))
    for start, end in scored:
        events.append((start, 1, "scored", ""))
        events.append((end, -1, "scored", ""))
    events.sort(key=lambda e: e[0])
    return events


def der(
    ref: SegmentList,
    hyp: SegmentList,
    collar: float = 0.25,
    uem: Optional[Sequence[Interval]] = None,
) -> DerReport:
    collar = check_collar(collar)
    sessions = sorted(set(ref.sessions) | set(hyp.sessions))
    if len(sessions) > 1:
        raise MetricError(f"expected a single session, got {len(sessions)}: {', '.join(sessions)}")

    ref_tracks, hyp_tracks = speaker_tracks(ref), speaker_tracks(hyp)
    scored = scoring_regions(ref, hyp, collar, uem)
    mapping = map_speakers(ref_tracks, hyp_tracks, scored)

    active: Counter = Counter()
    missed = false_alarm = confusion = total_ref = error = 0.0
    events = _events(ref_tracks, hyp_tracks, scored)

    index = 0
    while index < len(events):
        now = events[index][0]
        while index < len(events) and events[index][0] == now:
            _, delta, side, name = events[index]
            active[(side, name)] += delta
            index += 1
        if index == len(events) or active[("scored", "")] <= 0:
            continue

        span = events[index][0] - now
        refs = {name for (side, name), n in active.items() if side == "ref" and n > 0}
        hyps = [name for (side, name), n in active.items() if side == "hyp" and n > 0]
        n_ref, n_hyp = len(refs), len(hyps)
        n_correct = sum(1 for h in hyps if mapping.get(h) in refs)

        missed += max(0, n_ref - n_hyp) * span
        false_alarm += max(0, n_hyp - n_ref) * span
        confusion += (min(n_ref, n_hyp) - n_correct) * span
        error += (max(n_ref, n_hyp) - n_correct) * span
        total_ref += n_ref * span

    return DerReport(
        missed=missed,
        false_alarm=false_alarm,
        confusion=confusion,
        total_ref_speech=total_ref,
        scored_time=total_length(scored),
        error_time=error,
        speaker_mapping=mapping,
    )
