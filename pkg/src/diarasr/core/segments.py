from collections import defaultdict
from dataclasses import dataclass, field
import math
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import FormatError


@dataclass(frozen=True)
class Segment:
    """One speaker-attributed time interval, optionally with transcript text."""

    session_id: str
    speaker: str
    start: float
    end: float
    words: Optional[str] = None

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise FormatError("segment times must be finite", field="start/end")
        if self.start < 0:
            raise FormatError(f"segment start {self.start} is negative", field="start")
        if self.end <= self.start:
            raise FormatError(
                f"segment end {self.end} must be greater than start {self.start}", field="end"
            )

    @property
    def duration(self) -> float:
        return self.end - self.start

    def sort_key(self) -> Tuple[float, float, str]:
        return (self.start, self.end, self.speaker)


@dataclass(frozen=True)
class SegmentList:
    """Ordered, immutable collection of segments, possibly spanning sessions."""

    segments: Tuple[Segment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.segments, tuple):
            object.__setattr__(self, "segments", tuple(self.segments))

    @classmethod
    def of(cls, segments: Iterable[Segment]) -> "SegmentList":
        return cls(tuple(segments))

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def __getitem__(self, index: int) -> Segment:
        return self.segments[index]

    def __add__(self, other: "SegmentList") -> "SegmentList":
        return SegmentList(self.segments + other.segments)

    @property
    def sessions(self) -> List[str]:
        return sorted({s.session_id for s in self.segments})

    @property
    def speakers(self) -> List[str]:
        return sorted({s.speaker for s in self.segments})

    def sorted(self) -> "SegmentList":
        return SegmentList(tuple(sorted(self.segments, key=lambda s: (s.session_id,) + s.sort_key())))

    def by_session(self) -> Dict[str, "SegmentList"]:
        """Group by session id, preserving the relative order inside each group."""
        groups: Dict[str, List[Segment]] = defaultdict(list)
        for seg in self.segments:
            groups[seg.session_id].append(seg)
        return {sid: SegmentList(tuple(groups[sid])) for sid in sorted(groups)}

    def by_speaker(self) -> Dict[str, "SegmentList"]:
        groups: Dict[str, List[Segment]] = defaultdict(list)
        for seg in self.segments:
            groups[seg.speaker].append(seg)
        return {spk: SegmentList(tuple(groups[spk])) for spk in sorted(groups)}

    def filter_session(self, session_id: str) -> "SegmentList":
        return SegmentList(tuple(s for s in self.segments if s.session_id == session_id))

    def extent(self) -> Optional[Tuple[float, float]]:
        if not self.segments:
            return None
        return min(s.start for s in self.segments), max(s.end for s in self.segments)

    def total_duration(self) -> float:
        return float(sum(s.duration for s in self.segments))


@dataclass(frozen=True)
class SpeakerEmbedding:
    """Fixed-length speaker vector; stored as a tuple so it stays hashable and immutable."""

    values: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise FormatError("speaker embedding must have a positive dimension", field="values")
        if not all(math.isfinite(v) for v in values):
            raise FormatError("speaker embedding values must be finite", field="values")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, array: Sequence[float]) -> "SpeakerEmbedding":
        return cls(tuple(np.asarray(array, dtype=np.float64).ravel().tolist()))

    @property
    def dim(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)
