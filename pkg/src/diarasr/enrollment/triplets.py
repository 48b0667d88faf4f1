from dataclasses import dataclass
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..core.segments import Segment, SpeakerEmbedding
from ..utils.errors import EnrollmentError

DEFAULT_FRAME_RATE = 100.0
# keeps decimal times such as 0.29 s on frame 29 despite binary rounding
FRAME_EPSILON = 1e-9


@dataclass(frozen=True)
class Triplet:
    """(speaker embedding, normalized start, normalized end) enrollment record.

    ``span`` is the clipped absolute interval in seconds; ``source_segment`` is
    the segment the triplet was built from, before clipping.
    """

    embedding: SpeakerEmbedding
    start_norm: float
    end_norm: float
    source_segment: Segment
    span: Tuple[float, float]

    def __post_init__(self):
        if not (0.0 <= self.start_norm < self.end_norm <= 1.0):
            raise EnrollmentError(
                f"normalized times must satisfy 0 <= start < end <= 1, "
                f"got ({self.start_norm}, {self.end_norm})"
            )

    @property
    def speaker(self) -> str:
        return self.source_segment.speaker


def _frame(offset: float, frame_rate: float, total_frames: int) -> int:
    return min(max(math.floor(offset * frame_rate + FRAME_EPSILON), 0), total_frames)


def check_dims(embeddings: Iterable[SpeakerEmbedding]) -> Optional[int]:
    dims = {e.dim for e in embeddings}
    if len(dims) > 1:
        raise EnrollmentError(f"embedding dimensions differ within a session: {sorted(dims)}")
    return dims.pop() if dims else None


def build_triplets(
    segments: Iterable[Segment],
    embeddings: Dict[str, SpeakerEmbedding],
    window: Tuple[float, float],
    frame_rate: float = DEFAULT_FRAME_RATE,
) -> List[Triplet]:
    """Clip segments to the window and normalize their frame indices by the window length."""
    t0, t1 = window
    if frame_rate <= 0:
        raise EnrollmentError(f"frame rate must be positive, got {frame_rate}")
    total_frames = round((t1 - t0) * frame_rate)
    if t1 <= t0 or total_frames <= 0:
        raise EnrollmentError(f"window [{t0}, {t1}] has zero length")

    segments = list(segments)
    for seg in segments:
        if seg.speaker not in embeddings:
            raise EnrollmentError(f"no embedding for speaker {seg.speaker!r}")
    check_dims(embeddings[seg.speaker] for seg in segments)

    triplets = []
    for seg in segments:
        start, end = max(seg.start, t0), min(seg.end, t1)
        if end <= start:
            raise EnrollmentError(
                f"segment {seg.speaker} [{seg.start}, {seg.end}] does not intersect window [{t0}, {t1}]"
            )

        start_frame = _frame(start - t0, frame_rate, total_frames)
        end_frame = _frame(end - t0, frame_rate, total_frames)
        if end_frame <= start_frame:
            logger.warning(
                f"dropping segment {seg.session_id}/{seg.speaker} [{seg.start:.3f}, {seg.end:.3f}]: "
                f"shorter than one frame after clipping"
            )
            continue

        triplets.append(
            Triplet(
                embedding=embeddings[seg.speaker],
                start_norm=start_frame / total_frames,
                end_norm=end_frame / total_frames,
                source_segment=seg,
                span=(start, end),
            )
        )

    triplets.sort(key=lambda t: (t.start_norm, t.end_norm, t.speaker))
    return triplets


def mean_pool_embedding(utterance_embeddings: Sequence[SpeakerEmbedding]) -> SpeakerEmbedding:
    if not utterance_embeddings:
        raise EnrollmentError("cannot mean-pool an empty list of embeddings")
    check_dims(utterance_embeddings)
    stacked = np.stack([e.as_array() for e in utterance_embeddings])
    return SpeakerEmbedding.from_array(stacked.mean(axis=0))


def select_embedding(
    utterance_embeddings: Sequence[SpeakerEmbedding],
    mode: str = "mean",
    rng: Optional[np.random.Generator] = None,
) -> SpeakerEmbedding:
    """Random utterance embedding for training, mean-pooled embedding for inference."""
    if mode == "mean":
        return mean_pool_embedding(utterance_embeddings)
    if mode == "random":
        if not utterance_embeddings:
            raise EnrollmentError("cannot select from an empty list of embeddings")
        rng = rng or np.random.default_rng()
        return utterance_embeddings[int(rng.integers(len(utterance_embeddings)))]
    raise EnrollmentError(f"unknown embedding selection mode {mode!r} (expected 'mean' or 'random')")
