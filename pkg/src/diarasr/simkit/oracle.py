"""Deterministic stand-in for the decoder in end-to-end pipeline tests."""

from typing import List, Optional, Sequence

from loguru import logger

from ..chunker.planner import Chunk
from ..core.segments import Segment, SegmentList
from ..enrollment.triplets import Triplet
from ..metrics.tokenizer import WORD, Tokenizer, tokenize
from ..utils.errors import SimulationError

# slack when matching a clipped span back to its reference segment
SPAN_TOLERANCE = 1e-9


def _containing(triplet: Triplet, candidates: Sequence[Segment]) -> Optional[Segment]:
    start, end = triplet.span
    best, best_overlap = None, 0.0
    for seg in candidates:
        if seg.start <= start + SPAN_TOLERANCE and seg.end >= end - SPAN_TOLERANCE:
            overlap = min(seg.end, end) - max(seg.start, start)
            if best is None or overlap > best_overlap:
                best, best_overlap = seg, overlap
    return best


def _span_words(seg: Segment, span, tok: Tokenizer) -> str:
    """Tokens whose equal-partition midpoint lies in the span; the segment end is inclusive."""
    tokens = tokenize(seg.words or "", tok)
    if not tokens:
        return ""
    start, end = span
    width = seg.duration / len(tokens)
    closes_segment = end >= seg.end - SPAN_TOLERANCE
    picked = []
    for i, token in enumerate(tokens):
        midpoint = seg.start + (i + 0.5) * width
        if midpoint >= start and (midpoint < end or closes_segment):
            picked.append(token)
    return tok.joiner.join(picked)


def oracle_asr(chunk: Chunk, reference: SegmentList, tok: Tokenizer = WORD) -> List[str]:
    """One label per triplet: the reference words inside that triplet's span."""
    tok = Tokenizer.parse(tok)
    by_speaker = reference.filter_session(chunk.session_id).by_speaker()
    labels = []
    for triplet in chunk.triplets:
        source = _containing(triplet, list(by_speaker.get(triplet.speaker, ())))
        if source is None:
            logger.warning(
                f"no reference segment of {triplet.speaker} covers {triplet.span} in {chunk.session_id}"
            )
            labels.append("")
            continue
        labels.append(_span_words(source, triplet.span, tok))
    return labels


def hypothesis_from_labels(chunk: Chunk, labels: Sequence[str]) -> SegmentList:
    """Decoded labels placed back on the timeline at their triplets' spans."""
    if len(labels) != len(chunk.triplets):
        raise SimulationError(f"{len(chunk.triplets)} triplets but {len(labels)} labels")
    return SegmentList.of(
        Segment(chunk.session_id, t.speaker, t.span[0], t.span[1], label)
        for t, label in zip(chunk.triplets, labels)
    )
