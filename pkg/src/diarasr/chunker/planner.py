"""Chunk-based inference planning for long recordings."""

from collections import Counter
from dataclasses import dataclass, field
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from loguru import logger
from pydantic import BaseModel, Field

from ..core.segments import Segment, SegmentList, SpeakerEmbedding
from ..enrollment.prompt import (
    PromptRecord,
    TripletRecord,
    assemble_prompt,
    prompt_from_record,
    prompt_to_record,
)
from ..enrollment.triplets import DEFAULT_FRAME_RATE, Triplet, build_triplets
from ..metrics.tokenizer import WORD, Tokenizer, tokenize
from ..utils.errors import ConfigError, EnrollmentError
from .config import DEFAULT_MAX_CHUNK_DURATION, ChunkConfig

# slack for float error when comparing chunk durations against the bound
DURATION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Chunk:
    session_id: str
    window: Tuple[float, float]
    segments: Tuple[Segment, ...]
    triplets: Tuple[Triplet, ...] = field(default_factory=tuple)

    @property
    def duration(self) -> float:
        return self.window[1] - self.window[0]

    def speaker_counts(self) -> Counter:
        return Counter(s.speaker for s in self.segments)


def _split_words(seg: Segment, bounds: Sequence[float], tok: Tokenizer) -> List[Optional[str]]:
    """Token span per piece: a token goes where its equal-partition midpoint falls."""
    if seg.words is None:
        return [None] * (len(bounds) - 1)
    tokens = tokenize(seg.words, tok)
    width = seg.duration / len(tokens) if tokens else 0.0
    pieces: List[List[str]] = [[] for _ in range(len(bounds) - 1)]
    piece = 0
    for i, token in enumerate(tokens):
        midpoint = seg.start + (i + 0.5) * width
        while piece < len(pieces) - 1 and midpoint >= bounds[piece + 1]:
            piece += 1
        pieces[piece].append(token)
    return [tok.joiner.join(p) for p in pieces]


def split_long_segments(
    segs: Iterable[Segment], max_dur: float = DEFAULT_MAX_CHUNK_DURATION, tok: Tokenizer = WORD
) -> SegmentList:
    """Cut every segment longer than ``max_dur`` at multiples of ``max_dur`` from its start."""
    if max_dur <= 0:
        raise ConfigError(f"max_dur must be positive, got {max_dur}")
    tok = Tokenizer.parse(tok)

    out: List[Segment] = []
    for seg in segs:
        if seg.duration <= max_dur:
            out.append(seg)
            continue
        count = math.ceil(seg.duration / max_dur)
        cuts = [seg.start + k * max_dur for k in range(1, count)]
        bounds = [seg.start] + [c for c in cuts if c < seg.end] + [seg.end]
        words = _split_words(seg, bounds, tok)
        for (start, end), text in zip(zip(bounds[:-1], bounds[1:]), words):
            out.append(Segment(seg.session_id, seg.speaker, start, end, text))
    return SegmentList(tuple(out))


def _close(
    session_id: str,
    members: List[Segment],
    embeddings: Dict[str, SpeakerEmbedding],
    frame_rate: float,
) -> Chunk:
    window = (members[0].start, max(s.end for s in members))
    if round((window[1] - window[0]) * frame_rate) <= 0:
        logger.warning(f"chunk {session_id} {window} is shorter than one frame; no triplets built")
        triplets: List[Triplet] = []
    else:
        triplets = build_triplets(members, embeddings, window, frame_rate)
    return Chunk(session_id=session_id, window=window, segments=tuple(members), triplets=tuple(triplets))


def plan_chunks(
    segs: SegmentList,
    cfg: ChunkConfig,
    embeddings: Dict[str, SpeakerEmbedding],
    frame_rate: float = DEFAULT_FRAME_RATE,
    tok: Tokenizer = WORD,
) -> List[Chunk]:
    """Greedy first-fit in (start, end, speaker) order, one session at a time.

    A segment joins the open chunk unless that would break a ChunkConfig
    bound; the chunk window is the hull of its members. The same embedding
    object is attached for a speaker in every chunk. Long segments are split
    first, their words shared out in units of `tok`.
    """
    missing = sorted({s.speaker for s in segs} - set(embeddings))
    if missing:
        raise EnrollmentError(f"no embedding for speaker(s): {', '.join(missing)}")

    pieces = split_long_segments(segs, cfg.max_chunk_duration, tok)
    chunks: List[Chunk] = []

    for session_id, session in pieces.by_session().items():
        members: List[Segment] = []
        per_speaker: Counter = Counter()
        window_end = 0.0

        for seg in sorted(session, key=lambda s: s.sort_key()):
            fits = (
                bool(members)
                and len(members) < cfg.max_total_segments
                and per_speaker[seg.speaker] < cfg.max_segments_per_speaker
                and max(window_end, seg.end) - members[0].start
                <= cfg.max_chunk_duration + DURATION_TOLERANCE
            )
            if members and not fits:
                chunks.append(_close(session_id, members, embeddings, frame_rate))
                members, per_speaker = [], Counter()
            if not members:
                window_end = seg.end
            members.append(seg)
            per_speaker[seg.speaker] += 1
            window_end = max(window_end, seg.end)

        if members:
            chunks.append(_close(session_id, members, embeddings, frame_rate))

    logger.debug(f"planned {len(chunks)} chunks from {len(pieces)} segments")
    return chunks


@dataclass(frozen=True)
class CoverageReport:
    missing: Tuple[Segment, ...] = ()
    extra: Tuple[Segment, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra

    def __bool__(self) -> bool:
        return self.ok


def chunk_coverage_check(
    input: SegmentList,
    chunks: Sequence[Chunk],
    max_dur: float = DEFAULT_MAX_CHUNK_DURATION,
    tok: Tokenizer = WORD,
) -> CoverageReport:
    """Multiset comparison of chunk members against the split input."""
    expected = Counter(split_long_segments(input, max_dur, tok))
    planned = Counter(seg for chunk in chunks for seg in chunk.segments)
    return CoverageReport(
        missing=tuple((expected - planned).elements()),
        extra=tuple((planned - expected).elements()),
    )


def validate_chunk(chunk: Chunk, cfg: ChunkConfig) -> List[str]:
    """Every ChunkConfig violation of one chunk; an empty list means valid."""
    problems = []
    if chunk.duration > cfg.max_chunk_duration + DURATION_TOLERANCE:
        problems.append(f"duration {chunk.duration:.3f}s exceeds {cfg.max_chunk_duration}s")
    if len(chunk.segments) > cfg.max_total_segments:
        problems.append(f"{len(chunk.segments)} segments exceed {cfg.max_total_segments}")
    for speaker, count in sorted(chunk.speaker_counts().items()):
        if count > cfg.max_segments_per_speaker:
            problems.append(f"speaker {speaker} has {count} segments (max {cfg.max_segments_per_speaker})")
    t0, t1 = chunk.window
    for seg in chunk.segments:
        if seg.start < t0 or seg.end > t1:
            problems.append(f"segment [{seg.start}, {seg.end}] outside window [{t0}, {t1}]")
    return problems


def embeddings_consistent(chunks: Sequence[Chunk]) -> bool:
    seen: Dict[str, Tuple[float, ...]] = {}
    for chunk in chunks:
        for triplet in chunk.triplets:
            values = seen.setdefault(triplet.speaker, triplet.embedding.values)
            if values != triplet.embedding.values:
                return False
    return True


class SegmentRecord(BaseModel):
    session_id: str
    speaker: str
    start_time: float
    end_time: float
    words: Optional[str] = None


class ChunkRecord(BaseModel):
    session_id: str
    window: Tuple[float, float]
    segments: List[SegmentRecord] = Field(default_factory=list)
    triplets: List[TripletRecord] = Field(default_factory=list)


class ChunkPlanDocument(BaseModel):
    config: Dict[str, Union[int, float]] = Field(default_factory=dict)
    frame_rate: float = DEFAULT_FRAME_RATE
    chunks: List[ChunkRecord] = Field(default_factory=list)


def plan_to_document(
    chunks: Sequence[Chunk], cfg: ChunkConfig, frame_rate: float = DEFAULT_FRAME_RATE
) -> ChunkPlanDocument:
    records = []
    for chunk in chunks:
        triplets = prompt_to_record(assemble_prompt("", chunk.triplets)).triplets
        records.append(
            ChunkRecord(
                session_id=chunk.session_id,
                window=chunk.window,
                segments=[
                    SegmentRecord(
                        session_id=s.session_id,
                        speaker=s.speaker,
                        start_time=s.start,
                        end_time=s.end,
                        words=s.words,
                    )
                    for s in chunk.segments
                ],
                triplets=triplets,
            )
        )
    return ChunkPlanDocument(config=cfg.to_dict(), frame_rate=frame_rate, chunks=records)


def plan_from_document(document: ChunkPlanDocument) -> List[Chunk]:
    chunks = []
    for record in document.chunks:
        prompt = prompt_from_record(
            PromptRecord(instruction="", triplets=record.triplets, labels=[""] * len(record.triplets))
        )
        chunks.append(
            Chunk(
                session_id=record.session_id,
                window=tuple(record.window),
                segments=tuple(
                    Segment(s.session_id, s.speaker, s.start_time, s.end_time, s.words)
                    for s in record.segments
                ),
                triplets=prompt.triplets,
            )
        )
    return chunks
