from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from ..core.formats import SegLSTRecord, seglst_records
from ..core.segments import Segment, SegmentList
from ..enrollment.prompt import (
    DEFAULT_INSTRUCTION,
    PromptRecord,
    PromptStructure,
    assemble_prompt,
    prompt_from_record,
    prompt_to_record,
)
from ..enrollment.triplets import DEFAULT_FRAME_RATE, build_triplets
from ..utils.errors import EnrollmentError, FormatError, SimulationError
from .mixture import MixtureConfig, MixturePlan, simulate_mixture
from .pool import UtterancePool, speaker_embeddings
from .seeding import child_seeds, rng_streams


@dataclass(frozen=True)
class CorpusItem:
    plan: MixturePlan
    prompt: PromptStructure


def mixture_prompt(
    plan: MixturePlan,
    pool: UtterancePool,
    embedding_mode: str = "random",
    frame_rate: float = DEFAULT_FRAME_RATE,
    instruction: str = DEFAULT_INSTRUCTION,
    seed: int = 0,
) -> PromptStructure:
    """Training prompt for one mixture: triplets over [0, max_duration], labels from the reference."""
    (rng,) = rng_streams(seed, 1)
    embeddings = speaker_embeddings(pool, [p.utterance_index for p in plan.placements], embedding_mode, rng)
    triplets = build_triplets(plan.reference, embeddings, (0.0, plan.max_duration), frame_rate)
    return assemble_prompt(instruction, triplets, [t.source_segment.words or "" for t in triplets])


def build_corpus(
    pool: UtterancePool,
    count: int,
    seed: int = 0,
    n_speakers_range: Tuple[int, int] = (2, 4),
    mixture: Optional[MixtureConfig] = None,
    embedding_mode: str = "random",
    frame_rate: float = DEFAULT_FRAME_RATE,
    instruction: str = DEFAULT_INSTRUCTION,
    workers: int = 4,
) -> List[CorpusItem]:
    """Simulate ``count`` mixtures in parallel, each from its own derived seed."""
    low, high = n_speakers_range
    if count < 0:
        raise SimulationError(f"count must be non-negative, got {count}")
    if not 1 <= low <= high:
        raise SimulationError(f"invalid speaker-count range {n_speakers_range}")

    mixture = mixture or MixtureConfig()
    seeds = child_seeds(seed, count)

    def make(i: int) -> CorpusItem:
        count_seed, mix_seed, prompt_seed = child_seeds(seeds[i], 3)
        (count_rng,) = rng_streams(count_seed, 1)
        n_speakers = int(count_rng.integers(low, high + 1))
        plan = simulate_mixture(
            pool,
            n_speakers,
            max_duration=mixture.max_duration,
            gap_range=mixture.gap_range,
            seed=mix_seed,
            max_utterances_per_speaker=mixture.max_utterances_per_speaker,
            session_id=f"sim-{i:05d}",
        )
        prompt = mixture_prompt(plan, pool, embedding_mode, frame_rate, instruction, prompt_seed)
        return CorpusItem(plan, prompt)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        items = list(executor.map(make, range(count)))
    logger.info(f"built {len(items)} simulated mixtures (seed {seed})")
    return items


class MixtureRecord(BaseModel):
    session_id: str
    seed: int
    max_duration: float
    overlap_ratio: float
    segments: List[SegLSTRecord] = Field(default_factory=list)
    prompt: Optional[PromptRecord] = None


class CorpusDocument(BaseModel):
    mixtures: List[MixtureRecord] = Field(default_factory=list)


def corpus_document(items: Sequence[CorpusItem]) -> CorpusDocument:
    return CorpusDocument(
        mixtures=[
            MixtureRecord(
                session_id=item.plan.session_id,
                seed=item.plan.seed,
                max_duration=item.plan.max_duration,
                overlap_ratio=item.plan.overlap_ratio,
                segments=seglst_records(item.plan.reference),
                prompt=prompt_to_record(item.prompt),
            )
            for item in items
        ]
    )


def dump_corpus(items: Sequence[CorpusItem]) -> str:
    return corpus_document(items).model_dump_json(indent=2) + "\n"


def load_corpus(text: str) -> List[Tuple[SegmentList, Optional[PromptStructure]]]:
    """Reference segments and prompts back from a corpus document (placements are not stored)."""
    try:
        document = CorpusDocument.model_validate_json(text)
    except ValidationError as e:
        err = e.errors()[0]
        raise FormatError(err["msg"], location=".".join(str(p) for p in err["loc"]) or None)
    out = []
    try:
        for record in document.mixtures:
            segments = SegmentList.of(
                Segment(s.session_id, s.speaker, s.start_time, s.end_time, s.words)
                for s in record.segments
            )
            prompt = prompt_from_record(record.prompt) if record.prompt is not None else None
            out.append((segments, prompt))
    except (EnrollmentError, FormatError) as e:
        raise FormatError(str(e))
    return out
