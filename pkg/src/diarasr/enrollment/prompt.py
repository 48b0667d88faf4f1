"""Decoder input structure: instruction, ordered triplet slots and aligned labels."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, ValidationError

from ..core.segments import Segment, SpeakerEmbedding
from ..utils.errors import EnrollmentError, FormatError
from .triplets import Triplet

DEFAULT_INSTRUCTION = (
    "Transcribe the speech of each enrolled speaker inside its time span. "
    "Answer with one line per triplet, in the given order."
)


@dataclass(frozen=True)
class PromptStructure:
    instruction: str
    triplets: Tuple[Triplet, ...] = field(default_factory=tuple)
    labels: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "triplets", tuple(self.triplets))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.triplets) != len(self.labels):
            raise EnrollmentError(
                f"{len(self.triplets)} triplets but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.triplets)


def assemble_prompt(
    instruction: str,
    triplets: Sequence[Triplet],
    labels: Optional[Sequence[str]] = None,
) -> PromptStructure:
    """Labels default to empty strings, the inference-time layout."""
    if labels is None:
        labels = [""] * len(triplets)
    if len(labels) != len(triplets):
        raise EnrollmentError(f"{len(triplets)} triplets but {len(labels)} labels")
    return PromptStructure(instruction=instruction, triplets=tuple(triplets), labels=tuple(labels))


class TripletRecord(BaseModel):
    """Self-contained triplet: the raw embedding vector travels with it."""

    embedding: List[float]
    start_norm: float
    end_norm: float
    span: Tuple[float, float]
    session_id: str
    speaker: str
    start_time: float
    end_time: float
    words: Optional[str] = None


class PromptRecord(BaseModel):
    instruction: str
    triplets: List[TripletRecord] = Field(default_factory=list)
    labels: List[str] = Field(default_factory=list)


class PromptDocument(BaseModel):
    records: List[PromptRecord] = Field(default_factory=list)


def prompt_to_record(prompt: PromptStructure) -> PromptRecord:
    return PromptRecord(
        instruction=prompt.instruction,
        triplets=[
            TripletRecord(
                embedding=list(t.embedding.values),
                start_norm=t.start_norm,
                end_norm=t.end_norm,
                span=t.span,
                session_id=t.source_segment.session_id,
                speaker=t.source_segment.speaker,
                start_time=t.source_segment.start,
                end_time=t.source_segment.end,
                words=t.source_segment.words,
            )
            for t in prompt.triplets
        ],
        labels=list(prompt.labels),
    )


def prompt_from_record(record: PromptRecord) -> PromptStructure:
    triplets = [
        Triplet(
            embedding=SpeakerEmbedding(tuple(r.embedding)),
            start_norm=r.start_norm,
            end_norm=r.end_norm,
            source_segment=Segment(
                session_id=r.session_id,
                speaker=r.speaker,
                start=r.start_time,
                end=r.end_time,
                words=r.words,
            ),
            span=tuple(r.span),
        )
        for r in record.triplets
    ]
    return assemble_prompt(record.instruction, triplets, record.labels)


def dump_prompts(prompts: Sequence[PromptStructure]) -> str:
    document = PromptDocument(records=[prompt_to_record(p) for p in prompts])
    return document.model_dump_json(indent=2) + "\n"


def load_prompts(text: str) -> List[PromptStructure]:
    try:
        document = PromptDocument.model_validate_json(text)
    except ValidationError as e:
        err = e.errors()[0]
        where = ".".join(str(part) for part in err["loc"])
        raise FormatError(err["msg"], location=where or None)
    try:
        return [prompt_from_record(r) for r in document.records]
    except (EnrollmentError, FormatError) as e:
        raise FormatError(str(e))
