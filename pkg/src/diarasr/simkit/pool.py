from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from ..core.segments import SpeakerEmbedding
from ..enrollment.triplets import select_embedding
from ..utils.errors import FormatError, SimulationError
from .seeding import name_seed, rng_streams

SYNTHETIC_VOCABULARY = (
    "we", "should", "review", "the", "budget", "before", "next", "meeting", "i", "think",
    "that", "plan", "works", "for", "everyone", "can", "you", "share", "slides", "today",
    "yes", "agreed", "let", "us", "move", "on", "to", "item", "two", "please",
)
WORDS_PER_SECOND = 2.5


@dataclass(frozen=True)
class Utterance:
    speaker: str
    duration: float
    words: str
    embedding: SpeakerEmbedding
    samples: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.duration > 0:
            raise SimulationError(f"utterance duration must be positive, got {self.duration}")


@dataclass(frozen=True)
class UtterancePool:
    utterances: Tuple[Utterance, ...]

    def __post_init__(self):
        object.__setattr__(self, "utterances", tuple(self.utterances))

    def __len__(self) -> int:
        return len(self.utterances)

    def __getitem__(self, index: int) -> Utterance:
        return self.utterances[index]

    @property
    def speakers(self) -> List[str]:
        return sorted({u.speaker for u in self.utterances})

    def indices_by_speaker(self) -> Dict[str, List[int]]:
        groups: Dict[str, List[int]] = {}
        for index, utt in enumerate(self.utterances):
            groups.setdefault(utt.speaker, []).append(index)
        return groups


def random_embedding(dim: int, rng: np.random.Generator) -> SpeakerEmbedding:
    vector = rng.standard_normal(dim)
    return SpeakerEmbedding.from_array(vector / np.linalg.norm(vector))


def placeholder_embeddings(speakers: Iterable[str], dim: int = 16, seed: int = 0) -> Dict[str, SpeakerEmbedding]:
    """Deterministic stand-in vectors keyed by speaker name, for diarization-only inputs."""
    return {
        speaker: random_embedding(dim, np.random.default_rng(name_seed(speaker, seed)))
        for speaker in sorted(set(speakers))
    }


def synthetic_pool(
    n_speakers: int,
    utterances_per_speaker: int = 8,
    seed: int = 0,
    duration_range: Tuple[float, float] = (1.0, 6.0),
    dim: int = 16,
    noise: float = 0.05,
) -> UtterancePool:
    """Utterances with random durations, filler words and noisy per-speaker embeddings."""
    if n_speakers <= 0 or utterances_per_speaker <= 0:
        raise SimulationError("synthetic pool needs at least one speaker and one utterance each")
    if not 0 < duration_range[0] <= duration_range[1]:
        raise SimulationError(f"invalid duration range {duration_range}")

    voice_rng, duration_rng, word_rng = rng_streams(seed, 3)
    utterances = []
    for s in range(n_speakers):
        speaker = f"spk{s:02d}"
        centre = random_embedding(dim, voice_rng).as_array()
        for _ in range(utterances_per_speaker):
            duration = float(round(duration_rng.uniform(*duration_range), 3))
            n_words = max(1, int(round(duration * WORDS_PER_SECOND)))
            words = " ".join(word_rng.choice(SYNTHETIC_VOCABULARY, size=n_words))
            vector = centre + noise * voice_rng.standard_normal(dim)
            utterances.append(
                Utterance(speaker, duration, words, SpeakerEmbedding.from_array(vector))
            )
    return UtterancePool(tuple(utterances))


class UtteranceRecord(BaseModel):
    speaker: str
    duration: float
    words: str
    embedding: List[float]


class PoolDocument(BaseModel):
    utterances: List[UtteranceRecord] = Field(default_factory=list)


def load_pool(text: str) -> UtterancePool:
    try:
        document = PoolDocument.model_validate_json(text)
    except ValidationError as e:
        err = e.errors()[0]
        raise FormatError(err["msg"], location=".".join(str(p) for p in err["loc"]) or None)
    try:
        return UtterancePool(
            tuple(
                Utterance(r.speaker, r.duration, r.words, SpeakerEmbedding(tuple(r.embedding)))
                for r in document.utterances
            )
        )
    except (SimulationError, FormatError) as e:
        raise FormatError(str(e))


def dump_pool(pool: UtterancePool) -> str:
    document = PoolDocument(
        utterances=[
            UtteranceRecord(
                speaker=u.speaker, duration=u.duration, words=u.words, embedding=list(u.embedding.values)
            )
            for u in pool.utterances
        ]
    )
    return document.model_dump_json(indent=2) + "\n"


def speaker_embeddings(
    pool: UtterancePool, indices: Sequence[int], mode: str = "mean", rng: Optional[np.random.Generator] = None
) -> Dict[str, SpeakerEmbedding]:
    """One embedding per speaker from the given utterances (random pick or mean pool)."""
    grouped: Dict[str, List[SpeakerEmbedding]] = {}
    for index in indices:
        grouped.setdefault(pool[index].speaker, []).append(pool[index].embedding)
    return {speaker: select_embedding(embs, mode, rng) for speaker, embs in sorted(grouped.items())}
