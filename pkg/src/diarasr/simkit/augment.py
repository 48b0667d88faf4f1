"""Label-consistent augmentation of enrollment prompts.

Three transforms run in a fixed order, each on its own random stream:
embedding replacement, triplet dropout, then triplet shuffling.
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

from loguru import logger

from ..core.segments import SpeakerEmbedding
from ..enrollment.prompt import PromptStructure
from ..enrollment.triplets import Triplet
from ..utils.config import Config
from ..utils.errors import ConfigError, SimulationError
from .seeding import check_seed, rng_streams


@dataclass(frozen=True)
class AugmentConfig:
    p_replace: float = 0.05
    p_drop: float = 0.1
    p_shuffle: float = 0.2
    seed: int = 0

    def __post_init__(self):
        for name in ("p_replace", "p_drop", "p_shuffle"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be a probability in [0, 1], got {value}")
        object.__setattr__(self, "seed", check_seed(self.seed))

    @classmethod
    def from_settings(cls, config: Config, seed: Optional[int] = None) -> "AugmentConfig":
        try:
            return cls(
                p_replace=float(config.get("settings.augmentation.p_replace", 0.05)),
                p_drop=float(config.get("settings.augmentation.p_drop", 0.1)),
                p_shuffle=float(config.get("settings.augmentation.p_shuffle", 0.2)),
                seed=int(config.get("settings.augmentation.seed", 0) if seed is None else seed),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid augmentation settings: {e}") from e


def augment(
    prompt: PromptStructure,
    cfg: AugmentConfig,
    donor_embeddings: Sequence[SpeakerEmbedding] = (),
) -> PromptStructure:
    """Replace, drop and shuffle triplets while keeping labels aligned.

    A replaced triplet takes a donor embedding that differs from its own and
    its label becomes the empty string. Dropout removes a triplet with its
    label. Shuffling draws one permutation and applies it to both lists.
    """
    if cfg.p_replace > 0 and not donor_embeddings:
        raise SimulationError("embedding replacement needs a non-empty donor pool")

    replace_rng, drop_rng, shuffle_rng = rng_streams(cfg.seed, 3)
    triplets: List[Triplet] = list(prompt.triplets)
    labels: List[str] = list(prompt.labels)

    for i, triplet in enumerate(triplets):
        if replace_rng.random() >= cfg.p_replace:
            continue
        donors = [d for d in donor_embeddings if d.values != triplet.embedding.values]
        if not donors:
            logger.warning(f"no donor differs from speaker {triplet.speaker}; replacement skipped")
            continue
        donor = donors[int(replace_rng.integers(len(donors)))]
        triplets[i] = replace(triplet, embedding=donor)
        labels[i] = ""

    keep = [drop_rng.random() >= cfg.p_drop for _ in triplets]
    triplets = [t for t, k in zip(triplets, keep) if k]
    labels = [label for label, k in zip(labels, keep) if k]

    if triplets and shuffle_rng.random() < cfg.p_shuffle:
        order = shuffle_rng.permutation(len(triplets))
        triplets = [triplets[j] for j in order]
        labels = [labels[j] for j in order]

    return PromptStructure(instruction=prompt.instruction, triplets=tuple(triplets), labels=tuple(labels))
