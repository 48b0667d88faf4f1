from .seeding import check_seed, child_seeds, name_seed, rng_streams
from .pool import (
    PoolDocument,
    Utterance,
    UtterancePool,
    dump_pool,
    load_pool,
    placeholder_embeddings,
    random_embedding,
    speaker_embeddings,
    synthetic_pool,
)
from .mixture import (
    MixtureConfig,
    MixturePlan,
    Placement,
    calibrate_gap_range,
    mean_overlap,
    mix_pcm,
    overlap_ratio,
    overlap_time,
    pcm_bytes,
    sample_conversation_window,
    simulate_mixture,
)
from .augment import AugmentConfig, augment
from .oracle import hypothesis_from_labels, oracle_asr
from .corpus import (
    CorpusDocument,
    CorpusItem,
    MixtureRecord,
    build_corpus,
    corpus_document,
    dump_corpus,
    load_corpus,
    mixture_prompt,
)

__all__ = [
    "check_seed",
    "child_seeds",
    "name_seed",
    "rng_streams",
    "PoolDocument",
    "Utterance",
    "UtterancePool",
    "dump_pool",
    "load_pool",
    "placeholder_embeddings",
    "random_embedding",
    "speaker_embeddings",
    "synthetic_pool",
    "MixtureConfig",
    "MixturePlan",
    "Placement",
    "calibrate_gap_range",
    "mean_overlap",
    "mix_pcm",
    "overlap_ratio",
    "overlap_time",
    "pcm_bytes",
    "sample_conversation_window",
    "simulate_mixture",
    "AugmentConfig",
    "augment",
    "hypothesis_from_labels",
    "oracle_asr",
    "CorpusDocument",
    "CorpusItem",
    "MixtureRecord",
    "build_corpus",
    "corpus_document",
    "dump_corpus",
    "load_corpus",
    "mixture_prompt",
]
