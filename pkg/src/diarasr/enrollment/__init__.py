from .triplets import (
    DEFAULT_FRAME_RATE,
    Triplet,
    build_triplets,
    mean_pool_embedding,
    select_embedding,
)
from .prompt import (
    DEFAULT_INSTRUCTION,
    PromptDocument,
    PromptRecord,
    PromptStructure,
    TripletRecord,
    assemble_prompt,
    dump_prompts,
    load_prompts,
    prompt_from_record,
    prompt_to_record,
)

__all__ = [
    "DEFAULT_FRAME_RATE",
    "Triplet",
    "build_triplets",
    "mean_pool_embedding",
    "select_embedding",
    "DEFAULT_INSTRUCTION",
    "PromptDocument",
    "PromptRecord",
    "PromptStructure",
    "TripletRecord",
    "assemble_prompt",
    "dump_prompts",
    "load_prompts",
    "prompt_from_record",
    "prompt_to_record",
]
