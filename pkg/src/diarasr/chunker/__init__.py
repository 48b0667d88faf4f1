from .config import ALIMEETING, DEFAULT_MAX_CHUNK_DURATION, MLC_SLM, ChunkConfig
from .planner import (
    Chunk,
    ChunkPlanDocument,
    ChunkRecord,
    CoverageReport,
    chunk_coverage_check,
    embeddings_consistent,
    plan_chunks,
    plan_from_document,
    plan_to_document,
    split_long_segments,
    validate_chunk,
)

__all__ = [
    "ALIMEETING",
    "DEFAULT_MAX_CHUNK_DURATION",
    "MLC_SLM",
    "ChunkConfig",
    "Chunk",
    "ChunkPlanDocument",
    "ChunkRecord",
    "CoverageReport",
    "chunk_coverage_check",
    "embeddings_consistent",
    "plan_chunks",
    "plan_from_document",
    "plan_to_document",
    "split_long_segments",
    "validate_chunk",
]
