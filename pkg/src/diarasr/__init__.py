"""diarasr: scoring, chunk planning and training-data tools for speaker-attributed ASR."""

__version__ = "0.1.0"

from .core import Segment, SegmentList, SpeakerEmbedding, load_segments, dump_segments
from .metrics import AlignmentReport, DerReport, ErrorCounts, cpwer, der, tcpwer
from .enrollment import PromptStructure, Triplet, assemble_prompt, build_triplets
from .chunker import ChunkConfig, plan_chunks, chunk_coverage_check
from .utils import Config, setup_logger

__all__ = [
    "Segment",
    "SegmentList",
    "SpeakerEmbedding",
    "load_segments",
    "dump_segments",
    "AlignmentReport",
    "DerReport",
    "ErrorCounts",
    "cpwer",
    "der",
    "tcpwer",
    "PromptStructure",
    "Triplet",
    "assemble_prompt",
    "build_triplets",
    "ChunkConfig",
    "plan_chunks",
    "chunk_coverage_check",
    "Config",
    "setup_logger",
]
