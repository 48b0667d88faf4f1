from .report_generator import (
    DER_KEYS,
    FORMATS,
    METRICS,
    WER_KEYS,
    Aggregate,
    ReportConfig,
    ReportGenerator,
    ScoreReport,
    SessionScore,
    SpeakerCountRow,
    aggregate,
    by_num_speakers,
    count_keys,
    rate_from_counts,
    score_session,
)
from .templates import TemplateManager

__all__ = [
    "DER_KEYS",
    "FORMATS",
    "METRICS",
    "WER_KEYS",
    "Aggregate",
    "ReportConfig",
    "ReportGenerator",
    "ScoreReport",
    "SessionScore",
    "SpeakerCountRow",
    "aggregate",
    "by_num_speakers",
    "count_keys",
    "rate_from_counts",
    "score_session",
    "TemplateManager",
]
