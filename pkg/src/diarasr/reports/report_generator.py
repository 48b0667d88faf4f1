"""Score reports: per-session results, additive aggregates and speaker-count breakdowns."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field

from ..core.segments import SegmentList
from ..core.timeline import Interval
from ..metrics.alignment import ErrorCounts
from ..metrics.der import DerReport, der
from ..metrics.tokenizer import WORD, Tokenizer
from ..metrics.wer import cpwer, tcpwer
from ..utils.errors import ConfigError, MetricError
from .templates import TemplateManager

Number = Union[int, float]

WER_METRICS = ("cpwer", "tcpwer")
METRICS = WER_METRICS + ("der",)
WER_KEYS = ("substitutions", "deletions", "insertions", "errors", "ref_tokens")
DER_KEYS = ("missed", "false_alarm", "confusion", "error_time", "total_ref_speech", "scored_time")
FORMATS = ("json", "markdown")


def count_keys(metric: str) -> tuple:
    if metric not in METRICS:
        raise ConfigError(f"unknown metric {metric!r} (expected one of {', '.join(METRICS)})")
    return WER_KEYS if metric in WER_METRICS else DER_KEYS


def rate_from_counts(metric: str, counts: Dict[str, Number]) -> Optional[float]:
    """Rate of summed counts; never an average of per-session rates."""
    if metric in WER_METRICS:
        return ErrorCounts(
            substitutions=int(counts["substitutions"]),
            deletions=int(counts["deletions"]),
            insertions=int(counts["insertions"]),
            ref_tokens=int(counts["ref_tokens"]),
        ).rate
    return DerReport(**{k: float(counts[k]) for k in DER_KEYS}).der


class SessionScore(BaseModel):
    session_id: str
    num_ref_speakers: int
    num_hyp_speakers: int
    counts: Dict[str, Number]
    rate: Optional[float] = None
    speaker_mapping: Dict[str, str] = Field(default_factory=dict)


class Aggregate(BaseModel):
    sessions: int
    counts: Dict[str, Number]
    rate: Optional[float] = None


class SpeakerCountRow(BaseModel):
    num_speakers: int
    sessions: int
    counts: Dict[str, Number]
    rate: Optional[float] = None


class ScoreReport(BaseModel):
    metric: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    sessions: List[SessionScore] = Field(default_factory=list)
    aggregate: Aggregate
    by_num_speakers: Optional[List[SpeakerCountRow]] = None


def score_session(
    metric: str,
    session_id: str,
    ref: SegmentList,
    hyp: SegmentList,
    collar: float,
    tok: Tokenizer = WORD,
    uem: Optional[Sequence[Interval]] = None,
) -> SessionScore:
    keys = count_keys(metric)
    if metric == "cpwer":
        result = cpwer(ref, hyp, tok)
        counts, rate, mapping = result.counts.to_dict(), result.rate, result.speaker_mapping
    elif metric == "tcpwer":
        result = tcpwer(ref, hyp, collar, tok)
        counts, rate, mapping = result.counts.to_dict(), result.rate, result.speaker_mapping
    else:
        result = der(ref, hyp, collar, uem)
        counts = {k: getattr(result, k) for k in DER_KEYS}
        rate, mapping = result.der, result.speaker_mapping
    if rate is None:
        logger.warning(f"{metric} is undefined for session {session_id}: no reference")
    return SessionScore(
        session_id=session_id,
        num_ref_speakers=len(ref.speakers),
        num_hyp_speakers=len(hyp.speakers),
        counts={k: counts[k] for k in keys},
        rate=rate,
        speaker_mapping=dict(sorted(mapping.items())),
    )


def _summed(frame: pd.DataFrame, keys: Sequence[str]) -> Dict[str, Number]:
    return {k: frame[k].sum().item() for k in keys}


def aggregate(metric: str, sessions: Sequence[SessionScore]) -> Aggregate:
    keys = count_keys(metric)
    if not sessions:
        zeros = {k: 0 for k in keys}
        return Aggregate(sessions=0, counts=zeros, rate=rate_from_counts(metric, zeros))
    frame = pd.DataFrame([s.counts for s in sessions], columns=list(keys))
    counts = _summed(frame, keys)
    return Aggregate(sessions=len(sessions), counts=counts, rate=rate_from_counts(metric, counts))


def by_num_speakers(metric: str, sessions: Sequence[SessionScore]) -> List[SpeakerCountRow]:
    """Sessions grouped by reference speaker count, counts summed within each group."""
    keys = count_keys(metric)
    if not sessions:
        return []
    frame = pd.DataFrame(
        [{"num_speakers": s.num_ref_speakers, **s.counts} for s in sessions],
        columns=["num_speakers", *keys],
    )
    rows = []
    for num_speakers, group in frame.groupby("num_speakers", sort=True):
        counts = _summed(group, keys)
        rows.append(
            SpeakerCountRow(
                num_speakers=int(num_speakers),
                sessions=len(group),
                counts=counts,
                rate=rate_from_counts(metric, counts),
            )
        )
    return rows


@dataclass
class ReportConfig:
    fmt: str = "json"
    indent: int = 2
    workers: int = 4
    breakdown: bool = False

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown report format {self.fmt!r} (expected json or markdown)")
        if self.workers <= 0:
            raise ConfigError(f"workers must be positive, got {self.workers}")


class ReportGenerator:
    def __init__(self, config: Optional[ReportConfig] = None):
        self.config = config or ReportConfig()
        self.templates = TemplateManager()

    def score(
        self,
        metric: str,
        ref: SegmentList,
        hyp: SegmentList,
        collar: float,
        tok: Tokenizer = WORD,
        uem: Optional[Dict[str, List[Interval]]] = None,
        parameters: Optional[Dict[str, Any]] = None,
    ) -> ScoreReport:
        """Score every session in parallel; output order follows the sorted session ids."""
        count_keys(metric)
        refs, hyps = ref.by_session(), hyp.by_session()
        session_ids = sorted(set(refs) | set(hyps))
        empty = SegmentList()

        def session_uem(session_id: str) -> Optional[List[Interval]]:
            if uem is None:
                return None
            if session_id not in uem:
                logger.warning(f"session {session_id} missing from UEM; scoring its full extent")
                return None
            return uem[session_id]

        def work(session_id: str) -> SessionScore:
            try:
                return score_session(
                    metric,
                    session_id,
                    refs.get(session_id, empty),
                    hyps.get(session_id, empty),
                    collar,
                    tok,
                    session_uem(session_id),
                )
            except MetricError as e:
                raise MetricError(f"session {session_id}: {e}") from e

        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            results = list(executor.map(work, session_ids))
        results.sort(key=lambda s: s.session_id)
        logger.info(f"scored {len(results)} session(s) with {metric}")

        return ScoreReport(
            metric=metric,
            parameters=dict(parameters or {}),
            sessions=results,
            aggregate=aggregate(metric, results),
            by_num_speakers=by_num_speakers(metric, results) if self.config.breakdown else None,
        )

    def render(self, report: BaseModel, fmt: Optional[str] = None) -> str:
        fmt = fmt or self.config.fmt
        if fmt == "json":
            return report.model_dump_json(indent=self.config.indent) + "\n"
        if fmt == "markdown":
            if not isinstance(report, ScoreReport):
                raise ConfigError("markdown output is only available for score reports")
            return self.templates.render_template(
                "score_report", {"report": report, "keys": count_keys(report.metric)}
            )
        raise ConfigError(f"unknown report format {fmt!r}")
