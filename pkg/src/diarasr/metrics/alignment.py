"""Levenshtein alignment with an optional pairing constraint.

The dynamic program minimises ``(errors, -substitutions)`` lexicographically.
Both terms are folded into one integer key ``errors * B - substitutions`` with
``B = len(ref) + len(hyp) + 1`` so each DP row is a handful of numpy ops: the
insertion chain along a row is a running minimum (``np.minimum.accumulate``).
"""

from dataclasses import dataclass
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.segments import Segment
from ..utils.errors import MetricError
from .tokenizer import WORD, Tokenizer, tokenize

_FORBIDDEN = np.int64(1) << np.int64(60)


@dataclass(frozen=True)
class ErrorCounts:
    substitutions: int = 0
    deletions: int = 0
    insertions: int = 0
    ref_tokens: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def matches(self) -> int:
        return self.ref_tokens - self.substitutions - self.deletions

    @property
    def undefined(self) -> bool:
        return self.ref_tokens == 0 and self.errors > 0

    @property
    def rate(self) -> Optional[float]:
        """Errors over reference tokens; ``None`` when there is no reference but errors exist."""
        if self.ref_tokens == 0:
            return None if self.errors else 0.0
        return self.errors / self.ref_tokens

    def __add__(self, other: "ErrorCounts") -> "ErrorCounts":
        return ErrorCounts(
            substitutions=self.substitutions + other.substitutions,
            deletions=self.deletions + other.deletions,
            insertions=self.insertions + other.insertions,
            ref_tokens=self.ref_tokens + other.ref_tokens,
        )

    def to_dict(self) -> Dict[str, int]:
        return {
            "substitutions": self.substitutions,
            "deletions": self.deletions,
            "insertions": self.insertions,
            "ref_tokens": self.ref_tokens,
            "errors": self.errors,
        }


@dataclass(frozen=True)
class TimedWord:
    token: str
    begin: float
    end: float


def _token_ids(ref: Sequence[str], hyp: Sequence[str]):
    vocab: Dict[str, int] = {}
    ref_ids = np.array([vocab.setdefault(t, len(vocab)) for t in ref], dtype=np.int64)
    hyp_ids = np.array([vocab.setdefault(t, len(vocab)) for t in hyp], dtype=np.int64)
    return ref_ids, hyp_ids


def levenshtein(
    ref: Sequence[str], hyp: Sequence[str], allowed: Optional[np.ndarray] = None
) -> ErrorCounts:
    """Minimal S+D+I; ``allowed[i, j] == False`` forbids pairing ref[i] with hyp[j]."""
    n, m = len(ref), len(hyp)
    base = np.int64(n + m + 1)
    ref_ids, hyp_ids = _token_ids(ref, hyp)

    pair_key = np.where(ref_ids[:, None] == hyp_ids[None, :], np.int64(0), base - 1)
    if allowed is not None:
        if allowed.shape != (n, m):
            raise MetricError(f"pairing mask has shape {allowed.shape}, expected {(n, m)}")
        pair_key = np.where(allowed, pair_key, _FORBIDDEN)

    steps = np.arange(m + 1, dtype=np.int64) * base
    row = steps.copy()
    for i in range(n):
        candidate = row + base
        candidate[1:] = np.minimum(candidate[1:], row[:-1] + pair_key[i])
        row = steps + np.minimum.accumulate(candidate - steps)

    key = int(row[m])
    errors = -((-key) // int(base))
    substitutions = errors * int(base) - key
    matches = (n + m - errors - substitutions) // 2
    return ErrorCounts(
        substitutions=substitutions,
        deletions=n - matches - substitutions,
        insertions=m - matches - substitutions,
        ref_tokens=n,
    )


def edit_distance(ref: Sequence[str], hyp: Sequence[str]) -> ErrorCounts:
    return levenshtein(ref, hyp)


def words_with_times(seg: Segment, tok: Tokenizer = WORD) -> List[TimedWord]:
    """Equal-width contiguous intervals partitioning the segment, one per token."""
    tokens = tokenize(seg.words or "", tok)
    n = len(tokens)
    width = (seg.end - seg.start) / n if n else 0.0
    words = []
    for i, token in enumerate(tokens):
        end = seg.end if i == n - 1 else seg.start + (i + 1) * width
        words.append(TimedWord(token, seg.start + i * width, end))
    return words


def check_collar(collar: float) -> float:
    collar = float(collar)
    if math.isnan(collar) or collar < 0:
        raise MetricError(f"collar must be non-negative, got {collar}")
    return collar


def pairing_mask(ref: Sequence[TimedWord], hyp: Sequence[TimedWord], collar: float) -> np.ndarray:
    """Hyp interval widened by ``collar`` on both sides must intersect the ref interval."""
    ref_begin = np.array([w.begin for w in ref], dtype=np.float64)
    ref_end = np.array([w.end for w in ref], dtype=np.float64)
    hyp_begin = np.array([w.begin for w in hyp], dtype=np.float64) - collar
    hyp_end = np.array([w.end for w in hyp], dtype=np.float64) + collar
    return (hyp_begin[None, :] <= ref_end[:, None]) & (ref_begin[:, None] <= hyp_end[None, :])


def time_constrained_edit_distance(
    ref: Sequence[TimedWord], hyp: Sequence[TimedWord], collar: float
) -> ErrorCounts:
    collar = check_collar(collar)
    return levenshtein(
        [w.token for w in ref],
        [w.token for w in hyp],
        allowed=pairing_mask(ref, hyp, collar),
    )
