"""Slow, independent reference implementations used to verify the fast scorers."""

from functools import lru_cache
from itertools import permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.segments import SegmentList
from .alignment import ErrorCounts, TimedWord, words_with_times
from .der import DerReport
from .tokenizer import WORD, Tokenizer, tokenize


def brute_force_levenshtein(
    ref: Sequence, hyp: Sequence, can_pair: Optional[Callable[[int, int], bool]] = None
) -> ErrorCounts:
    """Exhaustive recursion over delete / insert / pair, memoised on positions.

    Minimises errors, then maximises substitutions, like the fast aligner.
    """
    ref, hyp = tuple(ref), tuple(hyp)

    def token(x):
        return x.token if isinstance(x, TimedWord) else x

    @lru_cache(maxsize=None)
    def best(i: int, j: int) -> Tuple[int, int, int, int]:
        # (errors, -substitutions, deletions, insertions)
        if i == len(ref):
            return (len(hyp) - j, 0, 0, len(hyp) - j)
        if j == len(hyp):
            return (len(ref) - i, 0, len(ref) - i, 0)
        e, s, d, n = best(i + 1, j)
        options = [(e + 1, s, d + 1, n)]
        e, s, d, n = best(i, j + 1)
        options.append((e + 1, s, d, n + 1))
        if can_pair is None or can_pair(i, j):
            e, s, d, n = best(i + 1, j + 1)
            if token(ref[i]) == token(hyp[j]):
                options.append((e, s, d, n))
            else:
                options.append((e + 1, s - 1, d, n))
        return min(options)

    errors, neg_subs, deletions, insertions = best(0, 0)
    return ErrorCounts(
        substitutions=-neg_subs, deletions=deletions, insertions=insertions, ref_tokens=len(ref)
    )


def brute_force_edit_distance(ref: Sequence[str], hyp: Sequence[str]) -> ErrorCounts:
    return brute_force_levenshtein(ref, hyp)


def brute_force_time_constrained(
    ref: Sequence[TimedWord], hyp: Sequence[TimedWord], collar: float
) -> ErrorCounts:
    def can_pair(i: int, j: int) -> bool:
        return hyp[j].begin - collar <= ref[i].end and ref[i].begin <= hyp[j].end + collar

    return brute_force_levenshtein(ref, hyp, can_pair)


def brute_force_assignment(cost: Sequence[Sequence[float]]) -> Tuple[float, Tuple[int, ...]]:
    """Minimum total and the lexicographically first optimal permutation."""
    matrix = np.asarray(cost, dtype=np.float64)
    n = matrix.shape[0]
    best_total, best_perm = float("inf"), tuple()
    for perm in permutations(range(n)):
        total = float(sum(matrix[r, c] for r, c in enumerate(perm)))
        if total < best_total - 1e-9:
            best_total, best_perm = total, perm
    return (0.0 if n == 0 else best_total), best_perm


def _enumerate(
    ref_streams: Dict[str, list], hyp_streams: Dict[str, list], pair: Callable
) -> ErrorCounts:
    ref_names, hyp_names = sorted(ref_streams), sorted(hyp_streams)
    size = max(len(ref_names), len(hyp_names))
    refs = [ref_streams[n] for n in ref_names] + [[]] * (size - len(ref_names))
    hyps = [hyp_streams[n] for n in hyp_names] + [[]] * (size - len(hyp_names))
    table = [[pair(refs[c], hyps[r]) for c in range(size)] for r in range(size)]
    best: Optional[ErrorCounts] = None
    for perm in permutations(range(size)):
        total = ErrorCounts()
        for r, c in enumerate(perm):
            total = total + table[r][c]
        if best is None or total.errors < best.errors:
            best = total
    return best or ErrorCounts()


def _streams(segs: SegmentList, explode: Callable) -> Dict[str, list]:
    return {
        speaker: [x for seg in sorted(group, key=lambda s: s.sort_key()) for x in explode(seg)]
        for speaker, group in segs.by_speaker().items()
    }


def brute_force_cpwer(ref: SegmentList, hyp: SegmentList, tok: Tokenizer = WORD) -> ErrorCounts:
    def explode(seg):
        return tokenize(seg.words or "", tok)

    return _enumerate(_streams(ref, explode), _streams(hyp, explode), brute_force_edit_distance)


def brute_force_tcpwer(
    ref: SegmentList, hyp: SegmentList, collar: float, tok: Tokenizer = WORD
) -> ErrorCounts:
    def explode(seg):
        return words_with_times(seg, tok)

    return _enumerate(
        _streams(ref, explode),
        _streams(hyp, explode),
        lambda r, h: brute_force_time_constrained(r, h, collar),
    )


def grid_der(
    ref: SegmentList,
    hyp: SegmentList,
    collar: float = 0.0,
    step: float = 1e-3,
    uem: Optional[Sequence[Tuple[float, float]]] = None,
) -> DerReport:
    """DER by sampling the midpoint of every ``step``-long cell."""
    extent = (ref + hyp).extent()
    if extent is None:
        return DerReport()
    lo, hi = extent if uem is None else (min(s for s, _ in uem), max(e for _, e in uem))
    times = lo + (np.arange(int(np.ceil((hi - lo) / step))) + 0.5) * step

    scored = np.zeros_like(times, dtype=bool)
    for start, end in (uem if uem is not None else [extent]):
        scored |= (times >= start) & (times < end)
    for seg in ref:
        for boundary in (seg.start, seg.end):
            scored &= ~(np.abs(times - boundary) < collar)

    def activity(segs: SegmentList) -> List[np.ndarray]:
        out = []
        for _, group in segs.by_speaker().items():
            on = np.zeros_like(times, dtype=bool)
            for seg in group:
                on |= (times >= seg.start) & (times < seg.end)
            out.append(on & scored)
        return out

    ref_on, hyp_on = activity(ref), activity(hyp)
    size = max(len(ref_on), len(hyp_on))
    blank = np.zeros_like(times, dtype=bool)
    ref_on += [blank] * (size - len(ref_on))
    hyp_on += [blank] * (size - len(hyp_on))

    best_correct = np.zeros_like(times, dtype=np.int64)
    best_total = -1
    for perm in permutations(range(size)):
        correct = sum((hyp_on[r] & ref_on[c]).astype(np.int64) for r, c in enumerate(perm))
        total = int(np.sum(correct)) if size else 0
        if total > best_total:
            best_total, best_correct = total, (correct if size else best_correct)

    n_ref = sum(on.astype(np.int64) for on in ref_on) if size else np.zeros_like(times, dtype=np.int64)
    n_hyp = sum(on.astype(np.int64) for on in hyp_on) if size else np.zeros_like(times, dtype=np.int64)
    missed = np.maximum(n_ref - n_hyp, 0).sum() * step
    false_alarm = np.maximum(n_hyp - n_ref, 0).sum() * step
    confusion = (np.minimum(n_ref, n_hyp) - best_correct).sum() * step
    return DerReport(
        missed=float(missed),
        false_alarm=float(false_alarm),
        confusion=float(confusion),
        total_ref_speech=float(n_ref.sum() * step),
        scored_time=float(scored.sum() * step),
        error_time=float(missed + false_alarm + confusion),
    )
