"""Interval arithmetic on lists of (start, end) pairs.

All helpers accept unsorted, possibly overlapping input and return sorted,
disjoint intervals with positive length.
"""

from typing import Iterable, List, Sequence, Tuple

Interval = Tuple[float, float]


def merge_intervals(intervals: Iterable[Interval]) -> List[Interval]:
    ordered = sorted((float(s), float(e)) for s, e in intervals if e > s)
    merged: List[Interval] = []
    for start, end in ordered:
        if merged and start <= merged[-1][1]:
            if end > merged[-1][1]:
                merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    return merged


def total_length(intervals: Iterable[Interval]) -> float:
    return float(sum(e - s for s, e in merge_intervals(intervals)))


def intersect_intervals(a: Sequence[Interval], b: Sequence[Interval]) -> List[Interval]:
    """Intersection of two interval sets (two-pointer walk over merged inputs)."""
    left, right = merge_intervals(a), merge_intervals(b)
    out: List[Interval] = []
    i = j = 0
    while i < len(left) and j < len(right):
        start = max(left[i][0], right[j][0])
        end = min(left[i][1], right[j][1])
        if end > start:
            out.append((start, end))
        if left[i][1] < right[j][1]:
            i += 1
        else:
            j += 1
    return out


def subtract_intervals(base: Sequence[Interval], removed: Sequence[Interval]) -> List[Interval]:
    out: List[Interval] = []
    cuts = merge_intervals(removed)
    for start, end in merge_intervals(base):
        cursor = start
        for cut_start, cut_end in cuts:
            if cut_end <= cursor:
                continue
            if cut_start >= end:
                break
            if cut_start > cursor:
                out.append((cursor, cut_start))
            cursor = max(cursor, cut_end)
            if cursor >= end:
                break
        if cursor < end:
            out.append((cursor, end))
    return out


def elementary_intervals(boundaries: Iterable[float]) -> List[Interval]:
    """Consecutive pairs of the sorted distinct boundary points."""
    points = sorted(set(float(b) for b in boundaries))
    return list(zip(points[:-1], points[1:]))
