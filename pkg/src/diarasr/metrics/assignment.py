from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..utils.errors import MetricError


def _optimum(cost: np.ndarray) -> float:
    if cost.size == 0:
        return 0.0
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())


def solve_assignment(
    cost: Sequence[Sequence[float]], maximize: bool = False, atol: float = 1e-9
) -> List[Tuple[int, int]]:
    """Optimal one-to-one assignment on a square matrix.

    Among all optimal assignments the one whose column sequence (row 0, row 1,
    ...) is lexicographically smallest is returned, so the result does not
    depend on the solver's internal tie handling.
    """
    matrix = np.asarray(cost, dtype=np.float64)
    if matrix.size == 0 and matrix.ndim == 1:
        matrix = matrix.reshape(0, 0)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise MetricError(f"assignment needs a square cost matrix, got shape {matrix.shape}")
    if maximize:
        matrix = -matrix

    n = matrix.shape[0]
    best = _optimum(matrix)
    free = list(range(n))
    fixed = 0.0
    pairs: List[Tuple[int, int]] = []

    for row in range(n):
        rest = list(range(row + 1, n))
        for col in free:
            remaining = [c for c in free if c != col]
            total = fixed + matrix[row, col] + _optimum(matrix[np.ix_(rest, remaining)])
            if total <= best + atol:
                pairs.append((row, col))
                fixed += matrix[row, col]
                free.remove(col)
                break
        else:  # pragma: no cover - unreachable for finite matrices
            raise MetricError("assignment refinement failed to find an optimal column")

    return pairs
