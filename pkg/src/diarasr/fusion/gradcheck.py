"""Independent checks for the fusion reference: finite differences and a scalar-loop forward."""

import math
from typing import Dict, List

import numpy as np

from ..utils.errors import FusionError
from .attention import FusionParams, fusion_gradients, fusion_loss

MAX_EPS = 1e-3


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """max |a - n| / max(|a|, |n|, 1): relative for large values, absolute near zero."""
    a, n = np.asarray(analytic, dtype=np.float64), np.asarray(numeric, dtype=np.float64)
    if a.size == 0:
        return 0.0
    denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), 1.0)
    return float(np.max(np.abs(a - n) / denom))


def numeric_gradients(Hs, Hp, p: FusionParams, eps: float = 1e-5) -> Dict[str, np.ndarray]:
    """Central differences of sum(Ho**2), one coordinate at a time."""
    if not 0.0 < eps <= MAX_EPS:
        raise FusionError(f"eps must lie in (0, {MAX_EPS}], got {eps}")
    values = {"Hs": np.array(Hs, dtype=np.float64), "Hp": np.array(Hp, dtype=np.float64)}
    values.update({name: array.copy() for name, array in p.as_dict().items()})

    def loss() -> float:
        params = FusionParams(**{name: values[name] for name in p.as_dict()})
        return fusion_loss(values["Hs"], values["Hp"], params)

    grads = {}
    for name, array in values.items():
        grad = np.zeros_like(array)
        for index in np.ndindex(array.shape):
            original = array[index]
            array[index] = original + eps
            upper = loss()
            array[index] = original - eps
            lower = loss()
            array[index] = original
            grad[index] = (upper - lower) / (2.0 * eps)
        grads[name] = grad
    return grads


def fusion_grad_check(Hs, Hp, p: FusionParams, eps: float = 1e-5) -> float:
    """Largest relative error between analytic and finite-difference gradients."""
    analytic = fusion_gradients(Hs, Hp, p)
    numeric = numeric_gradients(Hs, Hp, p, eps)
    return max(relative_error(analytic[name], numeric[name]) for name in analytic)


def scalar_fusion_forward(Hs, Hp, p: FusionParams) -> List[List[float]]:
    """Plain-loop forward pass, kept free of numpy linear algebra."""
    Hs = [[float(x) for x in row] for row in np.asarray(Hs)]
    Hp = [[float(x) for x in row] for row in np.asarray(Hp)]
    wq, wk, wv, wg, bg = (np.asarray(a).tolist() for a in (p.w_q, p.w_k, p.w_v, p.w_g, p.b_g))
    T, d_s, d_a = len(Hs), p.d_s, p.d_a

    def project(rows, weights, cols):
        return [
            [sum(row[i] * weights[i][j] for i in range(len(row))) for j in range(cols)]
            for row in rows
        ]

    Q, K, V = project(Hs, wq, d_a), project(Hp, wk, d_a), project(Hp, wv, d_s)
    out = []
    for t in range(T):
        scores = [sum(Q[t][a] * K[u][a] for a in range(d_a)) / math.sqrt(d_a) for u in range(T)]
        top = max(scores)
        exps = [math.exp(s - top) for s in scores]
        total = sum(exps)
        weights = [e / total for e in exps]
        ca = [sum(weights[u] * V[u][j] for u in range(T)) for j in range(d_s)]
        row = []
        for j in range(d_s):
            z = sum(ca[i] * wg[i][j] for i in range(d_s)) + bg[j]
            g = 1.0 / (1.0 + math.exp(-z)) if z >= 0 else math.exp(z) / (1.0 + math.exp(z))
            row.append(g * ca[j] + Hs[t][j])
        out.append(row)
    return out
