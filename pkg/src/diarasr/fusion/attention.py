"""Gated cross-attention fusion of semantic and speaker features.

Row-major convention: a feature matrix is T frames by feature dim.

    Q = Hs Wq,  K = Hp Wk,  V = Hp Wv
    Hca = softmax(Q K^T / sqrt(d_a)) V
    Ho = sigmoid(Hca Wg + b_g) * Hca + Hs

Everything is float64; this is a reference for checking, not a kernel.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from scipy.special import expit, softmax

from ..utils.errors import FusionError

PARAM_NAMES = ("w_q", "w_k", "w_v", "w_g", "b_g")


def _matrix(name: str, value, ndim: int = 2) -> np.ndarray:
    array = np.asarray(value, dtype=np.float64)
    if array.ndim != ndim:
        raise FusionError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise FusionError(f"{name} contains non-finite values")
    return array


@dataclass(frozen=True, eq=False)
class FusionParams:
    """Projection weights: w_q d_s x d_a, w_k d_p x d_a, w_v d_p x d_s, w_g d_s x d_s, b_g d_s."""

    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray
    w_g: np.ndarray
    b_g: np.ndarray

    def __post_init__(self):
        for name in PARAM_NAMES:
            object.__setattr__(self, name, _matrix(name, getattr(self, name), 1 if name == "b_g" else 2))
        d_s, d_a = self.w_q.shape
        d_p = self.w_k.shape[0]
        expected = {
            "w_k": (d_p, d_a),
            "w_v": (d_p, d_s),
            "w_g": (d_s, d_s),
            "b_g": (d_s,),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise FusionError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        if d_a == 0:
            raise FusionError("attention dim must be positive")

    @property
    def d_s(self) -> int:
        return self.w_q.shape[0]

    @property
    def d_p(self) -> int:
        return self.w_k.shape[0]

    @property
    def d_a(self) -> int:
        return self.w_q.shape[1]

    @classmethod
    def identity(cls, d: int, gate_bias: float = 0.0) -> "FusionParams":
        """No projections: Q = Hs, K = V = Hp, gate acting on Hca alone."""
        eye = np.eye(d)
        return cls(eye, eye, eye, eye, np.full(d, float(gate_bias)))

    @classmethod
    def random(
        cls,
        d_s: int,
        d_p: int,
        d_a: int,
        rng: Optional[np.random.Generator] = None,
        scale: float = 0.5,
    ) -> "FusionParams":
        rng = rng or np.random.default_rng(0)
        return cls(
            w_q=scale * rng.standard_normal((d_s, d_a)),
            w_k=scale * rng.standard_normal((d_p, d_a)),
            w_v=scale * rng.standard_normal((d_p, d_s)),
            w_g=scale * rng.standard_normal((d_s, d_s)),
            b_g=scale * rng.standard_normal(d_s),
        )

    def replace(self, **arrays) -> "FusionParams":
        values = {name: getattr(self, name) for name in PARAM_NAMES}
        values.update(arrays)
        return FusionParams(**values)

    def as_dict(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}


def _inputs(Hs, Hp, p: FusionParams):
    Hs = _matrix("Hs", Hs)
    Hp = _matrix("Hp", Hp)
    if Hs.shape[0] != Hp.shape[0]:
        raise FusionError(f"Hs has {Hs.shape[0]} frames but Hp has {Hp.shape[0]}")
    if Hs.shape[0] == 0:
        raise FusionError("feature matrices have no frames")
    if Hs.shape[1] != p.d_s:
        raise FusionError(f"Hs has dim {Hs.shape[1]}, parameters expect d_s={p.d_s}")
    if Hp.shape[1] != p.d_p:
        raise FusionError(f"Hp has dim {Hp.shape[1]}, parameters expect d_p={p.d_p}")
    return Hs, Hp


def attention_weights(Hs, Hp, p: FusionParams) -> np.ndarray:
    """T x T row-stochastic matrix."""
    Hs, Hp = _inputs(Hs, Hp, p)
    scores = (Hs @ p.w_q) @ (Hp @ p.w_k).T / np.sqrt(p.d_a)
    return softmax(scores, axis=1)


def cross_attention(Hs, Hp, p: FusionParams) -> np.ndarray:
    Hs, Hp = _inputs(Hs, Hp, p)
    return attention_weights(Hs, Hp, p) @ (Hp @ p.w_v)


def gate(Hca, p: FusionParams) -> np.ndarray:
    return expit(Hca @ p.w_g + p.b_g)


def gated_fuse(Hs, Hca, p: FusionParams) -> np.ndarray:
    Hs = _matrix("Hs", Hs)
    Hca = _matrix("Hca", Hca)
    if Hs.shape != Hca.shape:
        raise FusionError(f"Hs {Hs.shape} and Hca {Hca.shape} differ in shape")
    if Hs.shape[1] != p.d_s:
        raise FusionError(f"features have dim {Hs.shape[1]}, parameters expect d_s={p.d_s}")
    return gate(Hca, p) * Hca + Hs


def fusion_forward(Hs, Hp, p: FusionParams) -> np.ndarray:
    Hs, Hp = _inputs(Hs, Hp, p)
    return gated_fuse(Hs, cross_attention(Hs, Hp, p), p)


def fusion_loss(Hs, Hp, p: FusionParams) -> float:
    return float(np.sum(fusion_forward(Hs, Hp, p) ** 2))


def fusion_gradients(Hs, Hp, p: FusionParams) -> Dict[str, np.ndarray]:
    """Analytic gradients of sum(Ho**2) with respect to both inputs and every parameter."""
    Hs, Hp = _inputs(Hs, Hp, p)
    scale = 1.0 / np.sqrt(p.d_a)

    Q = Hs @ p.w_q
    K = Hp @ p.w_k
    V = Hp @ p.w_v
    A = softmax(Q @ K.T * scale, axis=1)
    C = A @ V
    G = expit(C @ p.w_g + p.b_g)
    O = G * C + Hs

    dO = 2.0 * O
    dZ = dO * C * G * (1.0 - G)
    dC = dO * G + dZ @ p.w_g.T
    dA = dC @ V.T
    dS = A * (dA - np.sum(dA * A, axis=1, keepdims=True)) * scale
    dQ = dS @ K
    dK = dS.T @ Q
    dV = A.T @ dC

    return {
        "Hs": dO + dQ @ p.w_q.T,
        "Hp": dK @ p.w_k.T + dV @ p.w_v.T,
        "w_q": Hs.T @ dQ,
        "w_k": Hp.T @ dK,
        "w_v": Hp.T @ dV,
        "w_g": C.T @ dZ,
        "b_g": dZ.sum(axis=0),
    }
