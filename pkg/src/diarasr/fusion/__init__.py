from .attention import (
    FusionParams,
    attention_weights,
    cross_attention,
    fusion_forward,
    fusion_gradients,
    fusion_loss,
    gate,
    gated_fuse,
)
from .gradcheck import fusion_grad_check, numeric_gradients, relative_error, scalar_fusion_forward

__all__ = [
    "FusionParams",
    "attention_weights",
    "cross_attention",
    "fusion_forward",
    "fusion_gradients",
    "fusion_loss",
    "gate",
    "gated_fuse",
    "fusion_grad_check",
    "numeric_gradients",
    "relative_error",
    "scalar_fusion_forward",
]
