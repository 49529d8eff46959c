"""Differentiable sequence alignment core."""

from .core import (
    METRICS,
    CostMatrix,
    SoftDtwResult,
    backend_name,
    pairwise_cost,
    softdtw_grad,
    softdtw_loss,
    softdtw_value,
)

__all__ = [
    "METRICS",
    "CostMatrix",
    "SoftDtwResult",
    "backend_name",
    "pairwise_cost",
    "softdtw_grad",
    "softdtw_loss",
    "softdtw_value",
]
