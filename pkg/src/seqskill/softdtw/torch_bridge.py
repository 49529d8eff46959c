"""Autograd bridge: the alignment kernels as differentiable torch ops.

The kernels operate on numpy cost matrices; this module wraps them in a
torch.autograd.Function so that any cost matrix built from torch ops
(pairwise metric, token negative log-likelihood, ...) receives exact
gradients through the alignment value.
"""

import numpy as np
import torch

from ..errors import InputError
from ._backend import kernels


class _SoftDtwCostFn(torch.autograd.Function):
    @staticmethod
    def forward(ctx, cost: torch.Tensor, gamma: float):
        cost_np = cost.detach().cpu().numpy().astype(np.float64)
        if not np.all(np.isfinite(cost_np)):
            raise InputError("cost matrix contains non-finite entries")
        R = kernels.forward(cost_np, float(gamma))
        m, n = cost_np.shape
        ctx.cost_np = cost_np
        ctx.R = R
        ctx.gamma = float(gamma)
        ctx.meta = (cost.dtype, cost.device)
        return cost.new_tensor(R[m, n])

    @staticmethod
    def backward(ctx, grad_output):
        E = kernels.backward(ctx.cost_np, ctx.R, ctx.gamma)
        dtype, device = ctx.meta
        grad = torch.from_numpy(E).to(dtype=dtype, device=device)
        return grad_output * grad, None


def sdtw_of_cost(cost: torch.Tensor, gamma: float) -> torch.Tensor:
    """Differentiable alignment value of a 2-D torch cost matrix."""
    if cost.ndim != 2 or cost.numel() == 0:
        raise InputError("cost matrix must be a non-empty 2-D tensor")
    if not (gamma > 0):
        raise InputError(f"gamma must be positive, got {gamma}")
    return _SoftDtwCostFn.apply(cost, gamma)


def sq_euclidean_cost(x: torch.Tensor, y: torch.Tensor) -> torch.Tensor:
    """Pairwise squared-euclidean cost, smooth everywhere."""
    if x.shape[-1] != y.shape[-1]:
        raise InputError(
            f"feature dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}"
        )
    sq = (
        (x * x).sum(-1).unsqueeze(-1)
        + (y * y).sum(-1).unsqueeze(-2)
        - 2.0 * x @ y.transpose(-2, -1)
    )
    return sq.clamp_min(0.0)


def sdtw_pair(x: torch.Tensor, y: torch.Tensor, gamma: float) -> torch.Tensor:
    """Alignment discrepancy between two (T, D) torch sequences."""
    return sdtw_of_cost(sq_euclidean_cost(x, y), gamma)


def token_nll_cost(tokens: torch.Tensor, log_probs: torch.Tensor) -> torch.Tensor:
    """Cost of matching observed token i against predicted step j.

    tokens: (n,) integer ids; log_probs: (n', V) log-distributions per
    predicted step. Entry (i, j) = -log_probs[j, tokens[i]], which is
    non-negative and differentiable in the predictions.
    """
    if tokens.ndim != 1 or log_probs.ndim != 2:
        raise InputError("expected tokens (n,) and log_probs (n', V)")
    return -log_probs[:, tokens.long()].transpose(0, 1)
