"""Differentiable building blocks shared by all trainable modules."""

import math

import torch

from .checkpoint import (
    Checkpoint,
    load_checkpoint,
    load_module_tensors,
    module_tensors,
    save_checkpoint,
)
from .gradcheck import GradCheckReport, grad_check
from .optim import AdamHyper, AdamState, adam_step, adam_update_
from .seqmodel import (
    SeqModel,
    SeqModelConfig,
    init_params,
    is_frozen,
    param_count,
    reinit_,
    seq2seq_forward,
    set_frozen,
    sinusoidal_table,
)


def gaussian_nll(x: torch.Tensor, mu: torch.Tensor, var: torch.Tensor) -> torch.Tensor:
    """Sum of elementwise diagonal-Gaussian negative log-likelihoods."""
    return 0.5 * (torch.log(2 * math.pi * var) + (x - mu) ** 2 / var).sum()


__all__ = [
    "AdamHyper",
    "AdamState",
    "Checkpoint",
    "GradCheckReport",
    "SeqModel",
    "SeqModelConfig",
    "adam_step",
    "adam_update_",
    "gaussian_nll",
    "grad_check",
    "init_params",
    "is_frozen",
    "load_checkpoint",
    "load_module_tensors",
    "module_tensors",
    "param_count",
    "reinit_",
    "save_checkpoint",
    "seq2seq_forward",
    "set_frozen",
    "sinusoidal_table",
]
