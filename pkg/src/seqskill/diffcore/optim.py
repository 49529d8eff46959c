"""Adaptive-moment optimizer step as a pure function over tensor lists."""

from dataclasses import dataclass, field

import torch

from ..errors import InputError, NumericalError


@dataclass
class AdamHyper:
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass
class AdamState:
    """Per-tensor first/second moment accumulators plus the step counter."""

    m: list[torch.Tensor]
    v: list[torch.Tensor]
    step: int
    lr: float

    @classmethod
    def init(cls, params: list[torch.Tensor], lr: float) -> "AdamState":
        return cls(
            m=[torch.zeros_like(p) for p in params],
            v=[torch.zeros_like(p) for p in params],
            step=0,
            lr=float(lr),
        )


def adam_step(
    params: list[torch.Tensor],
    grads: list[torch.Tensor | None],
    state: AdamState,
    hyper: AdamHyper = AdamHyper(),
) -> tuple[list[torch.Tensor], AdamState]:
    """One bias-corrected adaptive-moment update.

    Returns new parameter tensors and a new state; inputs are not mutated.
    A ``None`` gradient is treated as zero (parameter untouched by the loss).
    Raises NumericalError with diagnostics if any gradient is non-finite.
    """
    if len(params) != len(grads) or len(params) != len(state.m):
        raise InputError("params, grads and state must have matching lengths")
    t = state.step + 1
    b1, b2 = hyper.beta1, hyper.beta2
    new_params, new_m, new_v = [], [], []
    with torch.no_grad():
        for idx, (p, g, m, v) in enumerate(zip(params, grads, state.m, state.v)):
            if g is None:
                g = torch.zeros_like(p)
            if g.shape != p.shape:
                raise InputError(
                    f"grad {idx} shape {tuple(g.shape)} != param {tuple(p.shape)}"
                )
            if not torch.isfinite(g).all():
                raise NumericalError(
                    "non-finite gradient",
                    diagnostics={
                        "param_index": idx,
                        "param_shape": tuple(p.shape),
                        "bad_entries": int((~torch.isfinite(g)).sum()),
                    },
                )
            m2 = b1 * m + (1 - b1) * g
            v2 = b2 * v + (1 - b2) * g * g
            m_hat = m2 / (1 - b1**t)
            v_hat = v2 / (1 - b2**t)
            new_params.append(p - state.lr * m_hat / (v_hat.sqrt() + hyper.eps))
            new_m.append(m2)
            new_v.append(v2)
    return new_params, AdamState(m=new_m, v=new_v, step=t, lr=state.lr)


def adam_update_(
    params: list[torch.Tensor], state: AdamState, hyper: AdamHyper = AdamHyper()
) -> AdamState:
    """In-place convenience used by training loops: consumes ``p.grad``.

    Frozen parameter sets are expected to be excluded from ``params``
    entirely; only the listed tensors are touched.
    """
    grads = [p.grad for p in params]
    new_params, new_state = adam_step(params, grads, state, hyper)
    with torch.no_grad():
        for p, p2 in zip(params, new_params):
            p.copy_(p2)
    return new_state
