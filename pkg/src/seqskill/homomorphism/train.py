"""Cycle-reconstruction objective and the adapter training loop.

Robot trajectories travel f -> frozen encoders -> frozen decoders -> g and
must come back as themselves:

    cycle total = align(S, S') + align(A, A')

with an optional auxiliary term aligning the two pathways' latents, mirroring
the pre-training alignment term (config-gated, not part of the cycle total).
Gradients reach only adapter parameters; the backbone must be frozen.
"""

import copy
from dataclasses import dataclass

import numpy as np
import torch

from ..backbone.model import (
    Backbone,
    decode_text_batch,
    decode_video_batch,
    encode_text_vectors_batch,
    encode_video_batch,
)
from ..diffcore import AdamHyper, AdamState, adam_update_
from ..errors import ContractViolation, InputError, NumericalError
from ..seeding import derive_seed
from ..softdtw.torch_bridge import sdtw_of_cost, sq_euclidean_cost
from ..synthworld.generate import RobotTrajectory
from .model import AdapterConfig, Adapters, g_map_batch, init_adapters


@dataclass
class DistillConfig:
    epochs: int = 30
    batch_size: int = 16
    lr: float = 1e-3
    gamma: float = 0.1
    align_weight: float = 1.0  # 0 disables the auxiliary latent-alignment term
    divergence_factor: float = 10.0
    divergence_patience: int = 3


def _require_frozen(backbone: Backbone):
    if not backbone.frozen:
        raise ContractViolation(
            "backbone must be frozen before adapter training or cycle evaluation"
        )


def _stack_robot(batch: list[RobotTrajectory]):
    s = torch.stack(
        [torch.from_numpy(np.ascontiguousarray(tr.s)).to(torch.float64) for tr in batch]
    )
    a = torch.stack(
        [torch.from_numpy(np.ascontiguousarray(tr.a)).to(torch.float64) for tr in batch]
    )
    return s, a


def cycle_forward(
    adapters: Adapters,
    backbone: Backbone,
    s: torch.Tensor,
    a: torch.Tensor,
    gamma: float,
):
    """Shared forward pass; returns per-batch mean terms and the latents."""
    _require_frozen(backbone)
    v_hat = adapters.f_s(s)
    w_hat = adapters.f_a(a)
    z_v = encode_video_batch(backbone, v_hat)
    z_w = encode_text_vectors_batch(backbone, w_hat)
    w_prime = decode_text_batch(backbone, z_v, teacher_vectors=w_hat)
    v_prime, _ = decode_video_batch(backbone, z_w, teacher_frames=v_hat)
    s_rec, a_rec = g_map_batch(adapters, v_prime, w_prime, s0=s[:, 0])

    state_terms, action_terms, align_terms = [], [], []
    for i in range(s.shape[0]):
        state_terms.append(sdtw_of_cost(sq_euclidean_cost(s[i], s_rec[i]), gamma))
        action_terms.append(sdtw_of_cost(sq_euclidean_cost(a[i], a_rec[i]), gamma))
        align_terms.append(sdtw_of_cost(sq_euclidean_cost(z_v[i], z_w[i]), gamma))
    return {
        "state": torch.stack(state_terms).mean(),
        "action": torch.stack(action_terms).mean(),
        "align": torch.stack(align_terms).mean(),
        "z_v": z_v,
        "z_w": z_w,
    }


def cycle_loss(
    adapters: Adapters,
    backbone: Backbone,
    s,
    a,
    gamma: float = 0.1,
):
    """Reconstruction objective: (total, state_term, action_term).

    total is exactly state_term + action_term. Accepts one trajectory
    (2-D arrays) or a batch (3-D); batches are averaged.
    """
    if isinstance(s, np.ndarray):
        s = torch.from_numpy(np.ascontiguousarray(s)).to(torch.float64)
    if isinstance(a, np.ndarray):
        a = torch.from_numpy(np.ascontiguousarray(a)).to(torch.float64)
    if s.ndim == 2:
        s = s.unsqueeze(0)
        a = a.unsqueeze(0)
    parts = cycle_forward(adapters, backbone, s, a, gamma)
    total = parts["state"] + parts["action"]
    if not torch.isfinite(total):
        raise NumericalError(
            "non-finite cycle loss",
            diagnostics={"state": float(parts["state"]), "action": float(parts["action"])},
        )
    return total, parts["state"], parts["action"]


def distill(
    robot_dataset: list[RobotTrajectory],
    backbone: Backbone,
    adapter_config: AdapterConfig,
    train_config: DistillConfig,
    seed: int,
    snapshot_epochs: tuple[int, ...] = (),
    snapshot_cb=None,
):
    """Train the adapters against the frozen backbone.

    ``snapshot_cb(epoch, adapters)`` is invoked after each epoch listed in
    ``snapshot_epochs`` (1-based counts of completed epochs) with a deep copy,
    so one run yields the 1/5/10-epoch variants of the evaluation protocol.
    Returns (adapters, curve).
    """
    if not robot_dataset:
        raise InputError("empty robot dataset")
    _require_frozen(backbone)
    adapters = init_adapters(
        adapter_config, backbone, seed=derive_seed(seed, "adapters-init")
    )
    curve: list[dict] = []
    if train_config.epochs == 0:
        return adapters, curve

    params = [p for p in adapters.parameters() if p.requires_grad]
    state = AdamState.init(params, lr=train_config.lr)
    hyper = AdamHyper()
    n = len(robot_dataset)
    bsz = min(train_config.batch_size, n)

    for epoch in range(train_config.epochs):
        order = np.random.default_rng(
            derive_seed(seed, "distill-shuffle", epoch)
        ).permutation(n)
        sums = {"total": 0.0, "state": 0.0, "action": 0.0, "align": 0.0}
        count = 0
        for lo in range(0, n, bsz):
            batch = [robot_dataset[i] for i in order[lo : lo + bsz]]
            s, a = _stack_robot(batch)
            parts = cycle_forward(adapters, backbone, s, a, train_config.gamma)
            objective = parts["state"] + parts["action"]
            if train_config.align_weight > 0:
                objective = objective + train_config.align_weight * parts["align"]
            if not torch.isfinite(objective):
                raise NumericalError(
                    "non-finite distillation objective",
                    diagnostics={k: float(parts[k]) for k in ("state", "action", "align")},
                )
            for p in params:
                p.grad = None
            objective.backward()
            state = adam_update_(params, state, hyper)
            sums["total"] += float((parts["state"] + parts["action"]).detach()) * len(batch)
            for k in ("state", "action", "align"):
                sums[k] += float(parts[k].detach()) * len(batch)
            count += len(batch)
        curve.append({"epoch": epoch, **{k: v / count for k, v in sums.items()}})
        if (epoch + 1) in snapshot_epochs and snapshot_cb is not None:
            snapshot_cb(epoch + 1, copy.deepcopy(adapters))
        from ..backbone.train import _check_divergence

        _check_divergence(
            [r["total"] for r in curve],
            train_config.divergence_factor,
            train_config.divergence_patience,
        )
    return adapters, curve
