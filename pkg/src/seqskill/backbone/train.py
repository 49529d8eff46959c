"""Pre-training objective and loop for the event autoencoder.

The loss aligns three sequence pairs per trajectory: the frame sequence
against its regeneration from text-derived events, the two modality latent
sequences against each other, and the token sequence against the per-step
distributions decoded from video-derived events:

    total = frame_recon + alpha * align + beta * token_recon

Token reconstruction uses the per-step negative log-likelihood as the
pairwise cost, so all three terms are smoothed alignment discrepancies.
"""

from dataclasses import dataclass

import numpy as np
import torch

from ..diffcore import AdamHyper, AdamState, adam_update_
from ..errors import InputError, NumericalError
from ..seeding import derive_seed
from ..softdtw.torch_bridge import sdtw_of_cost, sq_euclidean_cost, token_nll_cost
from ..synthworld.generate import DemoTrajectory
from ..synthworld.motifs import PAD
from .model import (
    Backbone,
    BackboneConfig,
    decode_text_batch,
    decode_video_batch,
)


@dataclass
class PretrainConfig:
    epochs: int = 30
    batch_size: int = 16
    lr: float = 1e-3
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.1
    divergence_factor: float = 10.0
    divergence_patience: int = 3


def _stack_batch(bb: Backbone, batch: list[DemoTrajectory]):
    vs = torch.stack(
        [torch.from_numpy(np.ascontiguousarray(tr.v)).to(torch.float64) for tr in batch]
    )
    lens = [int(tr.w.shape[0]) for tr in batch]
    n_max = max(lens)
    w_pad = torch.full((len(batch), n_max), PAD, dtype=torch.long)
    for i, tr in enumerate(batch):
        w_pad[i, : lens[i]] = torch.from_numpy(np.ascontiguousarray(tr.w)).long()
    mask = torch.arange(n_max).unsqueeze(0) >= torch.tensor(lens).unsqueeze(1)
    return vs, w_pad, lens, mask


def pretrain_loss(
    bb: Backbone,
    batch: list[DemoTrajectory],
    alpha: float = 1.0,
    beta: float = 1.0,
    gamma: float = 0.1,
):
    """Batch-mean objective and its three components (as torch scalars)."""
    if not batch:
        raise InputError("empty batch")
    if alpha <= 0 or beta <= 0:
        raise InputError("loss weights alpha and beta must be positive")
    vs, w_pad, lens, mask = _stack_batch(bb, batch)

    z_v = bb.enc_video(vs)
    z_w = bb.enc_text(bb.token_embed(w_pad), key_padding_mask=mask)
    logp = decode_text_batch(bb, z_v, teacher_tokens=w_pad, log=True)
    mu, _ = decode_video_batch(bb, z_w, teacher_frames=vs)

    frame_terms, align_terms, token_terms = [], [], []
    for i in range(len(batch)):
        frame_terms.append(sdtw_of_cost(sq_euclidean_cost(vs[i], mu[i]), gamma))
        align_terms.append(sdtw_of_cost(sq_euclidean_cost(z_v[i], z_w[i]), gamma))
        token_terms.append(
            sdtw_of_cost(token_nll_cost(w_pad[i, : lens[i]], logp[i]), gamma)
        )
    frame = torch.stack(frame_terms).mean()
    align = torch.stack(align_terms).mean()
    token = torch.stack(token_terms).mean()
    total = frame + alpha * align + beta * token
    if not torch.isfinite(total):
        raise NumericalError(
            "non-finite pre-training loss",
            diagnostics={
                "frame_recon": float(frame),
                "align": float(align),
                "token_recon": float(token),
            },
        )
    components = {"frame_recon": frame, "align": align, "token_recon": token}
    return total, components


def _check_divergence(history, factor, patience):
    if len(history) <= patience:
        return
    initial = history[0]
    recent = history[-patience:]
    if all(h > factor * initial for h in recent):
        raise NumericalError(
            "training diverged",
            diagnostics={"initial": initial, "recent": recent},
        )


def pretrain(
    dataset: list[DemoTrajectory],
    model_config: BackboneConfig,
    train_config: PretrainConfig,
    seed: int,
):
    """Train the event autoencoder; returns (backbone, per-epoch curve).

    Deterministic in (dataset, configs, seed). A zero-epoch schedule returns
    the freshly initialized model and an empty curve.
    """
    if not dataset:
        raise InputError("empty training dataset")
    bb = Backbone(model_config, seed=derive_seed(seed, "backbone-init"))
    curve: list[dict] = []
    if train_config.epochs == 0:
        return bb, curve

    params = [p for p in bb.parameters() if p.requires_grad]
    if not params:
        raise InputError("all backbone parameters are frozen; nothing to train")
    state = AdamState.init(params, lr=train_config.lr)
    hyper = AdamHyper()
    n = len(dataset)
    bsz = min(train_config.batch_size, n)

    for epoch in range(train_config.epochs):
        order = np.random.default_rng(
            derive_seed(seed, "shuffle", epoch)
        ).permutation(n)
        sums = {"total": 0.0, "frame_recon": 0.0, "align": 0.0, "token_recon": 0.0}
        count = 0
        for lo in range(0, n, bsz):
            batch = [dataset[i] for i in order[lo : lo + bsz]]
            total, comps = pretrain_loss(
                bb,
                batch,
                alpha=train_config.alpha,
                beta=train_config.beta,
                gamma=train_config.gamma,
            )
            for p in params:
                p.grad = None
            total.backward()
            state = adam_update_(params, state, hyper)
            sums["total"] += float(total.detach()) * len(batch)
            for k in ("frame_recon", "align", "token_recon"):
                sums[k] += float(comps[k].detach()) * len(batch)
            count += len(batch)
        row = {"epoch": epoch, **{k: v / count for k, v in sums.items()}}
        curve.append(row)
        _check_divergence(
            [r["total"] for r in curve],
            train_config.divergence_factor,
            train_config.divergence_patience,
        )
    return bb, curve
