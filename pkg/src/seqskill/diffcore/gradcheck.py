"""Finite-difference harness for verifying analytic gradients."""

from dataclasses import dataclass, field

import numpy as np
import torch


@dataclass
class GradCheckReport:
    max_rel_err: float
    mean_rel_err: float
    n_coords: int
    tol: float
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_rel_err < self.tol


def grad_check(
    loss_fn,
    params: list[torch.Tensor],
    eps: float = 1e-5,
    tol: float = 1e-3,
    n_coords: int = 60,
    seed: int = 0,
) -> GradCheckReport:
    """Compare autograd gradients of a scalar loss against central differences.

    ``loss_fn`` must be a deterministic zero-argument callable reading the
    current values of ``params``. A random subsample of at least ``n_coords``
    coordinates across all tensors is perturbed. Reports failures instead of
    raising.
    """
    loss = loss_fn()
    grads = torch.autograd.grad(loss, params, allow_unused=True)
    grads = [
        g if g is not None else torch.zeros_like(p) for g, p in zip(grads, params)
    ]

    sizes = [p.numel() for p in params]
    total = sum(sizes)
    rng = np.random.default_rng(seed)
    n = min(n_coords, total)
    coords = rng.choice(total, size=n, replace=False)
    offsets = np.cumsum([0] + sizes)

    rel_errs = []
    failures = []
    for coord in sorted(int(c) for c in coords):
        ti = int(np.searchsorted(offsets, coord, side="right") - 1)
        flat_idx = coord - offsets[ti]
        p = params[ti]
        with torch.no_grad():
            orig = p.view(-1)[flat_idx].item()
            p.view(-1)[flat_idx] = orig + eps
            up = float(loss_fn())
            p.view(-1)[flat_idx] = orig - eps
            down = float(loss_fn())
            p.view(-1)[flat_idx] = orig
        fd = (up - down) / (2 * eps)
        an = float(grads[ti].view(-1)[flat_idx])
        rel = abs(an - fd) / max(abs(an), abs(fd), 1e-5)
        rel_errs.append(rel)
        if rel >= tol:
            failures.append(
                {"tensor": ti, "flat_index": int(flat_idx),
                 "analytic": an, "finite_diff": fd, "rel_err": rel}
            )
    return GradCheckReport(
        max_rel_err=float(np.max(rel_errs)),
        mean_rel_err=float(np.mean(rel_errs)),
        n_coords=n,
        tol=tol,
        failures=failures,
    )
