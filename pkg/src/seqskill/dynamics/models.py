"""Single-step dynamics models: deterministic, probabilistic, and ensembles.

Four families follow the usual taxonomy: DNN (point predictions, squared
error), PNN (diagonal-Gaussian head, negative log-likelihood), and their
bootstrap ensembles DE and PE whose effective prediction is the arithmetic
mean of member outputs. All models operate on states normalized to zero
mean / unit variance (statistics fit on training data and shared by every
method); the wrappers accept and return raw states.
"""

import copy
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from ..diffcore import AdamHyper, AdamState, adam_update_, gaussian_nll, reinit_
from ..errors import ConfigError, InputError, NumericalError
from ..seeding import derive_seed
from ..synthworld.generate import RobotTrajectory

KINDS = ("PNN", "DNN", "DE", "PE", "V2S")
PROBABILISTIC = {"PNN": True, "DNN": False, "DE": False, "PE": True}
ENSEMBLE = {"PNN": 1, "DNN": 1}


@dataclass
class DynModelSpec:
    kind: str
    ensemble_size: int = 5
    hidden: int = 64
    layers: int = 2
    lr: float = 1e-3
    batch_size: int = 256
    var_floor: float = 1e-4

    def validate(self) -> "DynModelSpec":
        if self.kind not in ("PNN", "DNN", "DE", "PE"):
            raise ConfigError(f"unknown baseline kind {self.kind!r}")
        if self.kind in ("DE", "PE") and self.ensemble_size < 2:
            raise ConfigError("ensembles need at least 2 members")
        return self

    @property
    def probabilistic(self) -> bool:
        return PROBABILISTIC[self.kind]

    @property
    def n_members(self) -> int:
        return self.ensemble_size if self.kind in ("DE", "PE") else 1


@dataclass
class Normalizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, trajectories: list[RobotTrajectory]) -> "Normalizer":
        states = np.concatenate([tr.s for tr in trajectories])
        std = states.std(axis=0)
        return cls(mean=states.mean(axis=0), std=np.maximum(std, 1e-6))

    def apply(self, s: np.ndarray) -> np.ndarray:
        return (s - self.mean) / self.std

    def invert(self, s: np.ndarray) -> np.ndarray:
        return s * self.std + self.mean

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, d) -> "Normalizer":
        return cls(mean=np.asarray(d["mean"]), std=np.asarray(d["std"]))


class _StepNet(nn.Module):
    def __init__(self, ds: int, da: int, hidden: int, layers: int, probabilistic: bool):
        super().__init__()
        dims = [ds + da] + [hidden] * layers
        blocks = []
        for i in range(layers):
            blocks += [nn.Linear(dims[i], dims[i + 1]), nn.Tanh()]
        self.trunk = nn.Sequential(*blocks)
        self.head = nn.Linear(hidden, 2 * ds if probabilistic else ds)
        self.double()

    def forward(self, s, a):
        return self.head(self.trunk(torch.cat([s, a], dim=-1)))


class DynModel:
    """Trained baseline: one or more step networks plus the normalizer."""

    def __init__(self, spec: DynModelSpec, members: list[_StepNet], normalizer: Normalizer):
        self.spec = spec
        self.members = members
        self.normalizer = normalizer

    def clone(self) -> "DynModel":
        return DynModel(self.spec, copy.deepcopy(self.members), self.normalizer)

    def _member_outputs(self, s_norm: torch.Tensor, a: torch.Tensor):
        mus, vars_ = [], []
        ds = s_norm.shape[-1]
        for net in self.members:
            out = net(s_norm, a)
            if self.spec.probabilistic:
                mu, raw = out[..., :ds], out[..., ds:]
                var = torch.nn.functional.softplus(raw) + self.spec.var_floor
            else:
                mu, var = out, None
            mus.append(mu)
            vars_.append(var)
        return mus, vars_

    def predict_step(self, s_t: np.ndarray, a_t: np.ndarray):
        """Raw next-state mean and (for probabilistic kinds) raw-space variance."""
        s_t = np.asarray(s_t, dtype=np.float64)
        a_t = np.asarray(a_t, dtype=np.float64)
        if s_t.shape[-1] != self.normalizer.mean.shape[0]:
            raise InputError("state dimension mismatch")
        squeeze = s_t.ndim == 1
        if squeeze:
            s_t, a_t = s_t[None], a_t[None]
        with torch.no_grad():
            sn = torch.from_numpy(self.normalizer.apply(s_t))
            at = torch.from_numpy(a_t)
            mus, vars_ = self._member_outputs(sn, at)
            mu_stack = torch.stack(mus)
            mean_norm = mu_stack.mean(dim=0)
            if self.spec.probabilistic:
                aleatoric = torch.stack(vars_).mean(dim=0)
                spread = mu_stack.pow(2).mean(dim=0) - mean_norm.pow(2)
                var_norm = (aleatoric + spread).clamp_min(self.spec.var_floor)
            else:
                var_norm = None
        mean = self.normalizer.invert(mean_norm.numpy())
        var = (
            var_norm.numpy() * self.normalizer.std**2
            if var_norm is not None
            else None
        )
        if squeeze:
            mean = mean[0]
            var = var[0] if var is not None else None
        return mean, var


def _transitions(trajectories: list[RobotTrajectory], normalizer: Normalizer):
    s_in, a_in, s_out = [], [], []
    for tr in trajectories:
        s_in.append(normalizer.apply(tr.s[:-1]))
        a_in.append(tr.a)
        s_out.append(normalizer.apply(tr.s[1:]))
    return (
        torch.from_numpy(np.concatenate(s_in)),
        torch.from_numpy(np.concatenate(a_in)),
        torch.from_numpy(np.concatenate(s_out)),
    )


def train_baseline(
    spec: DynModelSpec,
    trajectories: list[RobotTrajectory],
    epochs: int,
    seed: int,
    normalizer: Normalizer | None = None,
    snapshot_epochs: tuple[int, ...] = (),
    snapshot_cb=None,
) -> DynModel:
    """Train one baseline family.

    Ensemble members train on independent bootstrap resamples (trajectory
    granularity) with member-specific seeds. ``snapshot_cb(epoch, model)``
    receives a deep copy after each completed epoch in ``snapshot_epochs``.
    """
    spec.validate()
    if not trajectories:
        raise InputError("empty training set")
    if epochs < 0:
        raise InputError("epochs must be >= 0")
    if normalizer is None:
        normalizer = Normalizer.fit(trajectories)
    ds = trajectories[0].s.shape[1]
    da = trajectories[0].a.shape[1]

    members, datasets = [], []
    n = len(trajectories)
    for b in range(spec.n_members):
        net = _StepNet(ds, da, spec.hidden, spec.layers, spec.probabilistic)
        reinit_(net, derive_seed(seed, "member-init", spec.kind, b))
        members.append(net)
        if spec.n_members > 1:
            rng = np.random.default_rng(derive_seed(seed, "bootstrap", spec.kind, b))
            picks = rng.integers(0, n, size=n)
            datasets.append(_transitions([trajectories[i] for i in picks], normalizer))
        else:
            datasets.append(_transitions(trajectories, normalizer))

    model = DynModel(spec, members, normalizer)
    states = [
        AdamState.init([p for p in net.parameters() if p.requires_grad], lr=spec.lr)
        for net in members
    ]
    hyper = AdamHyper()

    for epoch in range(epochs):
        for b, net in enumerate(members):
            s_in, a_in, s_out = datasets[b]
            order = np.random.default_rng(
                derive_seed(seed, "dyn-shuffle", spec.kind, b, epoch)
            ).permutation(len(s_in))
            params = [p for p in net.parameters() if p.requires_grad]
            for lo in range(0, len(order), spec.batch_size):
                idx = torch.from_numpy(order[lo : lo + spec.batch_size])
                out = net(s_in[idx], a_in[idx])
                if spec.probabilistic:
                    mu, raw = out[..., :ds], out[..., ds:]
                    var = torch.nn.functional.softplus(raw) + spec.var_floor
                    loss = gaussian_nll(s_out[idx], mu, var) / len(idx)
                else:
                    loss = ((s_out[idx] - out) ** 2).sum(-1).mean()
                if not torch.isfinite(loss):
                    raise NumericalError(
                        "non-finite baseline loss",
                        diagnostics={"kind": spec.kind, "member": b, "epoch": epoch},
                    )
                for p in params:
                    p.grad = None
                loss.backward()
                states[b] = adam_update_(params, states[b], hyper)
        if (epoch + 1) in snapshot_epochs and snapshot_cb is not None:
            snapshot_cb(epoch + 1, model.clone())
    return model
