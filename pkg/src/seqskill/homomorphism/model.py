"""State/action adapters into and out of the frozen backbone's spaces.

The forward maps send robot states into frame-embedding space (f_s) and
robot actions into token-embedding space (f_a); the inverse maps g_s and
g_a reconstruct state and action sequences from decoder outputs. Decoder
token distributions are soft-embedded through a frozen copy of the
backbone's token table before entering g_a. g_s optionally receives the
start state, zero-padded into frame space, prepended to its input context.
"""

from dataclasses import asdict, dataclass

import numpy as np
import torch
from torch import nn

from ..backbone.model import Backbone, EventLatents, encode_video_batch
from ..diffcore import (
    SeqModel,
    SeqModelConfig,
    is_frozen,
    load_checkpoint,
    load_module_tensors,
    module_tensors,
    reinit_,
    save_checkpoint,
)
from ..errors import ConfigError, InputError


@dataclass
class AdapterConfig:
    state_dim: int = 8
    action_dim: int = 4
    frame_dim: int = 16
    token_dim: int = 16
    vocab: int = 32
    frame_len: int = 40  # f_s output rows
    token_len: int = 24  # f_a output rows
    state_len: int = 60  # g_s output rows
    action_len: int = 59  # g_a output rows
    width: int = 32
    depth: int = 1
    head_count: int = 2
    ffn_mult: int = 2
    action_bound: float = 1.0
    max_len: int = 512

    def validate(self) -> "AdapterConfig":
        for name in (
            "state_dim",
            "action_dim",
            "frame_dim",
            "token_dim",
            "frame_len",
            "token_len",
            "state_len",
            "action_len",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"AdapterConfig.{name} must be >= 1")
        if self.state_dim > self.frame_dim:
            raise ConfigError("state_dim must fit inside frame_dim for start-state lift")
        if self.action_bound <= 0:
            raise ConfigError("action_bound must be positive")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AdapterConfig":
        return cls(**d).validate()


class Adapters(nn.Module):
    """The four homomorphism maps plus a frozen token-table copy."""

    def __init__(self, config: AdapterConfig, seed: int = 0):
        super().__init__()
        self.config = config.validate()
        c = config
        base = dict(
            width=c.width,
            depth=c.depth,
            head_count=c.head_count,
            ffn_mult=c.ffn_mult,
            max_len=c.max_len,
        )
        self.f_s = SeqModel(
            SeqModelConfig(d_in=c.state_dim, d_out=c.frame_dim, out_len=c.frame_len, **base)
        )
        self.f_a = SeqModel(
            SeqModelConfig(d_in=c.action_dim, d_out=c.token_dim, out_len=c.token_len, **base)
        )
        self.g_s = SeqModel(
            SeqModelConfig(d_in=c.frame_dim, d_out=c.state_dim, out_len=c.state_len, **base)
        )
        self.g_a = SeqModel(
            SeqModelConfig(d_in=c.token_dim, d_out=c.action_dim, out_len=c.action_len, **base)
        )
        self.register_buffer(
            "token_table", torch.zeros(c.vocab, c.token_dim, dtype=torch.float64)
        )
        self.double()
        reinit_(self, seed)

    @property
    def frozen(self) -> bool:
        return is_frozen(self)


def init_adapters(config: AdapterConfig, backbone: Backbone, seed: int) -> Adapters:
    if backbone.config.frame_dim != config.frame_dim:
        raise ConfigError("adapter frame_dim must match the backbone")
    if backbone.config.token_dim != config.token_dim:
        raise ConfigError("adapter token_dim must match the backbone")
    if backbone.config.vocab != config.vocab:
        raise ConfigError("adapter vocab must match the backbone")
    adapters = Adapters(config, seed=seed)
    with torch.no_grad():
        adapters.token_table.copy_(backbone.token_embed.weight.detach())
    return adapters


def _tensor2or3(x, d, what):
    if isinstance(x, np.ndarray):
        x = torch.from_numpy(np.ascontiguousarray(x)).to(torch.float64)
    squeeze = x.ndim == 2
    if squeeze:
        x = x.unsqueeze(0)
    if x.ndim != 3 or x.shape[1] < 1:
        raise InputError(f"{what} must be a non-empty 2-D or batched 3-D array")
    if x.shape[-1] != d:
        raise InputError(f"{what} feature dim {x.shape[-1]} != expected {d}")
    return x, squeeze


def f_map_batch(adapters: Adapters, s: torch.Tensor, a: torch.Tensor):
    sb, _ = _tensor2or3(s, adapters.config.state_dim, "state sequence")
    ab, _ = _tensor2or3(a, adapters.config.action_dim, "action sequence")
    return adapters.f_s(sb), adapters.f_a(ab)


def f_map(adapters: Adapters, s, a):
    """Map one robot trajectory into (frame-space, token-space) sequences."""
    sb, _ = _tensor2or3(s, adapters.config.state_dim, "state sequence")
    ab, _ = _tensor2or3(a, adapters.config.action_dim, "action sequence")
    v_hat, w_hat = adapters.f_s(sb), adapters.f_a(ab)
    return v_hat[0], w_hat[0]


def lift_state(adapters: Adapters, s0: torch.Tensor) -> torch.Tensor:
    """Zero-pad a batch of start states (B, ds) into frame space (B, Dv)."""
    b = s0.shape[0]
    out = torch.zeros(b, adapters.config.frame_dim, dtype=torch.float64)
    out[:, : adapters.config.state_dim] = s0
    return out


def soft_embed(adapters: Adapters, w_prime: torch.Tensor) -> torch.Tensor:
    """Distribution rows (.., n, vocab) -> token-space vectors (.., n, Dw)."""
    if w_prime.shape[-1] == adapters.config.vocab:
        return w_prime @ adapters.token_table
    if w_prime.shape[-1] == adapters.config.token_dim:
        return w_prime
    raise InputError(
        f"expected vocab ({adapters.config.vocab}) or token-dim "
        f"({adapters.config.token_dim}) columns, got {w_prime.shape[-1]}"
    )


def g_map_batch(
    adapters: Adapters,
    v_prime: torch.Tensor,
    w_prime: torch.Tensor,
    s0: torch.Tensor | None = None,
):
    vb, _ = _tensor2or3(v_prime, adapters.config.frame_dim, "regenerated frames")
    if s0 is not None:
        vb = torch.cat([lift_state(adapters, s0).unsqueeze(1), vb], dim=1)
    w_vec = soft_embed(adapters, w_prime)
    wb, _ = _tensor2or3(w_vec, adapters.config.token_dim, "regenerated token vectors")
    s_rec = adapters.g_s(vb)
    bound = adapters.config.action_bound
    a_rec = adapters.g_a(wb).clamp(-bound, bound)
    return s_rec, a_rec


def g_map(adapters: Adapters, v_prime, w_prime, s0=None):
    """Reconstruct one (state, action) trajectory from decoder outputs.

    ``w_prime`` may be per-step token distributions or token-space vectors;
    actions are clipped to the environment bound. ``s0`` (ds,) optionally
    prepends the lifted start state to the g_s input context.
    """
    vb, _ = _tensor2or3(v_prime, adapters.config.frame_dim, "regenerated frames")
    if isinstance(w_prime, np.ndarray):
        w_prime = torch.from_numpy(np.ascontiguousarray(w_prime)).to(torch.float64)
    if w_prime.ndim == 2:
        w_prime = w_prime.unsqueeze(0)
    if s0 is not None:
        if isinstance(s0, np.ndarray):
            s0 = torch.from_numpy(np.ascontiguousarray(s0)).to(torch.float64)
        s0 = s0.reshape(1, -1)
    s_rec, a_rec = g_map_batch(adapters, vb, w_prime, s0=s0)
    return s_rec[0], a_rec[0]


def embed_robot_skills(adapters: Adapters, backbone: Backbone, s, a=None) -> EventLatents:
    """Event latents of a robot trajectory via the state pathway.

    The action pathway latents exist too (enc_text of f_a output) and are
    aligned with these during distillation; the state pathway is the
    canonical skill embedding.
    """
    sb, _ = _tensor2or3(s, adapters.config.state_dim, "state sequence")
    z = encode_video_batch(backbone, adapters.f_s(sb))
    return EventLatents(z=z[0], source="robot")


def embed_robot_skills_batch(
    adapters: Adapters, backbone: Backbone, s: torch.Tensor
) -> torch.Tensor:
    sb, _ = _tensor2or3(s, adapters.config.state_dim, "state sequence")
    return encode_video_batch(backbone, adapters.f_s(sb))


def save_adapters(adapters: Adapters, path, seed: int) -> None:
    save_checkpoint(
        path,
        config={"kind": "adapters", "config": adapters.config.to_dict()},
        seed=seed,
        tensors=module_tensors(adapters),
    )


def load_adapters(path) -> Adapters:
    ck = load_checkpoint(path)
    if ck.config.get("kind") != "adapters":
        raise InputError(f"checkpoint at {path} is not an adapters checkpoint")
    adapters = Adapters(AdapterConfig.from_dict(ck.config["config"]))
    load_module_tensors(adapters, ck.tensors)
    return adapters
