"""Cross-modal event autoencoder.

Two encoders compress a frame-embedding sequence and a commentary token
sequence into a fixed budget of event vectors; two decoders regenerate each
modality from the *other* modality's events. The frame decoder carries a
diagonal-Gaussian head (mean plus floored variance) and both decoders are
autoregressively conditioned on the previous output step: teacher forcing
during training, own-prediction feedback during generation.
"""

from dataclasses import asdict, dataclass

import numpy as np
import torch
from torch import nn

from ..diffcore import (
    SeqModel,
    SeqModelConfig,
    is_frozen,
    load_checkpoint,
    load_module_tensors,
    module_tensors,
    reinit_,
    save_checkpoint,
    set_frozen,
)
from ..errors import ConfigError, InputError
from ..synthworld.motifs import PAD

SOURCES = ("video", "text", "robot")


@dataclass
class EventLatents:
    """Fixed-count sequence of event vectors in the shared latent space."""

    z: torch.Tensor  # (K, event_dim)
    source: str

    def __post_init__(self):
        if self.source not in SOURCES:
            raise InputError(f"unknown latent source {self.source!r}")
        if self.z.ndim != 2:
            raise InputError("event latents must be a (K, event_dim) matrix")
        if not torch.isfinite(self.z).all():
            raise InputError("event latents contain non-finite entries")

    @property
    def array(self) -> np.ndarray:
        return self.z.detach().cpu().numpy()


@dataclass
class BackboneConfig:
    frame_dim: int = 16
    vocab: int = 32
    token_dim: int = 16
    event_count: int = 4
    event_dim: int = 32
    width: int = 32
    depth: int = 2
    head_count: int = 2
    ffn_mult: int = 2
    frame_decode_len: int = 40
    token_decode_len: int = 24
    var_floor: float = 1e-4
    max_len: int = 512

    def validate(self) -> "BackboneConfig":
        for name in (
            "frame_dim",
            "vocab",
            "token_dim",
            "event_count",
            "event_dim",
            "frame_decode_len",
            "token_decode_len",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"BackboneConfig.{name} must be >= 1")
        if self.var_floor <= 0:
            raise ConfigError("var_floor must be positive")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "BackboneConfig":
        return cls(**d).validate()


class Backbone(nn.Module):
    def __init__(self, config: BackboneConfig, seed: int = 0):
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
        self.token_embed = nn.Embedding(c.vocab, c.token_dim)
        self.enc_video = SeqModel(
            SeqModelConfig(d_in=c.frame_dim, d_out=c.event_dim, out_len=c.event_count, **base)
        )
        self.enc_text = SeqModel(
            SeqModelConfig(d_in=c.token_dim, d_out=c.event_dim, out_len=c.event_count, **base)
        )
        self.dec_text = SeqModel(
            SeqModelConfig(
                d_in=c.event_dim,
                d_out=c.vocab,
                out_len=c.token_decode_len,
                d_prev=c.token_dim,
                **base,
            )
        )
        self.dec_video = SeqModel(
            SeqModelConfig(
                d_in=c.event_dim,
                d_out=2 * c.frame_dim,
                out_len=c.frame_decode_len,
                d_prev=c.frame_dim,
                **base,
            )
        )
        self.double()
        reinit_(self, seed)

    @property
    def frozen(self) -> bool:
        return is_frozen(self)

    def freeze(self) -> "Backbone":
        set_frozen(self, True)
        return self


def _as_batch(x, d_expected: int, what: str) -> tuple[torch.Tensor, bool]:
    if isinstance(x, np.ndarray):
        x = torch.from_numpy(np.ascontiguousarray(x)).to(torch.float64)
    if x.ndim == 2:
        x = x.unsqueeze(0)
        squeeze = True
    elif x.ndim == 3:
        squeeze = False
    else:
        raise InputError(f"{what} must be 2-D or batched 3-D")
    if x.shape[1] < 1:
        raise InputError(f"{what} must be non-empty")
    if x.shape[-1] != d_expected:
        raise InputError(f"{what} feature dim {x.shape[-1]} != expected {d_expected}")
    if not torch.isfinite(x).all():
        raise InputError(f"{what} contains non-finite values")
    return x, squeeze


def encode_video_batch(bb: Backbone, v: torch.Tensor) -> torch.Tensor:
    vb, _ = _as_batch(v, bb.config.frame_dim, "frame sequence")
    return bb.enc_video(vb)


def encode_video(bb: Backbone, v) -> EventLatents:
    vb, _ = _as_batch(v, bb.config.frame_dim, "frame sequence")
    return EventLatents(z=bb.enc_video(vb)[0], source="video")


def embed_tokens(bb: Backbone, w) -> torch.Tensor:
    if isinstance(w, np.ndarray):
        w = torch.from_numpy(np.ascontiguousarray(w))
    w = w.long()
    if w.numel() == 0:
        raise InputError("token sequence is empty")
    if (w < 0).any() or (w >= bb.config.vocab).any():
        raise InputError("token id outside vocabulary")
    return bb.token_embed(w)


def encode_text_vectors_batch(
    bb: Backbone, wv: torch.Tensor, key_padding_mask: torch.Tensor | None = None
) -> torch.Tensor:
    """Encode sequences already living in token-embedding space."""
    wb, _ = _as_batch(wv, bb.config.token_dim, "token-vector sequence")
    return bb.enc_text(wb, key_padding_mask=key_padding_mask)


def encode_text(bb: Backbone, w) -> EventLatents:
    if isinstance(w, np.ndarray):
        w = torch.from_numpy(np.ascontiguousarray(w))
    w = torch.as_tensor(w).long()
    if w.ndim != 1:
        raise InputError("token sequence must be 1-D")
    if w.numel() == 0 or bool((w == PAD).all()):
        raise InputError("token sequence is empty or padding-only")
    vecs = embed_tokens(bb, w)
    return EventLatents(z=bb.enc_text(vecs.unsqueeze(0))[0], source="text")


def _text_teacher(bb: Backbone, w_padded: torch.Tensor) -> torch.Tensor:
    """Previous-token conditioning rows for the token decoder.

    Row 0 is the padding-token embedding ("no context"); row t embeds token
    t-1. Input (B, >=n'-1) padded ids; output (B, n', token_dim).
    """
    n_dec = bb.config.token_decode_len
    b = w_padded.shape[0]
    pad_col = torch.full((b, 1), PAD, dtype=torch.long)
    ids = torch.cat([pad_col, w_padded.long()], dim=1)
    if ids.shape[1] < n_dec:
        ids = torch.cat(
            [ids, torch.full((b, n_dec - ids.shape[1]), PAD, dtype=torch.long)], dim=1
        )
    return bb.token_embed(ids[:, :n_dec])


def decode_text_batch(
    bb: Backbone,
    z: torch.Tensor,
    teacher_tokens: torch.Tensor | None = None,
    teacher_vectors: torch.Tensor | None = None,
    log: bool = False,
) -> torch.Tensor:
    """Per-step token distributions (B, n', vocab) from event latents.

    Teacher forcing uses either padded token ids or raw token-space vectors;
    with neither, generation feeds back the soft embedding of each predicted
    distribution.
    """
    zb, _ = _as_batch(z, bb.config.event_dim, "event latents")
    n_dec = bb.config.token_decode_len
    b = zb.shape[0]
    if teacher_tokens is not None:
        prev = _text_teacher(bb, teacher_tokens)
    elif teacher_vectors is not None:
        start = bb.token_embed(torch.full((b, 1), PAD, dtype=torch.long))
        prev = torch.cat([start, teacher_vectors[:, : n_dec - 1]], dim=1)
        if prev.shape[1] < n_dec:
            reps = n_dec - prev.shape[1]
            prev = torch.cat([prev, prev[:, -1:].expand(b, reps, -1)], dim=1)
    else:
        return _generate_text(bb, zb, log=log)
    logits = bb.dec_text(zb, prev=prev)
    return torch.log_softmax(logits, dim=-1) if log else torch.softmax(logits, dim=-1)


def _generate_text(bb: Backbone, zb: torch.Tensor, log: bool = False) -> torch.Tensor:
    b = zb.shape[0]
    prev = bb.token_embed(torch.full((b, 1), PAD, dtype=torch.long))
    outs = []
    for t in range(bb.config.token_decode_len):
        logits = bb.dec_text(zb, out_len=t + 1, prev=prev)
        p = torch.softmax(logits[:, -1], dim=-1)
        outs.append(p)
        if t + 1 < bb.config.token_decode_len:
            prev = torch.cat([prev, (p @ bb.token_embed.weight).unsqueeze(1)], dim=1)
    probs = torch.stack(outs, dim=1)
    return torch.log(probs.clamp_min(1e-300)) if log else probs


def decode_text(bb: Backbone, z: EventLatents | torch.Tensor, **kw) -> torch.Tensor:
    zt = z.z if isinstance(z, EventLatents) else z
    return decode_text_batch(bb, zt.unsqueeze(0), **kw)[0]


def _video_head(bb: Backbone, raw: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    d = bb.config.frame_dim
    mu, s = raw[..., :d], raw[..., d:]
    var = torch.nn.functional.softplus(s) + bb.config.var_floor
    return mu, var


def decode_video_batch(
    bb: Backbone, z: torch.Tensor, teacher_frames: torch.Tensor | None = None
) -> tuple[torch.Tensor, torch.Tensor]:
    """Per-step Gaussian parameters (mu, var) of regenerated frames."""
    zb, _ = _as_batch(z, bb.config.event_dim, "event latents")
    m_dec = bb.config.frame_decode_len
    b = zb.shape[0]
    if teacher_frames is None:
        return _generate_video(bb, zb)
    start = torch.zeros(b, 1, bb.config.frame_dim, dtype=torch.float64)
    prev = torch.cat([start, teacher_frames[:, : m_dec - 1]], dim=1)
    if prev.shape[1] < m_dec:
        reps = m_dec - prev.shape[1]
        prev = torch.cat([prev, prev[:, -1:].expand(b, reps, -1)], dim=1)
    return _video_head(bb, bb.dec_video(zb, prev=prev))


def _generate_video(bb: Backbone, zb: torch.Tensor):
    b = zb.shape[0]
    prev = torch.zeros(b, 1, bb.config.frame_dim, dtype=torch.float64)
    mus, vars_ = [], []
    for t in range(bb.config.frame_decode_len):
        mu, var = _video_head(bb, bb.dec_video(zb, out_len=t + 1, prev=prev))
        mus.append(mu[:, -1])
        vars_.append(var[:, -1])
        if t + 1 < bb.config.frame_decode_len:
            prev = torch.cat([prev, mu[:, -1:].detach()], dim=1)
    return torch.stack(mus, dim=1), torch.stack(vars_, dim=1)


def decode_video(bb: Backbone, z: EventLatents | torch.Tensor, **kw):
    zt = z.z if isinstance(z, EventLatents) else z
    mu, var = decode_video_batch(bb, zt.unsqueeze(0), **kw)
    return mu[0], var[0]


def save_backbone(bb: Backbone, path, seed: int) -> None:
    save_checkpoint(
        path,
        config={"kind": "backbone", "config": bb.config.to_dict()},
        seed=seed,
        tensors=module_tensors(bb),
    )


def load_backbone(path) -> Backbone:
    ck = load_checkpoint(path)
    if ck.config.get("kind") != "backbone":
        raise InputError(f"checkpoint at {path} is not a backbone checkpoint")
    bb = Backbone(BackboneConfig.from_dict(ck.config["config"]))
    load_module_tensors(bb, ck.tensors)
    return bb
