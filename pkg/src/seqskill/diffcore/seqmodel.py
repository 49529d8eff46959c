"""Sequence-to-sequence function approximators with a fixed output budget.

A SeqModel maps an arbitrary-length input sequence to exactly ``out_len``
output rows: a transformer encoder reads the input, and a small decoder of
positionally-encoded query slots cross-attends into it. When ``d_prev > 0``
the decoder queries are additionally conditioned on a previous-step sequence
(teacher forcing during training, own-prediction feedback during generation),
with causal self-attention so query t never sees inputs beyond step t.
"""

import math
from dataclasses import asdict, dataclass

import torch
from torch import nn

from ..errors import ConfigError, InputError


@dataclass
class SeqModelConfig:
    d_in: int
    d_out: int
    out_len: int
    width: int = 32
    depth: int = 2
    head_count: int = 2
    ffn_mult: int = 2
    d_prev: int = 0
    max_len: int = 512

    def validate(self) -> "SeqModelConfig":
        for name in ("d_in", "d_out", "out_len", "width", "depth", "head_count"):
            if getattr(self, name) < 1:
                raise ConfigError(f"SeqModelConfig.{name} must be >= 1")
        if self.width % self.head_count != 0:
            raise ConfigError(
                f"width {self.width} not divisible by head_count {self.head_count}"
            )
        if self.d_prev < 0:
            raise ConfigError("d_prev must be >= 0")
        if self.max_len < self.out_len:
            raise ConfigError("max_len must cover out_len")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


def sinusoidal_table(max_len: int, width: int) -> torch.Tensor:
    """Fixed sinusoidal positional-encoding table, (max_len, width)."""
    pos = torch.arange(max_len, dtype=torch.float64).unsqueeze(1)
    half = torch.arange(0, width, 2, dtype=torch.float64)
    div = torch.exp(-math.log(10000.0) * half / width)
    table = torch.zeros(max_len, width, dtype=torch.float64)
    table[:, 0::2] = torch.sin(pos * div)
    table[:, 1::2] = torch.cos(pos * div[: (width + 1) // 2])
    return table


class _EncoderLayer(nn.Module):
    def __init__(self, width, heads, ffn_mult):
        super().__init__()
        self.ln1 = nn.LayerNorm(width)
        self.attn = nn.MultiheadAttention(width, heads, batch_first=True)
        self.ln2 = nn.LayerNorm(width)
        self.ffn = nn.Sequential(
            nn.Linear(width, ffn_mult * width),
            nn.GELU(),
            nn.Linear(ffn_mult * width, width),
        )

    def forward(self, x, key_padding_mask=None):
        h = self.ln1(x)
        a, _ = self.attn(h, h, h, key_padding_mask=key_padding_mask,
                         need_weights=False)
        x = x + a
        return x + self.ffn(self.ln2(x))


class _DecoderLayer(nn.Module):
    def __init__(self, width, heads, ffn_mult):
        super().__init__()
        self.ln1 = nn.LayerNorm(width)
        self.self_attn = nn.MultiheadAttention(width, heads, batch_first=True)
        self.ln2 = nn.LayerNorm(width)
        self.cross_attn = nn.MultiheadAttention(width, heads, batch_first=True)
        self.ln3 = nn.LayerNorm(width)
        self.ffn = nn.Sequential(
            nn.Linear(width, ffn_mult * width),
            nn.GELU(),
            nn.Linear(ffn_mult * width, width),
        )

    def forward(self, q, memory, memory_mask=None, causal_mask=None):
        h = self.ln1(q)
        a, _ = self.self_attn(h, h, h, attn_mask=causal_mask, need_weights=False)
        q = q + a
        h = self.ln2(q)
        a, attn = self.cross_attn(
            h, memory, memory, key_padding_mask=memory_mask, need_weights=True
        )
        q = q + a
        return q + self.ffn(self.ln3(q)), attn


class SeqModel(nn.Module):
    """Encoder-decoder sequence model emitting a fixed number of rows."""

    def __init__(self, config: SeqModelConfig):
        super().__init__()
        self.config = config.validate()
        w = config.width
        self.in_proj = nn.Linear(config.d_in, w)
        self.encoder = nn.ModuleList(
            _EncoderLayer(w, config.head_count, config.ffn_mult)
            for _ in range(config.depth)
        )
        self.decoder = nn.ModuleList(
            _DecoderLayer(w, config.head_count, config.ffn_mult)
            for _ in range(config.depth)
        )
        self.out_norm = nn.LayerNorm(w)
        self.out_proj = nn.Linear(w, config.d_out)
        self.prev_proj = (
            nn.Linear(config.d_prev, w) if config.d_prev > 0 else None
        )
        self.register_buffer("pos_table", sinusoidal_table(config.max_len, w))
        self.double()

    @property
    def conditioned(self) -> bool:
        return self.prev_proj is not None

    def forward(
        self,
        x: torch.Tensor,
        out_len: int | None = None,
        key_padding_mask: torch.Tensor | None = None,
        prev: torch.Tensor | None = None,
        return_attn: bool = False,
    ):
        """x: (T, d_in) or (B, T, d_in). Returns (out_len, d_out) rows per item.

        ``prev`` supplies the step-(t-1) conditioning sequence for conditioned
        models, shape (..., out_len, d_prev); row t is the input preceding
        output step t.
        """
        squeeze = x.ndim == 2
        if squeeze:
            x = x.unsqueeze(0)
            if prev is not None:
                prev = prev.unsqueeze(0)
            if key_padding_mask is not None:
                key_padding_mask = key_padding_mask.unsqueeze(0)
        if x.ndim != 3 or x.shape[1] == 0:
            raise InputError("input must be a non-empty sequence of feature rows")
        if x.shape[-1] != self.config.d_in:
            raise InputError(
                f"input feature dim {x.shape[-1]} != configured {self.config.d_in}"
            )
        k = self.config.out_len if out_len is None else int(out_len)
        if k < 1:
            raise InputError("out_len must be >= 1")
        if x.shape[1] > self.pos_table.shape[0] or k > self.pos_table.shape[0]:
            raise InputError("sequence exceeds positional table; raise max_len")
        if self.conditioned:
            if prev is None:
                raise InputError("conditioned model requires a prev sequence")
            if prev.shape[1] != k or prev.shape[-1] != self.config.d_prev:
                raise InputError(
                    f"prev must be (..., {k}, {self.config.d_prev}),"
                    f" got {tuple(prev.shape)}"
                )
        b, t = x.shape[0], x.shape[1]

        h = self.in_proj(x) + self.pos_table[:t]
        for layer in self.encoder:
            h = layer(h, key_padding_mask=key_padding_mask)

        q = self.pos_table[:k].expand(b, k, -1)
        if self.conditioned:
            q = q + self.prev_proj(prev)
            causal = torch.triu(
                torch.full((k, k), float("-inf"), dtype=h.dtype), diagonal=1
            )
        else:
            causal = None
        attn = None
        for layer in self.decoder:
            q, attn = layer(q, h, memory_mask=key_padding_mask, causal_mask=causal)
        y = self.out_proj(self.out_norm(q))
        if squeeze:
            y = y.squeeze(0)
            attn = attn.squeeze(0) if attn is not None else None
        if return_attn:
            return y, attn
        return y


def init_params(config: SeqModelConfig, seed: int) -> SeqModel:
    """Construct a SeqModel with deterministic, variance-scaled initialization."""
    model = SeqModel(config)
    reinit_(model, seed)
    return model


def reinit_(module: nn.Module, seed: int) -> None:
    """Deterministically reinitialize every parameter of ``module``.

    Matrices get N(0, 1/fan_in); vectors get zeros, except LayerNorm-style
    scale vectors which get ones.
    """
    gen = torch.Generator().manual_seed(int(seed))
    with torch.no_grad():
        for name, p in module.named_parameters():
            if p.ndim >= 2:
                std = 1.0 / math.sqrt(p.shape[-1])
                p.copy_(torch.randn(p.shape, generator=gen, dtype=p.dtype) * std)
            elif name.endswith("weight"):
                p.fill_(1.0)
            else:
                p.zero_()


def seq2seq_forward(
    model: SeqModel, input_seq: torch.Tensor, out_len: int | None = None, **kw
):
    """Functional forward: exactly ``out_len`` output rows for any input length."""
    return model(input_seq, out_len=out_len, **kw)


def param_count(module: nn.Module) -> int:
    return sum(p.numel() for p in module.parameters())


def set_frozen(module: nn.Module, frozen: bool = True) -> None:
    for p in module.parameters():
        p.requires_grad_(not frozen)


def is_frozen(module: nn.Module) -> bool:
    return all(not p.requires_grad for p in module.parameters())
