"""Event-representation network: encoders, cross-modal decoders, training."""

from .model import (
    Backbone,
    BackboneConfig,
    EventLatents,
    decode_text,
    decode_text_batch,
    decode_video,
    decode_video_batch,
    embed_tokens,
    encode_text,
    encode_text_vectors_batch,
    encode_video,
    encode_video_batch,
    load_backbone,
    save_backbone,
)
from .segment import boundary_f1, random_partition, segment_events
from .train import PretrainConfig, pretrain, pretrain_loss

__all__ = [
    "Backbone",
    "BackboneConfig",
    "EventLatents",
    "PretrainConfig",
    "boundary_f1",
    "decode_text",
    "decode_text_batch",
    "decode_video",
    "decode_video_batch",
    "embed_tokens",
    "encode_text",
    "encode_text_vectors_batch",
    "encode_video",
    "encode_video_batch",
    "load_backbone",
    "pretrain",
    "pretrain_loss",
    "random_partition",
    "save_backbone",
    "segment_events",
]
