"""Adapters between the robot domain and the frozen backbone's spaces."""

from .model import (
    AdapterConfig,
    Adapters,
    embed_robot_skills,
    embed_robot_skills_batch,
    f_map,
    f_map_batch,
    g_map,
    g_map_batch,
    init_adapters,
    lift_state,
    load_adapters,
    save_adapters,
    soft_embed,
)
from .train import DistillConfig, cycle_forward, cycle_loss, distill

__all__ = [
    "AdapterConfig",
    "Adapters",
    "DistillConfig",
    "cycle_forward",
    "cycle_loss",
    "distill",
    "embed_robot_skills",
    "embed_robot_skills_batch",
    "f_map",
    "f_map_batch",
    "g_map",
    "g_map_batch",
    "init_adapters",
    "lift_state",
    "load_adapters",
    "save_adapters",
    "soft_embed",
]
