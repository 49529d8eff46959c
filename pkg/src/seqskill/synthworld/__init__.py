"""Synthetic two-domain data and the toy environment."""

from .env import (
    DA,
    DS,
    GRASP_RADIUS,
    EnvState,
    default_state,
    path_metrics,
    rollout_actions,
    step_env,
    wrap_angle,
)
from .generate import (
    DemoGenConfig,
    DemoTrajectory,
    RobotGenConfig,
    RobotTrajectory,
    gen_demo_corpus,
    gen_robot_corpus,
    recording_precision,
    replay_robot,
    strip_hidden,
)
from .io import read_corpus, read_header, read_sidecar, sidecar_path, write_corpus
from .motifs import (
    MOTIF_IDS,
    MOTIF_NAMES,
    SHARED_MOTIFS,
    VOCAB_SIZE,
    MotifSpec,
    motif_curve,
    motif_table,
    motif_token,
)

__all__ = [
    "DA",
    "DS",
    "GRASP_RADIUS",
    "DemoGenConfig",
    "DemoTrajectory",
    "EnvState",
    "MOTIF_IDS",
    "MOTIF_NAMES",
    "MotifSpec",
    "RobotGenConfig",
    "RobotTrajectory",
    "SHARED_MOTIFS",
    "VOCAB_SIZE",
    "default_state",
    "gen_demo_corpus",
    "gen_robot_corpus",
    "motif_curve",
    "motif_table",
    "motif_token",
    "path_metrics",
    "read_corpus",
    "read_header",
    "read_sidecar",
    "recording_precision",
    "replay_robot",
    "rollout_actions",
    "sidecar_path",
    "step_env",
    "strip_hidden",
    "wrap_angle",
    "write_corpus",
]
