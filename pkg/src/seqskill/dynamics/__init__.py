"""Long-horizon dynamics models and the evaluation protocol."""

from .metrics import multistep_rmse, resolve_horizon, window_starts
from .models import (
    KINDS,
    DynModel,
    DynModelSpec,
    Normalizer,
    train_baseline,
)
from .rollout import (
    PredictedRollout,
    V2SDynamics,
    rollout_autoregressive,
    rollout_v2s,
)

__all__ = [
    "KINDS",
    "DynModel",
    "DynModelSpec",
    "Normalizer",
    "PredictedRollout",
    "V2SDynamics",
    "multistep_rmse",
    "resolve_horizon",
    "rollout_autoregressive",
    "rollout_v2s",
    "train_baseline",
    "window_starts",
]
