"""Multi-step prediction error under the shared evaluation protocol.

Errors are computed on normalized states (the training normalizer) so every
method is scored in the same units. Short horizons use a deterministic set
of evenly spaced window starts per trajectory; the full horizon uses one
window from step 0.
"""

import numpy as np

from ..errors import ConfigError, InputError
from ..synthworld.generate import RobotTrajectory
from .models import DynModel, Normalizer
from .rollout import V2SDynamics, rollout_autoregressive


def window_starts(t_len: int, horizon: int, max_windows: int) -> list[int]:
    last = t_len - 1 - horizon
    if last < 0:
        return []
    if last == 0:
        return [0]
    count = min(max_windows, last + 1)
    return sorted({int(round(x)) for x in np.linspace(0, last, num=count)})


def resolve_horizon(h, t_len: int) -> int:
    if h == "full":
        return t_len - 1
    h = int(h)
    if h < 1:
        raise ConfigError("horizon must be >= 1 or 'full'")
    if h > t_len - 1:
        raise ConfigError(f"horizon {h} exceeds trajectory length {t_len}")
    return h


def multistep_rmse(
    model,
    eval_trajectories: list[RobotTrajectory],
    horizons,
    normalizer: Normalizer,
    max_windows: int = 4,
) -> dict:
    """Per-horizon RMSE over all evaluation windows, states flattened.

    ``model`` is either a trained DynModel (autoregressive) or a
    V2SDynamics (whole-sequence). Horizon entries are ints or "full".
    """
    if not eval_trajectories:
        raise InputError("empty evaluation set")
    out = {}
    for h_spec in horizons:
        sq_errors = []
        if isinstance(model, V2SDynamics):
            starts_by_traj = []
            s0s, acts, trues = [], [], []
            for tr in eval_trajectories:
                h = resolve_horizon(h_spec, tr.s.shape[0])
                starts = (
                    [0] if h_spec == "full" else window_starts(tr.s.shape[0], h, max_windows)
                )
                for t0 in starts:
                    s0s.append(tr.s[t0])
                    acts.append(tr.a[t0 : t0 + h])
                    trues.append(tr.s[t0 + 1 : t0 + h + 1])
            pred = model.rollout_many(np.stack(s0s), np.stack(acts))
            for k in range(len(s0s)):
                err = normalizer.apply(pred[k][1:]) - normalizer.apply(trues[k])
                sq_errors.append(err.ravel() ** 2)
        else:
            for tr in eval_trajectories:
                h = resolve_horizon(h_spec, tr.s.shape[0])
                starts = (
                    [0] if h_spec == "full" else window_starts(tr.s.shape[0], h, max_windows)
                )
                for t0 in starts:
                    roll = rollout_autoregressive(model, tr.s[t0], tr.a[t0 : t0 + h])
                    pred = roll.future_means()
                    true = tr.s[t0 + 1 : t0 + 1 + len(pred)]
                    err = normalizer.apply(pred) - normalizer.apply(true)
                    sq_errors.append(err.ravel() ** 2)
        key = "full" if h_spec == "full" else int(h_spec)
        out[key] = float(np.sqrt(np.concatenate(sq_errors).mean()))
    return out
