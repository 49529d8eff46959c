"""Long-horizon prediction: autoregressive baselines vs whole-sequence path.

Baselines predict step by step, feeding each predicted mean forward (the
regime where per-step error aggregates). The latent-conditioned path feeds
the whole action sequence through the action adapter into the frozen text
encoder, decodes frame embeddings from the resulting skill latents, and maps
them back to a state trajectory conditioned on the start state.
"""

from dataclasses import dataclass

import numpy as np
import torch

from ..backbone.model import Backbone, decode_video_batch, encode_text_vectors_batch
from ..errors import InputError
from ..homomorphism.model import Adapters, lift_state
from .models import DynModel


@dataclass
class PredictedRollout:
    """Predicted state trajectory.

    ``means`` holds one row per predicted step; when ``includes_start`` is
    true, row 0 is the (exact) start state and the horizon is len-1.
    """

    means: np.ndarray
    variances: np.ndarray | None
    horizon: int
    includes_start: bool = False
    truncated_at: int | None = None

    def future_means(self) -> np.ndarray:
        return self.means[1:] if self.includes_start else self.means


def rollout_autoregressive(model: DynModel, s_0, actions) -> PredictedRollout:
    """Feed predicted means forward for len(actions) steps."""
    actions = np.asarray(actions, dtype=np.float64)
    if actions.ndim != 2 or actions.shape[0] < 1:
        raise InputError("need a non-empty (H, da) action sequence")
    s = np.asarray(s_0, dtype=np.float64)
    means, variances = [], []
    truncated_at = None
    for t, a in enumerate(actions):
        mean, var = model.predict_step(s, a)
        if not np.all(np.isfinite(mean)):
            truncated_at = t
            break
        means.append(mean)
        variances.append(var)
        s = mean
    if not means:
        raise InputError("rollout produced no finite steps")
    h = len(means)
    var_arr = (
        np.stack(variances) if variances and variances[0] is not None else None
    )
    return PredictedRollout(
        means=np.stack(means),
        variances=var_arr,
        horizon=h,
        includes_start=False,
        truncated_at=truncated_at,
    )


class V2SDynamics:
    """Whole-sequence predictor built from frozen checkpoints."""

    def __init__(self, backbone: Backbone, adapters: Adapters):
        if not backbone.frozen:
            raise InputError("backbone checkpoint must be frozen for prediction")
        self.backbone = backbone
        self.adapters = adapters

    def rollout_many(self, s0_batch: np.ndarray, action_batch: np.ndarray) -> np.ndarray:
        """Batched prediction: (B, ds) starts + (B, H, da) actions ->
        (B, H+1, ds) state trajectories with row 0 equal to the start."""
        s0 = torch.from_numpy(np.ascontiguousarray(s0_batch)).to(torch.float64)
        acts = torch.from_numpy(np.ascontiguousarray(action_batch)).to(torch.float64)
        h = acts.shape[1]
        max_h = self.adapters.config.state_len - 1
        if h > max_h:
            raise InputError(f"horizon {h} exceeds configured state length {max_h + 1}")
        with torch.no_grad():
            w_hat = self.adapters.f_a(acts)
            z_w = encode_text_vectors_batch(self.backbone, w_hat)
            v_prime, _ = decode_video_batch(self.backbone, z_w)  # own feedback
            v_in = torch.cat([lift_state(self.adapters, s0).unsqueeze(1), v_prime], dim=1)
            s_hat = self.adapters.g_s(v_in)
        out = s_hat[:, : h + 1].cpu().numpy().copy()
        out[:, 0] = s0_batch
        return out

    def rollout(self, s_0, actions) -> PredictedRollout:
        actions = np.asarray(actions, dtype=np.float64)
        if actions.ndim != 2 or actions.shape[0] < 1:
            raise InputError("need a non-empty (H, da) action sequence")
        s0 = np.asarray(s_0, dtype=np.float64)[None]
        states = self.rollout_many(s0, actions[None])[0]
        return PredictedRollout(
            means=states,
            variances=None,
            horizon=actions.shape[0],
            includes_start=True,
        )


def rollout_v2s(backbone: Backbone, adapters: Adapters, s_0, actions) -> PredictedRollout:
    """Whole-action-sequence prediction; output rows = action count + 1."""
    return V2SDynamics(backbone, adapters).rollout(s_0, actions)
