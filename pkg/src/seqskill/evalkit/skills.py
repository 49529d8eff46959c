"""Zero-shot skill generation and quantitative quality scoring.

A skill is an event-latents sequence decoded through the frozen token
decoder and the inverse action map into a clipped action sequence, then
executed open loop in the environment. Quality is the smallest sequence
discrepancy (min over the expert robot corpus) of the skill's action
sequence, and separately of its executed state sequence, compared against a
baseline of skills decoded from standard-Gaussian latents.
"""

from dataclasses import dataclass

import numpy as np
import torch

from ..backbone.model import Backbone, EventLatents, decode_text_batch, encode_video_batch
from ..errors import InputError
from ..homomorphism.model import Adapters, soft_embed
from ..softdtw import pairwise_cost, softdtw_value
from ..synthworld.env import EnvState, rollout_actions
from ..synthworld.generate import RobotTrajectory


@dataclass
class GeneratedSkill:
    latents: np.ndarray  # (K, event_dim)
    actions: np.ndarray  # (n_a, da)
    states: np.ndarray  # (n_a + 1, ds)
    origin: str  # "event" | "random"


def decode_actions_batch(
    backbone: Backbone, adapters: Adapters, z_batch: torch.Tensor
) -> np.ndarray:
    """(B, K, event_dim) latents -> (B, action_len, da) clipped actions."""
    with torch.no_grad():
        w_prime = decode_text_batch(backbone, z_batch)  # own-feedback generation
        bound = adapters.config.action_bound
        actions = adapters.g_a(soft_embed(adapters, w_prime)).clamp(-bound, bound)
    return actions.cpu().numpy()


def generate_skill(
    backbone: Backbone,
    adapters: Adapters,
    z: EventLatents | torch.Tensor | np.ndarray,
    s_0: EnvState,
    origin: str = "event",
) -> GeneratedSkill:
    """Decode one latent sequence into actions and execute them open loop."""
    if isinstance(z, EventLatents):
        zt = z.z
    elif isinstance(z, np.ndarray):
        zt = torch.from_numpy(np.ascontiguousarray(z)).to(torch.float64)
    else:
        zt = z
    if zt.ndim != 2 or zt.shape[0] != backbone.config.event_count:
        raise InputError(
            f"latents must be ({backbone.config.event_count}, event_dim)"
        )
    if not torch.isfinite(zt).all():
        raise InputError("latents contain non-finite entries")
    actions = decode_actions_batch(backbone, adapters, zt.unsqueeze(0))[0]
    finite = np.all(np.isfinite(actions), axis=1)
    if not finite.all():  # truncate at the first non-finite step
        cut = int(np.argmin(finite))
        actions = actions[:cut]
    states = rollout_actions(s_0, actions)
    return GeneratedSkill(
        latents=zt.detach().cpu().numpy(), actions=actions, states=states, origin=origin
    )


def sample_demo_event_latents(
    backbone: Backbone,
    demo_corpus,
    count: int,
    seed: int,
    perturb_scale: float = 0.0,
) -> list[np.ndarray]:
    """Draw stored event-latent sequences from encoded demonstrations."""
    if not demo_corpus:
        raise InputError("empty demonstration corpus")
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(demo_corpus), size=count)
    vs = torch.stack(
        [
            torch.from_numpy(np.ascontiguousarray(demo_corpus[i].v)).to(torch.float64)
            for i in picks
        ]
    )
    with torch.no_grad():
        z = encode_video_batch(backbone, vs).cpu().numpy()
    if perturb_scale > 0:
        z = z + perturb_scale * rng.normal(size=z.shape)
    return [z[i] for i in range(len(picks))]


def sample_random_latents(
    backbone: Backbone, count: int, seed: int
) -> list[np.ndarray]:
    """Standard-Gaussian latents: the unsupervised comparison baseline."""
    rng = np.random.default_rng(seed)
    k, d = backbone.config.event_count, backbone.config.event_dim
    return [rng.normal(size=(k, d)) for _ in range(count)]


def _normalize_stats(seqs: list[np.ndarray]):
    flat = np.concatenate(seqs)
    return flat.mean(axis=0), np.maximum(flat.std(axis=0), 1e-6)


def skill_quality(
    skills: list[GeneratedSkill],
    robot_corpus: list[RobotTrajectory],
    gamma: float = 0.1,
) -> dict:
    """Min-discrepancy statistics of generated skills against expert data.

    For each skill, the smallest alignment distance over the corpus is
    computed on normalized action sequences and, separately, on normalized
    executed state sequences. Returns per-skill minima plus median and
    quartiles for both spaces.
    """
    if not skills:
        raise InputError("no generated skills to score")
    if not robot_corpus:
        raise InputError("empty expert corpus")
    out = {}
    for space in ("actions", "states"):
        ref = [tr.a if space == "actions" else tr.s for tr in robot_corpus]
        mean, std = _normalize_stats(ref)
        ref_n = [(r - mean) / std for r in ref]
        minima = []
        for sk in skills:
            seq = sk.actions if space == "actions" else sk.states
            if seq.shape[0] == 0:
                minima.append(float("inf"))
                continue
            seq_n = (seq - mean) / std
            best = min(
                softdtw_value(pairwise_cost(seq_n, r, "euclidean"), gamma)
                for r in ref_n
            )
            minima.append(float(best))
        arr = np.asarray(minima)
        out[space] = {
            "per_skill": minima,
            "median": float(np.median(arr)),
            "q1": float(np.quantile(arr, 0.25)),
            "q3": float(np.quantile(arr, 0.75)),
        }
    return out
