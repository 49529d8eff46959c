"""Corpus generators for the two synthetic domains.

The demonstration domain renders motif curves into smooth 16-dim frame
embeddings through a fixed nonlinear map, applies a per-trajectory random
affine jitter (the stand-in for camera/lighting variation), and emits a
commentary token sequence. The robot domain executes the same motif programs
with scripted proportional controllers through the environment stepper.
Hidden motif labels are carried for evaluation only and are stripped by the
corpus writer into a sidecar file.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from . import motifs as M
from .env import (
    ANG_SCALE,
    DA,
    DS,
    GRIP_SCALE,
    POS_SCALE,
    EnvState,
    default_state,
    step_env,
    wrap_angle,
)

FRAME_DIM = 16
_RAW_DIM = 14
_RENDER_GAIN = 1.2

# fixed rendering map (the demo domain's "camera"): orthonormal columns so
# the nonlinear frame embedding stays information-preserving
_RENDER_W = np.linalg.qr(
    np.random.default_rng(1318).normal(size=(FRAME_DIM, _RAW_DIM))
)[0]


def recording_precision(arr: np.ndarray) -> np.ndarray:
    """Quantize to the corpus storage precision (32-bit floats).

    Generators record at this precision so that write/read round-trips are
    lossless and replay checks hold exactly on loaded corpora.
    """
    return np.asarray(arr, dtype=np.float32).astype(np.float64)


@dataclass
class DemoTrajectory:
    v: np.ndarray  # (m, frame_dim) frame embeddings
    w: np.ndarray  # (n,) token ids
    hidden_motifs: list | None = None  # [(motif_id, start, end)], eval only

    def __post_init__(self):
        self.v = np.asarray(self.v, dtype=np.float64)
        self.w = np.asarray(self.w, dtype=np.int64)
        if self.v.ndim != 2 or self.v.shape[0] < 1:
            raise ConfigError("demo trajectory needs at least one frame")
        if self.w.ndim != 1 or self.w.shape[0] < 1:
            raise ConfigError("demo trajectory needs at least one token")


@dataclass
class RobotTrajectory:
    s: np.ndarray  # (T, DS) states
    a: np.ndarray  # (T-1, DA) actions
    hidden_motifs: list | None = None

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=np.float64)
        self.a = np.asarray(self.a, dtype=np.float64)
        if self.s.ndim != 2 or self.s.shape[0] < 2:
            raise ConfigError("robot trajectory needs at least two states")
        if self.a.shape != (self.s.shape[0] - 1, DA):
            raise ConfigError(
                f"actions must be (T-1, {DA}); got {self.a.shape} for T={self.s.shape[0]}"
            )


@dataclass
class DemoGenConfig:
    count: int = 200
    frames: int = 40
    frame_dim: int = FRAME_DIM
    vocab: int = M.VOCAB_SIZE
    token_max: int = 24
    motifs_min: int = 2
    motifs_max: int = 4
    event_budget: int = 4
    motif_subset: list[str] | None = None
    filler_prob: float = 0.3
    jitter: float = 0.08
    bias_jitter: float = 0.05
    frame_noise: float = 0.01

    def validate(self):
        if self.count < 0:
            raise ConfigError("demo count must be >= 0")
        if not (1 <= self.motifs_min <= self.motifs_max):
            raise ConfigError("motifs_min/max must satisfy 1 <= min <= max")
        if self.motifs_max > self.event_budget:
            raise ConfigError(
                f"motifs per trajectory ({self.motifs_max}) exceeds the "
                f"event budget ({self.event_budget})"
            )
        if self.frame_dim != FRAME_DIM:
            raise ConfigError(f"frame_dim is fixed at {FRAME_DIM} by the renderer")
        if self.vocab != M.VOCAB_SIZE:
            raise ConfigError(f"vocab is fixed at {M.VOCAB_SIZE}")
        subset = self.motif_subset or M.MOTIF_NAMES
        for name in subset:
            if name not in M.MOTIF_IDS:
                raise ConfigError(f"unknown motif {name!r} in motif_subset")
        return self


@dataclass
class RobotGenConfig:
    count: int = 200
    horizon: int = 60  # T states, T-1 actions
    motifs_min: int = 2
    motifs_max: int = 3
    motif_subset: list[str] | None = None  # defaults to controller-equipped set
    ctrl_noise: float = 0.05
    gain: float = 0.9

    def validate(self):
        if self.count < 0:
            raise ConfigError("robot count must be >= 0")
        if self.horizon < 2:
            raise ConfigError("horizon must be >= 2")
        if not (1 <= self.motifs_min <= self.motifs_max):
            raise ConfigError("motifs_min/max must satisfy 1 <= min <= max")
        subset = self.motif_subset or M.SHARED_MOTIFS
        for name in subset:
            if name not in M.MOTIF_IDS:
                raise ConfigError(f"unknown motif {name!r} in motif_subset")
            if name not in M.SHARED_MOTIFS:
                raise ConfigError(f"motif {name!r} has no robot controller")
        return self


def _window_mean(x: np.ndarray, w: int) -> np.ndarray:
    pad = w // 2
    kernel = np.ones(w) / w
    xp = np.pad(x, (pad, pad), mode="edge")
    return np.convolve(xp, kernel, mode="valid")


def _render_frames(pos, ang, grip):
    """Frame embeddings from a motif curve.

    Raw per-frame statistics include short-window motion summaries (speed,
    rotation sense, axis activity, oscillation) - the analog of the motion
    context a real video frame carries - pushed through a fixed nonlinear map.
    """
    vel = np.diff(pos, axis=0, prepend=pos[:1]) * 8.0
    acc = np.diff(vel, axis=0, prepend=vel[:1]) * 4.0
    curl = _window_mean((vel[:, 0] * acc[:, 1] - vel[:, 1] * acc[:, 0]) * 4.0, 5)
    speed = _window_mean(np.linalg.norm(vel, axis=1), 5)
    avx = _window_mean(np.abs(vel[:, 0]), 5)
    avy = _window_mean(np.abs(vel[:, 1]), 5)
    osc = np.sqrt(
        np.maximum(_window_mean(pos[:, 1] ** 2, 7) - _window_mean(pos[:, 1], 7) ** 2, 0)
    ) * 20.0
    dgrip = _window_mean(np.abs(np.diff(grip, prepend=grip[:1])), 5) * 10.0
    raw = np.column_stack(
        [
            pos,
            vel,
            speed,
            curl,
            avx,
            avy,
            osc,
            np.sin(ang),
            np.cos(ang),
            2.0 * (2.0 * grip - 1.0),
            dgrip,
            np.ones(len(ang)),
        ]
    )
    return np.tanh(_RENDER_GAIN * raw @ _RENDER_W.T)


def _downsample_indices(length: int, m: int) -> np.ndarray:
    return np.round(np.linspace(0, length - 1, num=m)).astype(int)


def _token_sequence(motif_ids, filler_prob, token_max, rng):
    toks = [M.START]
    for mid in motif_ids:
        while rng.random() < filler_prob and len(toks) < token_max - 2:
            toks.append(int(M.FILLER_TOKEN_BASE + rng.integers(0, M.N_FILLER)))
        toks.append(M.motif_token(mid))
    toks.append(M.STOP)
    return np.array(toks[:token_max], dtype=np.int64)


def gen_demo_trajectory(config: DemoGenConfig, rng: np.random.Generator) -> DemoTrajectory:
    subset = config.motif_subset or M.MOTIF_NAMES
    n_motifs = int(rng.integers(config.motifs_min, config.motifs_max + 1))
    steps_total = max(config.frames * 2, 40)
    program = M.sample_program(subset, n_motifs, steps_total, rng)

    pos = rng.uniform(-0.5, 0.1, size=2)
    ang = float(rng.uniform(-0.4, 0.4))
    segs, bounds = [], [0]
    for name, dur in program:
        curve = M.motif_curve(name, dur, pos, ang, rng)
        segs.append(curve)
        pos, ang = curve["pos"][-1], float(curve["ang"][-1])
        bounds.append(bounds[-1] + dur)
    all_pos = np.concatenate([c["pos"] for c in segs])
    all_ang = np.concatenate([c["ang"] for c in segs])
    all_grip = np.concatenate([c["grip"] for c in segs])

    frames = _render_frames(all_pos, all_ang, all_grip)

    # per-trajectory domain randomization: random affine jitter plus noise
    A = np.eye(FRAME_DIM) + config.jitter * rng.normal(
        size=(FRAME_DIM, FRAME_DIM)
    ) / np.sqrt(FRAME_DIM)
    b = config.bias_jitter * rng.normal(size=FRAME_DIM)
    frames = frames @ A.T + b + config.frame_noise * rng.normal(size=frames.shape)

    sel = _downsample_indices(len(frames), config.frames)
    frames = recording_precision(frames[sel])

    fb = [int(np.searchsorted(sel, t, side="left")) for t in bounds]
    fb[0], fb[-1] = 0, config.frames
    hidden = [
        (M.MOTIF_IDS[name], fb[k], fb[k + 1])
        for k, (name, _) in enumerate(program)
        if fb[k + 1] > fb[k]
    ]
    w = _token_sequence(
        [M.MOTIF_IDS[n] for n, _ in program], config.filler_prob, config.token_max, rng
    )
    return DemoTrajectory(v=frames, w=w, hidden_motifs=hidden)


def gen_demo_corpus(config: DemoGenConfig, seed: int) -> list[DemoTrajectory]:
    config.validate()
    return [
        gen_demo_trajectory(config, np.random.default_rng([seed, 11, i]))
        for i in range(config.count)
    ]


def _controller_action(state: EnvState, tgt_pos, tgt_ang, tgt_grip, gain):
    a = np.empty(DA)
    a[0:2] = (tgt_pos - state.effector) / POS_SCALE * gain
    a[2] = wrap_angle(tgt_ang - state.angle) / ANG_SCALE * gain
    a[3] = (tgt_grip - state.gripper) / GRIP_SCALE * gain
    return a


def gen_robot_trajectory(config: RobotGenConfig, rng: np.random.Generator) -> RobotTrajectory:
    subset = config.motif_subset or M.SHARED_MOTIFS
    n_motifs = int(rng.integers(config.motifs_min, config.motifs_max + 1))
    n_actions = config.horizon - 1
    program = M.sample_program(subset, n_motifs, n_actions, rng)

    state = default_state(rng)
    pos, ang = state.effector.copy(), state.angle
    targets_pos, targets_ang, targets_grip, bounds = [], [], [], [0]
    for name, dur in program:
        curve = M.motif_curve(name, dur, pos, ang, rng)
        targets_pos.append(curve["pos"])
        targets_ang.append(curve["ang"])
        targets_grip.append(curve["grip"])
        pos, ang = curve["pos"][-1], float(curve["ang"][-1])
        bounds.append(bounds[-1] + dur)
    tgt_pos = np.concatenate(targets_pos)
    tgt_ang = np.concatenate(targets_ang)
    tgt_grip = np.concatenate(targets_grip)

    sv = recording_precision(state.to_vector())
    state = EnvState.from_vector(sv)
    states = [sv]
    actions = []
    for t in range(n_actions):
        a = _controller_action(state, tgt_pos[t], tgt_ang[t], tgt_grip[t], config.gain)
        a = a + config.ctrl_noise * rng.normal(size=DA)
        a = recording_precision(np.clip(a, -1.0, 1.0))
        sv = recording_precision(step_env(state, a).to_vector())
        state = EnvState.from_vector(sv)
        actions.append(a)
        states.append(sv)

    hidden = [
        (M.MOTIF_IDS[name], bounds[k], bounds[k + 1] + (1 if k == len(program) - 1 else 0))
        for k, (name, _) in enumerate(program)
    ]
    return RobotTrajectory(
        s=np.stack(states), a=np.stack(actions), hidden_motifs=hidden
    )


def gen_robot_corpus(config: RobotGenConfig, seed: int) -> list[RobotTrajectory]:
    config.validate()
    return [
        gen_robot_trajectory(config, np.random.default_rng([seed, 13, i]))
        for i in range(config.count)
    ]


def replay_robot(traj: RobotTrajectory) -> np.ndarray:
    """Re-run recorded actions from s_0 through the stepper.

    Applies the recording quantization after every step, so the result
    matches the recorded states exactly, including after a file round trip.
    """
    state = EnvState.from_vector(traj.s[0])
    out = [traj.s[0].copy()]
    for a in traj.a:
        sv = recording_precision(step_env(state, a).to_vector())
        state = EnvState.from_vector(sv)
        out.append(sv)
    return np.stack(out)


def strip_hidden(corpus):
    """Return shallow copies with hidden motif labels removed."""
    out = []
    for tr in corpus:
        if isinstance(tr, DemoTrajectory):
            out.append(DemoTrajectory(v=tr.v, w=tr.w, hidden_motifs=None))
        else:
            out.append(RobotTrajectory(s=tr.s, a=tr.a, hidden_motifs=None))
    return out
