"""Motif vocabulary shared by the two synthetic domains.

Each motif defines a target curve for the effector (position, angle,
gripper) over a normalized phase. The demonstration domain renders these
curves into frame embeddings; the robot domain tracks them with a
proportional controller through the environment stepper. Only a subset of
motifs has a robot controller: the robot corpus deliberately lacks the
remaining, demonstration-only behaviors.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError

MOTIF_NAMES = [
    "stir-cw",
    "stir-ccw",
    "slide-h",
    "slide-v",
    "lift",
    "press",
    "pour-tilt",
    "hold",
]
# behaviors the robot can execute; the rest appear only in demonstrations
SHARED_MOTIFS = ["stir-cw", "stir-ccw", "slide-h", "slide-v", "lift"]

MOTIF_IDS = {name: i for i, name in enumerate(MOTIF_NAMES)}

# token layout: pad, start, stop, 8 motif tokens, 21 filler tokens
PAD, START, STOP = 0, 1, 2
MOTIF_TOKEN_BASE = 3
FILLER_TOKEN_BASE = 11
VOCAB_SIZE = 32
N_FILLER = VOCAB_SIZE - FILLER_TOKEN_BASE


def motif_token(motif_id: int) -> int:
    return MOTIF_TOKEN_BASE + motif_id


@dataclass
class MotifSpec:
    motif_id: int
    name: str
    duration_range: tuple[int, int] = (12, 24)
    has_controller: bool = False


def motif_table() -> list[MotifSpec]:
    return [
        MotifSpec(MOTIF_IDS[n], n, has_controller=(n in SHARED_MOTIFS))
        for n in MOTIF_NAMES
    ]


def _room(lo, hi, x, d):
    """Clip a displacement d so x + d stays within [lo, hi], flipping if needed."""
    if x + d > hi or x + d < lo:
        d = -d
    return float(np.clip(x + d, lo, hi) - x)


def motif_curve(
    name: str, duration: int, start_pos, start_ang: float, rng: np.random.Generator
):
    """Target curve for one motif execution.

    Returns dict with pos (L, 2), ang (L,), grip (L,); index 0 is the step
    after the motif begins (curves chain: the caller supplies the start).
    """
    if name not in MOTIF_IDS:
        raise InputError(f"unknown motif {name!r}")
    L = int(duration)
    phase = np.arange(1, L + 1) / L
    p0 = np.asarray(start_pos, dtype=np.float64)
    pos = np.tile(p0, (L, 1))
    ang = np.full(L, start_ang)
    grip = np.zeros(L)

    # gripper levels are deliberately spread out per motif: they are the main
    # static cue distinguishing otherwise similar instantaneous kinematics
    if name in ("stir-cw", "stir-ccw"):
        r = rng.uniform(0.18, 0.28)
        theta0 = rng.uniform(0, 2 * math.pi)
        sign = -1.0 if name == "stir-cw" else 1.0
        center = p0 - r * np.array([math.cos(theta0), math.sin(theta0)])
        theta = theta0 + sign * 2 * math.pi * phase
        pos = center + r * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        grip[:] = 0.0
    elif name in ("slide-h", "slide-v"):
        axis = 0 if name == "slide-h" else 1
        d = _room(-0.9, 0.9, p0[axis], rng.uniform(0.55, 0.75))
        pos[:, axis] = p0[axis] + d * phase
        grip[:] = 0.35  # pushing contact
    elif name == "lift":
        d = _room(-0.9, 0.9, p0[1], rng.uniform(0.4, 0.6))
        ramp = np.clip((phase - 0.2) / 0.8, 0.0, 1.0)
        pos[:, 1] = p0[1] + d * ramp
        grip = np.clip(phase / 0.2, 0.0, 1.0)
    elif name == "press":
        n_press = rng.integers(2, 4)
        dip = 0.12 * np.abs(np.sin(math.pi * n_press * phase))
        pos[:, 1] = np.clip(p0[1] - dip, -1.0, 1.0)
        grip = 0.5 - 0.5 * np.cos(2 * math.pi * n_press * phase)
    elif name == "pour-tilt":
        ang = start_ang + 1.2 * np.sin(math.pi * phase)
        pos[:, 0] = np.clip(p0[0] + 0.05 * phase, -1.0, 1.0)
        grip[:] = 1.0
    elif name == "hold":
        grip[:] = 0.55

    pos = np.clip(pos, -0.95, 0.95)
    return {"pos": pos, "ang": ang, "grip": grip}


def sample_program(
    motif_names: list[str],
    n_motifs: int,
    total_steps: int,
    rng: np.random.Generator,
    min_steps: int = 8,
):
    """Pick motifs and split total_steps among them."""
    names = [motif_names[i] for i in rng.integers(0, len(motif_names), n_motifs)]
    weights = rng.uniform(1.0, 2.0, size=n_motifs)
    raw = weights / weights.sum() * (total_steps - min_steps * n_motifs)
    durations = (np.floor(raw).astype(int) + min_steps).tolist()
    durations[-1] += total_steps - sum(durations)
    return list(zip(names, durations))
