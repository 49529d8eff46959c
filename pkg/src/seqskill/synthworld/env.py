"""Toy kinematic manipulation environment.

State (ds = 8): effector position (2, in [-1, 1]^2), effector angle
(radians, wrapped to [-pi, pi)), gripper opening in [0, 1], and two object
positions (2 x 2, in [-1, 1]^2). Action (da = 4): planar velocity command
(2), angular velocity command, gripper command, all in [-1, 1].

step_env is a pure total function; replaying recorded actions reproduces
recorded states exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

DS = 8
DA = 4
POS_SCALE = 0.05
ANG_SCALE = 0.1
GRIP_SCALE = 0.25
GRASP_RADIUS = 0.15
GRIP_ENGAGED = 0.5


@dataclass
class EnvState:
    effector: np.ndarray  # (2,)
    angle: float
    gripper: float
    objects: np.ndarray  # (2, 2)

    def to_vector(self) -> np.ndarray:
        return np.concatenate(
            [self.effector, [self.angle, self.gripper], self.objects.ravel()]
        ).astype(np.float64)

    @classmethod
    def from_vector(cls, v) -> "EnvState":
        v = np.asarray(v, dtype=np.float64)
        return cls(
            effector=v[0:2].copy(),
            angle=float(v[2]),
            gripper=float(v[3]),
            objects=v[4:8].reshape(2, 2).copy(),
        )


def wrap_angle(a: float) -> float:
    # identity for in-range values so a zero action leaves the state untouched
    if -math.pi <= a < math.pi:
        return a
    return float((a + math.pi) % (2 * math.pi) - math.pi)


def default_state(rng: np.random.Generator | None = None) -> EnvState:
    if rng is None:
        return EnvState(
            effector=np.array([-0.4, -0.2]),
            angle=0.0,
            gripper=0.0,
            objects=np.array([[0.3, 0.3], [-0.2, 0.4]]),
        )
    return EnvState(
        effector=rng.uniform(-0.6, 0.0, size=2),
        angle=float(rng.uniform(-0.5, 0.5)),
        gripper=float(rng.uniform(0.0, 0.3)),
        objects=rng.uniform(-0.5, 0.5, size=(2, 2)),
    )


def step_env(state: EnvState, action, return_info: bool = False):
    """Deterministic kinematic update; out-of-bound actions are clipped."""
    a = np.asarray(action, dtype=np.float64)
    clipped = bool(np.any(a < -1.0) or np.any(a > 1.0))
    a = np.clip(a, -1.0, 1.0)

    new_eff = np.clip(state.effector + POS_SCALE * a[0:2], -1.0, 1.0)
    new_ang = wrap_angle(state.angle + ANG_SCALE * a[2])
    new_grip = float(np.clip(state.gripper + GRIP_SCALE * a[3], 0.0, 1.0))

    delta = new_eff - state.effector
    new_objects = state.objects.copy()
    if state.gripper > GRIP_ENGAGED:
        for k in range(2):
            if np.linalg.norm(state.objects[k] - state.effector) < GRASP_RADIUS:
                new_objects[k] = np.clip(state.objects[k] + delta, -1.0, 1.0)

    out = EnvState(
        effector=new_eff, angle=new_ang, gripper=new_grip, objects=new_objects
    )
    if return_info:
        return out, {"clipped": clipped}
    return out


def rollout_actions(s0: EnvState, actions) -> np.ndarray:
    """Execute an action sequence; returns the (len+1, DS) state matrix."""
    states = [s0.to_vector()]
    cur = s0
    for a in np.asarray(actions, dtype=np.float64):
        cur = step_env(cur, a)
        states.append(cur.to_vector())
    return np.stack(states)


def path_metrics(states: np.ndarray) -> dict:
    """Loop-closure oracle: start/end effector distance and path length."""
    eff = np.asarray(states)[:, 0:2]
    closure = float(np.linalg.norm(eff[-1] - eff[0]))
    length = float(np.sum(np.linalg.norm(np.diff(eff, axis=0), axis=1)))
    return {"closure": closure, "path_length": length}
