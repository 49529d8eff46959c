"""Cross-domain analogy retrieval.

Event latents of single-motif probe trajectories from both domains are
compared by nearest neighbor: a robot trajectory's (mean) latent retrieves
the closest demonstration latent, and the retrieval is correct when the
motifs match. Labels come only from evaluation sidecars. Chance level is
one over the number of shared motifs.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError


@dataclass
class AnalogyResult:
    accuracy: float
    per_event_accuracy: float
    confusion: np.ndarray  # (n_classes, n_classes), rows = true robot motif
    class_ids: list[int]
    chance: float
    n_queries: int
    metric: str

    def summary(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_event_accuracy": self.per_event_accuracy,
            "chance": self.chance,
            "n_queries": self.n_queries,
            "metric": self.metric,
        }


def _distances(q: np.ndarray, ref: np.ndarray, metric: str) -> np.ndarray:
    if metric == "cosine":
        qn = q / np.maximum(np.linalg.norm(q, axis=1, keepdims=True), 1e-12)
        rn = ref / np.maximum(np.linalg.norm(ref, axis=1, keepdims=True), 1e-12)
        return 1.0 - qn @ rn.T
    if metric == "euclidean":
        return np.linalg.norm(q[:, None, :] - ref[None, :, :], axis=2)
    raise InputError(f"unknown retrieval metric {metric!r}")


def analogy_retrieval(
    demo_latents,
    demo_labels,
    robot_latents,
    robot_labels,
    metric: str = "cosine",
) -> AnalogyResult:
    """Nearest-neighbor motif retrieval from robot latents into demo latents.

    Latents are per-trajectory (K, event_dim) arrays; retrieval uses the
    per-trajectory mean event vector, with per-event retrieval reported too.
    """
    if len(demo_latents) == 0 or len(robot_latents) == 0:
        raise InputError("empty latent sets")
    if len(demo_latents) != len(demo_labels) or len(robot_latents) != len(robot_labels):
        raise InputError("latents and labels must align")
    demo_stack = np.stack([np.asarray(z, dtype=np.float64) for z in demo_latents])
    robot_stack = np.stack([np.asarray(z, dtype=np.float64) for z in robot_latents])
    demo_labels = np.asarray(demo_labels, dtype=int)
    robot_labels = np.asarray(robot_labels, dtype=int)

    class_ids = sorted(set(demo_labels.tolist()) | set(robot_labels.tolist()))
    index = {c: i for i, c in enumerate(class_ids)}
    chance = 1.0 / len(set(demo_labels.tolist()))

    d_mean = demo_stack.mean(axis=1)
    r_mean = robot_stack.mean(axis=1)
    nn = np.argmin(_distances(r_mean, d_mean, metric), axis=1)
    pred = demo_labels[nn]
    accuracy = float((pred == robot_labels).mean())
    confusion = np.zeros((len(class_ids), len(class_ids)), dtype=int)
    for t, p in zip(robot_labels, pred):
        confusion[index[t], index[p]] += 1

    k = robot_stack.shape[1]
    d_events = demo_stack.reshape(-1, demo_stack.shape[-1])
    d_event_labels = np.repeat(demo_labels, demo_stack.shape[1])
    r_events = robot_stack.reshape(-1, robot_stack.shape[-1])
    r_event_labels = np.repeat(robot_labels, k)
    nn_e = np.argmin(_distances(r_events, d_events, metric), axis=1)
    per_event = float((d_event_labels[nn_e] == r_event_labels).mean())

    return AnalogyResult(
        accuracy=accuracy,
        per_event_accuracy=per_event,
        confusion=confusion,
        class_ids=class_ids,
        chance=chance,
        n_queries=len(robot_labels),
        metric=metric,
    )


def shuffled_control(
    demo_latents, demo_labels, robot_latents, robot_labels, seed: int, metric="cosine"
) -> AnalogyResult:
    """Same retrieval with demonstration labels randomly permuted."""
    rng = np.random.default_rng(seed)
    shuffled = np.asarray(demo_labels)[rng.permutation(len(demo_labels))]
    return analogy_retrieval(demo_latents, shuffled, robot_latents, robot_labels, metric)


def binomial_stderr(p: float, n: int) -> float:
    return float(np.sqrt(max(p * (1 - p), 1e-12) / max(n, 1)))
