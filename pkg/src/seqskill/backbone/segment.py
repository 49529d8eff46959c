"""Event boundary extraction from encoder cross-attention.

Each frame is assigned to the event slot holding the most cross-attention
mass, under a monotone constraint (slot indices never decrease along the
frame axis) enforced by a small dynamic program. Contiguous runs become the
event intervals; unused slots yield empty intervals.
"""

import numpy as np
import torch

from ..errors import InputError
from .model import Backbone, _as_batch


def segment_events(bb: Backbone, v) -> list[tuple[int, int]]:
    """Split a frame sequence into at most K ordered intervals.

    Returns K (start, end) pairs, end-exclusive, that partition [0, m);
    empty intervals have start == end.
    """
    vb, _ = _as_batch(v, bb.config.frame_dim, "frame sequence")
    with torch.no_grad():
        _, attn = bb.enc_video(vb, return_attn=True)
    A = attn[0].detach().cpu().numpy()  # (K, m), rows sum to 1 over frames
    k_slots, m = A.shape

    score = np.full((m, k_slots), -np.inf)
    choice = np.zeros((m, k_slots), dtype=int)
    score[0] = A[:, 0]
    # prefix-max over slots keeps the assignment monotone
    for j in range(1, m):
        best = np.maximum.accumulate(score[j - 1])
        arg = np.zeros(k_slots, dtype=int)
        for k in range(1, k_slots):
            arg[k] = arg[k - 1] if score[j - 1][arg[k - 1]] >= score[j - 1][k] else k
        score[j] = A[:, j] + best
        choice[j] = arg
    assign = np.zeros(m, dtype=int)
    assign[m - 1] = int(np.argmax(score[m - 1]))
    for j in range(m - 1, 0, -1):
        assign[j - 1] = choice[j][assign[j]]

    intervals = []
    cursor = 0
    for k in range(k_slots):
        frames = np.nonzero(assign == k)[0]
        if frames.size == 0:
            intervals.append((cursor, cursor))
        else:
            start, end = int(frames[0]), int(frames[-1]) + 1
            if start != cursor:
                raise InputError("internal: non-contiguous slot assignment")
            intervals.append((start, end))
            cursor = end
    return intervals


def boundary_f1(
    predicted: list[tuple[int, int]],
    reference: list[tuple[int, int]],
    tolerance: int = 2,
) -> float:
    """F1 of interior boundaries with a +-tolerance frame window."""
    pb = sorted({s for s, e in predicted if e > s} - {0})
    rb = sorted({s for s, e in reference} - {0})
    if not pb and not rb:
        return 1.0
    if not pb or not rb:
        return 0.0
    matched_p = sum(1 for b in pb if any(abs(b - r) <= tolerance for r in rb))
    matched_r = sum(1 for r in rb if any(abs(r - b) <= tolerance for b in pb))
    precision = matched_p / len(pb)
    recall = matched_r / len(rb)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def random_partition(m: int, k_slots: int, rng: np.random.Generator):
    """Baseline segmentation: k-1 random cut points."""
    cuts = sorted(rng.choice(np.arange(1, m), size=k_slots - 1, replace=False))
    bounds = [0] + list(int(c) for c in cuts) + [m]
    return [(bounds[i], bounds[i + 1]) for i in range(k_slots)]
