"""Brute-force alignment oracle.

Enumerates every monotone alignment path explicitly. Exponential in the
sequence lengths, so only usable for tiny inputs, but entirely independent of
the dynamic programs in the kernels: the soft value is a direct
log-sum-exp over per-path costs, the hard value a direct minimum.
"""

from functools import lru_cache

import numpy as np


def alignment_paths(t1: int, t2: int):
    """All monotone paths from (0, 0) to (t1-1, t2-1) with steps
    (1,0), (0,1), (1,1). Returns a list of index-pair lists."""
    paths = []

    def extend(path):
        i, j = path[-1]
        if i == t1 - 1 and j == t2 - 1:
            paths.append(list(path))
            return
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            ni, nj = i + di, j + dj
            if ni < t1 and nj < t2:
                path.append((ni, nj))
                extend(path)
                path.pop()

    extend([(0, 0)])
    return paths


def path_cost(cost: np.ndarray, path) -> float:
    return float(sum(cost[i, j] for i, j in path))


def brute_force_value(cost: np.ndarray, gamma: float | None = None) -> float:
    """Alignment value by explicit path enumeration.

    With gamma=None returns the hard minimum over paths; otherwise the
    smoothed value -gamma * logsumexp(-costs / gamma).
    """
    cost = np.asarray(cost, dtype=np.float64)
    costs = np.array([path_cost(cost, p) for p in alignment_paths(*cost.shape)])
    if gamma is None:
        return float(costs.min())
    lo = costs.min()
    return float(lo - gamma * np.log(np.sum(np.exp((lo - costs) / gamma))))


def brute_force_argmin_path(cost: np.ndarray):
    cost = np.asarray(cost, dtype=np.float64)
    paths = alignment_paths(*cost.shape)
    costs = [path_cost(cost, p) for p in paths]
    return paths[int(np.argmin(costs))]


def dtw_value(cost: np.ndarray) -> float:
    """Classic hard alignment cost by dynamic programming (second oracle)."""
    cost = np.asarray(cost, dtype=np.float64)
    m, n = cost.shape
    r = np.full((m + 1, n + 1), np.inf)
    r[0, 0] = 0.0
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            r[i, j] = cost[i - 1, j - 1] + min(
                r[i - 1, j - 1], r[i - 1, j], r[i, j - 1]
            )
    return float(r[m, n])


@lru_cache(maxsize=None)
def path_count(t1: int, t2: int) -> int:
    """Number of monotone alignment paths for a t1 x t2 cost matrix."""
    if t1 == 1 or t2 == 1:
        return 1
    return (
        path_count(t1 - 1, t2 - 1)
        + path_count(t1 - 1, t2)
        + path_count(t1, t2 - 1)
    )
