"""Smoothed sequence alignment: value, exact gradient, and sequence losses.

The discrepancy between two sequences is the soft minimum, at temperature
``gamma``, over all monotone alignment paths of the summed pairwise cost:

    r(i, j) = cost(i, j) + softmin_gamma(r(i-1, j-1), r(i-1, j), r(i, j-1))
    softmin_gamma(a) = -gamma * log(sum_k exp(-a_k / gamma))

with r(0, 0) = 0 and +inf boundaries (stored as a large finite sentinel).
As gamma -> 0 the value converges to the classic hard alignment cost.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from ._backend import backend_name, kernels

METRICS = ("squared-euclidean", "euclidean")


@dataclass
class CostMatrix:
    """Pairwise discrepancy matrix between two sequences.

    entries[i, j] is the cost of matching step i of the first sequence to
    step j of the second. All entries must be finite and non-negative.
    """

    entries: np.ndarray
    metric_id: str = "squared-euclidean"

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.float64)
        if self.entries.ndim != 2 or self.entries.size == 0:
            raise InputError("cost matrix must be a non-empty 2-D array")
        if not np.all(np.isfinite(self.entries)):
            raise InputError("cost matrix contains non-finite entries")
        if np.any(self.entries < 0):
            raise InputError("cost matrix contains negative entries")

    @property
    def shape(self):
        return self.entries.shape


@dataclass
class SoftDtwResult:
    """Alignment value together with its gradient w.r.t. the cost entries."""

    value: float
    cost_grad: np.ndarray
    gamma: float


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (gamma > 0 and np.isfinite(gamma)):
        raise InputError(f"gamma must be a positive finite real, got {gamma}")
    return gamma


def _as_cost_array(c) -> np.ndarray:
    entries = c.entries if isinstance(c, CostMatrix) else np.asarray(c, dtype=np.float64)
    if entries.ndim != 2 or entries.size == 0:
        raise InputError("cost matrix must be a non-empty 2-D array")
    if not np.all(np.isfinite(entries)):
        raise InputError("cost matrix contains non-finite entries")
    return np.ascontiguousarray(entries, dtype=np.float64)


def _is_batch(c) -> bool:
    """A list/tuple is a batch only when its elements are matrices."""
    if not isinstance(c, (list, tuple)) or len(c) == 0:
        return False
    first = c[0]
    if isinstance(first, CostMatrix):
        return True
    try:
        return np.asarray(first, dtype=np.float64).ndim == 2
    except (ValueError, TypeError):
        return False


def pairwise_cost(x_seq, y_seq, metric_id: str = "squared-euclidean") -> CostMatrix:
    """Materialize the T1 x T2 pairwise cost between two feature sequences.

    Rows of ``x_seq`` and ``y_seq`` are feature vectors in the same space.
    """
    x = np.asarray(x_seq, dtype=np.float64)
    y = np.asarray(y_seq, dtype=np.float64)
    if x.ndim != 2 or y.ndim != 2 or x.shape[0] == 0 or y.shape[0] == 0:
        raise InputError("sequences must be non-empty 2-D arrays (steps x features)")
    if x.shape[1] != y.shape[1]:
        raise InputError(
            f"feature dimension mismatch: {x.shape[1]} vs {y.shape[1]}"
        )
    if metric_id not in METRICS:
        raise InputError(f"unknown metric {metric_id!r}; expected one of {METRICS}")
    sq = (
        np.sum(x * x, axis=1)[:, None]
        + np.sum(y * y, axis=1)[None, :]
        - 2.0 * (x @ y.T)
    )
    np.maximum(sq, 0.0, out=sq)
    entries = sq if metric_id == "squared-euclidean" else np.sqrt(sq)
    return CostMatrix(entries=entries, metric_id=metric_id)


def softdtw_value(c, gamma: float):
    """Smoothed alignment value of a cost matrix (or a list of them)."""
    gamma = _check_gamma(gamma)
    if _is_batch(c):
        return np.array([softdtw_value(ci, gamma) for ci in c])
    cost = _as_cost_array(c)
    m, n = cost.shape
    R = kernels.forward(cost, gamma)
    return float(R[m, n])


def softdtw_grad(c, gamma: float):
    """Value plus the exact gradient w.r.t. every cost entry.

    The gradient is the alignment-expectation matrix E produced by the
    backward dynamic program; entries lie in [0, 1].
    """
    gamma = _check_gamma(gamma)
    if _is_batch(c):
        return [softdtw_grad(ci, gamma) for ci in c]
    cost = _as_cost_array(c)
    m, n = cost.shape
    R = kernels.forward(cost, gamma)
    E = kernels.backward(cost, R, gamma)
    return SoftDtwResult(value=float(R[m, n]), cost_grad=E, gamma=gamma)


def _metric_x_grad(x, y, E, metric_id):
    if metric_id == "squared-euclidean":
        return 2.0 * (E.sum(axis=1)[:, None] * x - E @ y)
    # euclidean: d cost(i,j) / d x_i = (x_i - y_j) / ||x_i - y_j||, 0 at ties
    diff = x[:, None, :] - y[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    scale = np.divide(E, dist, out=np.zeros_like(E), where=dist > 0)
    return np.einsum("ij,ijd->id", scale, diff)


def softdtw_loss(x_seq, y_seq, gamma: float, metric_id: str = "squared-euclidean"):
    """Alignment discrepancy between two sequences and its gradient in x.

    Returns ``(value, x_grad)`` where x_grad has the shape of ``x_seq`` and
    chains the cost gradient through the pairwise metric.
    """
    c = pairwise_cost(x_seq, y_seq, metric_id)
    res = softdtw_grad(c, gamma)
    x = np.asarray(x_seq, dtype=np.float64)
    y = np.asarray(y_seq, dtype=np.float64)
    return res.value, _metric_x_grad(x, y, res.cost_grad, metric_id)


__all__ = [
    "CostMatrix",
    "SoftDtwResult",
    "METRICS",
    "pairwise_cost",
    "softdtw_value",
    "softdtw_grad",
    "softdtw_loss",
    "backend_name",
]
