"""Pure-numpy alignment kernels, vectorized over anti-diagonals.

Fallback used when the compiled extension is unavailable. Both backends share
the same contract:

  forward(cost, gamma)      -> accumulated table R of shape (m+2, n+2)
  backward(cost, R, gamma)  -> alignment-expectation matrix E of shape (m, n)

The smoothed value is R[m, n]; E[i, j] is the derivative of the value with
respect to cost[i, j]. Out-of-region cells carry a large finite sentinel
(BIG) instead of infinities so the log-space arithmetic never produces NaN.
"""

import numpy as np

BIG = 1e30


def _softmin3(a, b, c, gamma):
    lo = np.minimum(np.minimum(a, b), c)
    s = (
        np.exp((lo - a) / gamma)
        + np.exp((lo - b) / gamma)
        + np.exp((lo - c) / gamma)
    )
    return lo - gamma * np.log(s)


def forward(cost: np.ndarray, gamma: float) -> np.ndarray:
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    m, n = cost.shape
    R = np.full((m + 2, n + 2), BIG, dtype=np.float64)
    R[0, 0] = 0.0
    for d in range(2, m + n + 1):
        i = np.arange(max(1, d - n), min(m, d - 1) + 1)
        j = d - i
        R[i, j] = cost[i - 1, j - 1] + _softmin3(
            R[i - 1, j - 1], R[i - 1, j], R[i, j - 1], gamma
        )
    return R


def backward(cost: np.ndarray, R: np.ndarray, gamma: float) -> np.ndarray:
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    m, n = cost.shape
    D = np.zeros((m + 2, n + 2), dtype=np.float64)
    D[1 : m + 1, 1 : n + 1] = cost
    Rb = np.array(R, dtype=np.float64, copy=True)
    Rb[:, n + 1] = -BIG
    Rb[m + 1, :] = -BIG
    Rb[m + 1, n + 1] = Rb[m, n]
    E = np.zeros((m + 2, n + 2), dtype=np.float64)
    E[m + 1, n + 1] = 1.0
    for d in range(m + n, 1, -1):
        i = np.arange(max(1, d - n), min(m, d - 1) + 1)
        j = d - i
        # exact-arithmetic exponents are <= 0; the clamp absorbs rounding only
        a = np.exp(np.minimum(Rb[i + 1, j] - Rb[i, j] - D[i + 1, j], 0.0) / gamma)
        b = np.exp(np.minimum(Rb[i, j + 1] - Rb[i, j] - D[i, j + 1], 0.0) / gamma)
        c = np.exp(
            np.minimum(Rb[i + 1, j + 1] - Rb[i, j] - D[i + 1, j + 1], 0.0) / gamma
        )
        E[i, j] = a * E[i + 1, j] + b * E[i, j + 1] + c * E[i + 1, j + 1]
    return E[1 : m + 1, 1 : n + 1]
