# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled alignment kernels: plain-loop soft dynamic programs.

Same contract as seqskill.softdtw._kernels_py (the fallback): forward returns
the accumulated table R of shape (m+2, n+2) with value at R[m, n]; backward
returns the m x n alignment-expectation matrix E.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()

cdef double BIG = 1e30


cdef inline double _softmin3(double a, double b, double c, double gamma) nogil:
    cdef double lo = a
    if b < lo:
        lo = b
    if c < lo:
        lo = c
    cdef double s = (
        exp((lo - a) / gamma) + exp((lo - b) / gamma) + exp((lo - c) / gamma)
    )
    return lo - gamma * log(s)


def forward(cost, double gamma):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(
        cost, dtype=np.float64
    )
    cdef Py_ssize_t m = C.shape[0]
    cdef Py_ssize_t n = C.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] R = np.full(
        (m + 2, n + 2), BIG, dtype=np.float64
    )
    cdef double[:, ::1] r = R
    cdef double[:, ::1] c = C
    cdef Py_ssize_t i, j
    r[0, 0] = 0.0
    with nogil:
        for i in range(1, m + 1):
            for j in range(1, n + 1):
                r[i, j] = c[i - 1, j - 1] + _softmin3(
                    r[i - 1, j - 1], r[i - 1, j], r[i, j - 1], gamma
                )
    return R


def backward(cost, R_in, double gamma):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(
        cost, dtype=np.float64
    )
    cdef Py_ssize_t m = C.shape[0]
    cdef Py_ssize_t n = C.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] D = np.zeros(
        (m + 2, n + 2), dtype=np.float64
    )
    D[1 : m + 1, 1 : n + 1] = C
    cdef cnp.ndarray[cnp.float64_t, ndim=2] R = np.array(
        R_in, dtype=np.float64, copy=True
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=2] E = np.zeros(
        (m + 2, n + 2), dtype=np.float64
    )
    cdef double[:, ::1] d = D
    cdef double[:, ::1] r = R
    cdef double[:, ::1] e = E
    cdef Py_ssize_t i, j
    cdef double wa, wb, wc
    with nogil:
        for i in range(m + 2):
            r[i, n + 1] = -BIG
        for j in range(n + 2):
            r[m + 1, j] = -BIG
        r[m + 1, n + 1] = r[m, n]
        e[m + 1, n + 1] = 1.0
        for j in range(n, 0, -1):
            for i in range(m, 0, -1):
                # exact-arithmetic exponents are <= 0; clamp absorbs rounding
                wa = r[i + 1, j] - r[i, j] - d[i + 1, j]
                wb = r[i, j + 1] - r[i, j] - d[i, j + 1]
                wc = r[i + 1, j + 1] - r[i, j] - d[i + 1, j + 1]
                if wa > 0.0:
                    wa = 0.0
                if wb > 0.0:
                    wb = 0.0
                if wc > 0.0:
                    wc = 0.0
                e[i, j] = (
                    exp(wa / gamma) * e[i + 1, j]
                    + exp(wb / gamma) * e[i, j + 1]
                    + exp(wc / gamma) * e[i + 1, j + 1]
                )
    return E[1 : m + 1, 1 : n + 1]
