# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as the NumPy fallback in _kernels_py."""

import numpy as np
from libc.math cimport exp, fabs

cdef enum:
    NEUMANN = 1


def assemble(w_in, e2x_in, double h, int left_bc, left_data_in):
    cdef const double[:, ::1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef const double[::1] e2x = np.ascontiguousarray(e2x_in, dtype=np.float64)
    cdef const double[::1] left = np.ascontiguousarray(np.broadcast_to(left_data_in, (w.shape[1],)), dtype=np.float64)
    cdef Py_ssize_t n_pts = w.shape[0], p = w.shape[1], k, j, jm, jp
    F_arr = np.empty((n_pts, p))
    D_arr = np.zeros((n_pts, p, p))
    cdef double[:, ::1] F = F_arr
    cdef double[:, :, ::1] D = D_arr
    cdef double c = 0.25 / (h * h), a, b, lap
    for k in range(n_pts - 1):
        for j in range(p):
            jm = j - 1 if j > 0 else p - 1
            jp = j + 1 if j < p - 1 else 0
            a = e2x[k] * exp(w[k, j] - w[k, jm])
            b = e2x[k] * exp(w[k, jp] - w[k, j])
            if k == 0:
                if left_bc != NEUMANN:
                    F[0, j] = w[0, j] - left[j]
                    D[0, j, j] = 1.0
                    continue
                lap = 2.0 * w[1, j] - 2.0 * w[0, j] + 2.0 * h * left[j]
            else:
                lap = w[k + 1, j] - 2.0 * w[k, j] + w[k - 1, j]
            F[k, j] = c * lap - (a - b)
            D[k, j, j] += -2.0 * c - a - b
            D[k, j, jm] += a
            D[k, j, jp] += b
    for j in range(p):
        F[n_pts - 1, j] = w[n_pts - 1, j]
        D[n_pts - 1, j, j] = 1.0
    return F_arr, D_arr


cdef int _lu_solve(double* A, double* B, Py_ssize_t p, Py_ssize_t m) noexcept nogil:
    """Gaussian elimination with partial pivoting; B (p x m) is overwritten by A^-1 B."""
    cdef Py_ssize_t i, j, k, piv
    cdef double t, big
    for k in range(p):
        piv = k
        big = fabs(A[k * p + k])
        for i in range(k + 1, p):
            if fabs(A[i * p + k]) > big:
                big = fabs(A[i * p + k])
                piv = i
        if big == 0.0:
            return -1
        if piv != k:
            for j in range(p):
                t = A[k * p + j]; A[k * p + j] = A[piv * p + j]; A[piv * p + j] = t
            for j in range(m):
                t = B[k * m + j]; B[k * m + j] = B[piv * m + j]; B[piv * m + j] = t
        for i in range(k + 1, p):
            t = A[i * p + k] / A[k * p + k]
            if t != 0.0:
                for j in range(k + 1, p):
                    A[i * p + j] -= t * A[k * p + j]
                for j in range(m):
                    B[i * m + j] -= t * B[k * m + j]
    for k in range(p - 1, -1, -1):
        for j in range(m):
            t = B[k * m + j]
            for i in range(k + 1, p):
                t -= A[k * p + i] * B[i * m + j]
            B[k * m + j] = t / A[k * p + k]
    return 0


def block_tridiag_solve(D_in, lower_in, upper_in, rhs_in):
    cdef const double[:, :, ::1] D = np.ascontiguousarray(D_in, dtype=np.float64)
    cdef const double[::1] lower = np.ascontiguousarray(lower_in, dtype=np.float64)
    cdef const double[::1] upper = np.ascontiguousarray(upper_in, dtype=np.float64)
    cdef const double[:, ::1] rhs = np.ascontiguousarray(rhs_in, dtype=np.float64)
    cdef Py_ssize_t n_pts = rhs.shape[0], p = rhs.shape[1], m = p + 1, k, i, j
    cp_arr = np.empty((n_pts, p, p))
    dp_arr = np.empty((n_pts, p))
    x_arr = np.empty((n_pts, p))
    cdef double[:, :, ::1] cp = cp_arr
    cdef double[:, ::1] dp = dp_arr
    cdef double[:, ::1] x = x_arr
    cdef double[:, ::1] A = np.empty((p, p))
    cdef double[:, ::1] B = np.empty((p, m))
    cdef double t
    cdef int status = 0
    with nogil:
        for k in range(n_pts):
            for i in range(p):
                for j in range(p):
                    A[i, j] = D[k, i, j]
                    if k > 0:
                        A[i, j] -= lower[k] * cp[k - 1, i, j]
                    B[i, 1 + j] = upper[k] if i == j else 0.0
                B[i, 0] = rhs[k, i]
                if k > 0:
                    B[i, 0] -= lower[k] * dp[k - 1, i]
            status = _lu_solve(&A[0, 0], &B[0, 0], p, m)
            if status != 0:
                break
            for i in range(p):
                dp[k, i] = B[i, 0]
                for j in range(p):
                    cp[k, i, j] = B[i, 1 + j]
        if status == 0:
            for i in range(p):
                x[n_pts - 1, i] = dp[n_pts - 1, i]
            for k in range(n_pts - 2, -1, -1):
                for i in range(p):
                    t = dp[k, i]
                    for j in range(p):
                        t -= cp[k, i, j] * x[k + 1, j]
                    x[k, i] = t
    if status != 0:
        raise np.linalg.LinAlgError("singular block in block-tridiagonal sweep")
    return x_arr
