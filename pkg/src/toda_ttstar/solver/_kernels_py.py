"""Pure NumPy kernels for the discretized radial Toda system.

Layout: ``w`` has shape (N, p) with p = n+1, grid index first. The Jacobian is
block tridiagonal; diagonal blocks ``D[k]`` are p x p, the off-diagonal blocks
are ``lower[k] * I`` and ``upper[k] * I``.
"""

from __future__ import annotations

import numpy as np

NEUMANN = 1
DIRICHLET = 0


def assemble(w, e2x, h, left_bc, left_data):
    """Residual F (N, p) and diagonal Jacobian blocks D (N, p, p).

    Interior rows: 0.25 * (second difference) / h^2 - e^{2x} (e^{w_j-w_{j-1}} - e^{w_{j+1}-w_j}).
    Row 0 is either the ghost-point slope condition w' = -left_data (Neumann)
    or w = left_data (Dirichlet); row N-1 is w = 0.
    """
    w = np.ascontiguousarray(w, dtype=float)
    n_pts, p = w.shape
    c = 0.25 / (h * h)
    a = e2x[:, None] * np.exp(w - np.roll(w, 1, axis=1))
    b = e2x[:, None] * np.exp(np.roll(w, -1, axis=1) - w)

    F = np.empty_like(w)
    F[1:-1] = c * (w[2:] - 2.0 * w[1:-1] + w[:-2]) - (a[1:-1] - b[1:-1])

    D = np.zeros((n_pts, p, p))
    idx = np.arange(p)
    D[:, idx, idx] = -2.0 * c - a - b
    np.add.at(D, (slice(None), idx, (idx - 1) % p), a)
    np.add.at(D, (slice(None), idx, (idx + 1) % p), b)

    if left_bc == NEUMANN:
        F[0] = c * (2.0 * w[1] - 2.0 * w[0] + 2.0 * h * np.asarray(left_data)) - (a[0] - b[0])
    else:
        F[0] = w[0] - np.asarray(left_data)
        D[0] = np.eye(p)
    F[-1] = w[-1]
    D[-1] = np.eye(p)
    return F, D


def block_tridiag_solve(D, lower, upper, rhs):
    """Solve lower[k] x[k-1] + D[k] x[k] + upper[k] x[k+1] = rhs[k] by block elimination."""
    n_pts, p = rhs.shape
    eye = np.eye(p)
    cp = np.empty((n_pts, p, p))
    dp = np.empty((n_pts, p))
    for k in range(n_pts):
        if k == 0:
            m, r = D[0], rhs[0]
        else:
            m = D[k] - lower[k] * cp[k - 1]
            r = rhs[k] - lower[k] * dp[k - 1]
        sol = np.linalg.solve(m, np.column_stack([r, upper[k] * eye]))
        dp[k] = sol[:, 0]
        cp[k] = sol[:, 1:]
    x = np.empty((n_pts, p))
    x[-1] = dp[-1]
    for k in range(n_pts - 2, -1, -1):
        x[k] = dp[k] - cp[k] @ x[k + 1]
    return x
