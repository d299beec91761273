"""Kernel backend selection.

The compiled extension is used when it imports; setting
``TODA_TTSTAR_BACKEND=python`` forces the NumPy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _kernels_py

NEUMANN = _kernels_py.NEUMANN
DIRICHLET = _kernels_py.DIRICHLET


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels_c
    except ImportError:
        return None
    return _kernels_c


_COMPILED = _load_compiled()


def available_backends() -> tuple[str, ...]:
    return ("cython", "python") if _COMPILED is not None else ("python",)


def get_backend(name: str | None = None) -> ModuleType:
    """Kernel module by name; ``None`` means the import-time default."""
    if name is None:
        name = BACKEND
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _COMPILED is None:
            raise ImportError("compiled kernels are not built")
        return _COMPILED
    raise ValueError(f"unknown backend {name!r}")


if os.environ.get("TODA_TTSTAR_BACKEND", "").lower() == "python" or _COMPILED is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def off_diagonals(n_pts: int, h: float, left_bc: int) -> tuple[np.ndarray, np.ndarray]:
    """Scalar coefficients of the identity off-diagonal Jacobian blocks."""
    c = 0.25 / (h * h)
    lower = np.full(n_pts, c)
    upper = np.full(n_pts, c)
    lower[0] = 0.0
    upper[0] = 2.0 * c if left_bc == NEUMANN else 0.0
    lower[-1] = upper[-1] = 0.0
    return lower, upper


def dense_jacobian(D: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Assemble the full (N p) x (N p) Jacobian, rows ordered grid-major."""
    n_pts, p, _ = D.shape
    J = np.zeros((n_pts * p, n_pts * p))
    eye = np.eye(p)
    for k in range(n_pts):
        s = slice(k * p, (k + 1) * p)
        J[s, s] = D[k]
        if k > 0:
            J[s, (k - 1) * p : k * p] = lower[k] * eye
        if k < n_pts - 1:
            J[s, (k + 1) * p : (k + 2) * p] = upper[k] * eye
    return J
