"""Frame algebra for tt*-structures over C*.

A structure (E, eta, g, Phi) is modelled in a fixed global frame e_0..e_n of
the trivial bundle: ``eta`` and ``g`` are Gram matrices, ``phi`` is the
coefficient of dt in Phi, acting on coordinate vectors (Phi e_j = sum_i
phi[i, j] e_i).

Conventions
-----------
* eta(a, b) = a^T eta b is complex bilinear.
* g(a, b) = a^H g b is conjugate-linear in the *first* slot, so the Toda
  metric g(e_i, e_j) = exp(w_i) delta_ij is real and diagonal.
* kappa is the conjugate-linear map v -> K conj(v) defined by
  g(a, b) = eta(kappa(a), b). With the conventions above K = eta^{-1} g^T, and
  kappa^2 = Id reads K conj(K) = I. Flipping the sesquilinear slot transposes
  K but leaves kappa^2 = Id unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AntiSymmetryError, FrameError

DEFAULT_TOL = 1e-12
SOLVER_TOL = 1e-8


def root_of_unity(n: int) -> complex:
    """omega = exp(2 pi i / (n+1))."""
    return np.exp(2j * np.pi / (n + 1))


def _as_square(name: str, a, size: int | None = None) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise FrameError(f"{name} must be a square matrix, got shape {arr.shape}")
    if size is not None and arr.shape[0] != size:
        raise FrameError(f"{name} has size {arr.shape[0]}, expected {size}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FrameStructure:
    """Concrete tt*-structure data of rank n+1 in a fixed frame."""

    n: int
    eta: np.ndarray
    g: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise FrameError(f"rank parameter n must be an integer >= 1, got {self.n}")
        size = self.n + 1
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "eta", _as_square("eta", self.eta, size))
        object.__setattr__(self, "g", _as_square("g", self.g, size))
        object.__setattr__(self, "phi", _as_square("phi", self.phi, size))

    @property
    def rank(self) -> int:
        return self.n + 1

    def transform(self, frame_change) -> "FrameStructure":
        """Express the structure in the frame whose vectors are the columns of ``frame_change``."""
        p = np.asarray(frame_change, dtype=complex)
        if p.shape != (self.rank, self.rank):
            raise FrameError("frame change has the wrong shape")
        if abs(np.linalg.det(p)) < DEFAULT_TOL:
            raise FrameError("frame change is singular")
        return FrameStructure(
            self.n,
            p.T @ self.eta @ p,
            p.conj().T @ self.g @ p,
            np.linalg.solve(p, self.phi @ p),
        )

    def twisted(self, factor: complex) -> "FrameStructure":
        """The structure (E, eta, g, factor * Phi)."""
        return FrameStructure(self.n, self.eta, self.g, factor * self.phi)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eta": _matrix_to_json(self.eta),
            "g": _matrix_to_json(self.g),
            "phi": _matrix_to_json(self.phi),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FrameStructure":
        try:
            return cls(
                int(data["n"]),
                _matrix_from_json(data["eta"]),
                _matrix_from_json(data["g"]),
                _matrix_from_json(data["phi"]),
            )
        except (KeyError, TypeError) as exc:
            raise FrameError(f"malformed frame structure: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FrameStructure":
        return cls.from_dict(json.loads(text))


def _matrix_to_json(a: np.ndarray) -> list:
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in a]


def _matrix_from_json(rows) -> np.ndarray:
    out = []
    for row in rows:
        out_row = []
        for z in row:
            if isinstance(z, dict):
                out_row.append(complex(float(z["re"]), float(z.get("im", 0.0))))
            else:
                out_row.append(complex(float(z)))
        out.append(out_row)
    return np.array(out, dtype=complex)


@dataclass(frozen=True, eq=False)
class KappaMatrix:
    """Matrix K of the conjugate-linear involution kappa(v) = K conj(v)."""

    k: np.ndarray

    def apply(self, v) -> np.ndarray:
        return self.k @ np.conj(np.asarray(v, dtype=complex))

    def involution_residual(self) -> float:
        size = self.k.shape[0]
        return float(np.abs(self.k @ self.k.conj() - np.eye(size)).max())


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidityReport:
    checks: tuple[Check, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "checks": [
                {"name": c.name, "residual": c.residual, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


# ---------------------------------------------------------------------------
# Canonical Toda frame


def pairing_index(n: int, l: int, j: int) -> int:
    """Partner index l - j - 1 (mod n+1) of the anti-symmetry condition."""
    return (l - j - 1) % (n + 1)


def anti_symmetry_residual(n: int, l: int, values: Sequence[float]) -> float:
    v = np.asarray(values, dtype=float)
    if v.shape != (n + 1,):
        raise FrameError(f"expected {n + 1} values, got {v.shape}")
    idx = [(l - j - 1) % (n + 1) for j in range(n + 1)]
    return float(np.abs(v + v[idx]).max())


def toda_eta(n: int, l: int) -> np.ndarray:
    """eta(e_i, e_j) = 1 iff i + j = l - 1 (mod n+1)."""
    size = n + 1
    eta = np.zeros((size, size))
    for i in range(size):
        eta[i, (l - 1 - i) % size] = 1.0
    return eta


def cyclic_shift_matrix(n: int) -> np.ndarray:
    """Phi e_j = e_{j+1}, Phi e_n = e_0: ones on the subdiagonal and in the top-right corner."""
    size = n + 1
    p = np.zeros((size, size))
    for j in range(size):
        p[(j + 1) % size, j] = 1.0
    return p


def build_toda_frame(n: int, l: int, w: Sequence[float], tol: float = DEFAULT_TOL) -> FrameStructure:
    """Canonical Toda frame for the tuple w with anti-symmetry parameter l.

    Raises:
        FrameError: l outside 0..n or wrong tuple length.
        AntiSymmetryError: w_j + w_{l-j-1} != 0 beyond ``tol``.
    """
    if not 0 <= l <= n:
        raise FrameError(f"l must lie in 0..{n}, got {l}")
    w = np.asarray(w, dtype=float)
    if w.shape != (n + 1,):
        raise FrameError(f"w must have {n + 1} entries")
    res = anti_symmetry_residual(n, l, w)
    if res > tol:
        raise AntiSymmetryError(f"w violates w_j + w_(l-j-1) = 0 (residual {res:.3g})")
    return FrameStructure(n, toda_eta(n, l), np.diag(np.exp(w)), cyclic_shift_matrix(n))


def toda_weights(s: FrameStructure) -> np.ndarray:
    """w_j = log g(e_j, e_j) read off a diagonal metric."""
    return np.log(np.real(np.diag(s.g)))


# ---------------------------------------------------------------------------
# Validity, kappa, symmetry, isomorphisms


def compute_kappa(s: FrameStructure) -> KappaMatrix:
    """K with a^H g b = (K conj(a))^T eta b for all a, b.

    Raises:
        FrameError: eta is singular.
    """
    if abs(np.linalg.det(s.eta)) <= DEFAULT_TOL:
        raise FrameError("eta is degenerate")
    k = np.linalg.solve(s.eta, s.g.T)
    k.setflags(write=False)
    return KappaMatrix(k)


def validate_ttstar_frame(s: FrameStructure, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Evaluate the pointwise tt*-conditions on a frame structure."""
    size = s.rank
    checks = []

    sym = float(np.abs(s.eta - s.eta.T).max())
    det = abs(np.linalg.det(s.eta))
    checks.append(
        Check("eta_symmetric_nondegenerate", sym, bool(sym < tol and det > tol), f"|det eta| = {det:.6g}")
    )

    herm = float(np.abs(s.g - s.g.conj().T).max())
    min_eig = float(np.linalg.eigvalsh(0.5 * (s.g + s.g.conj().T)).min())
    checks.append(
        Check("g_hermitian_positive", herm, bool(herm < tol and min_eig > 0), f"min eigenvalue = {min_eig:.6g}")
    )

    sa = float(np.abs(s.phi.T @ s.eta - s.eta @ s.phi).max())
    checks.append(Check("phi_eta_self_adjoint", sa, bool(sa < tol)))

    if det > tol:
        kap = compute_kappa(s).involution_residual()
        checks.append(Check("kappa_involution", kap, bool(kap < tol)))
    else:
        checks.append(Check("kappa_involution", float("inf"), False, "eta is degenerate"))
    return ValidityReport(tuple(checks), tol)


def check_zn_symmetry(s: FrameStructure, tol: float = DEFAULT_TOL) -> bool:
    """True iff g(omega^i e_i, omega^j e_j) = g(e_i, e_j) for all i, j."""
    idx = np.arange(s.rank)
    phase = np.exp(2j * np.pi * (idx[None, :] - idx[:, None]) / s.rank)
    return bool(np.abs((phase - 1.0) * s.g).max() < tol)


def isomorphism_residuals(t, s1: FrameStructure, s2: FrameStructure) -> dict[str, float]:
    """Residuals of the three isomorphism conditions for the bundle map t: E1 -> E2."""
    t = np.asarray(t, dtype=complex)
    if s1.rank != s2.rank or t.shape != (s1.rank, s1.rank):
        raise FrameError("dimension mismatch between map and structures")
    if abs(np.linalg.det(t)) <= DEFAULT_TOL:
        raise FrameError("isomorphism candidate is singular")
    return {
        "eta": float(np.abs(t.T @ s2.eta @ t - s1.eta).max()),
        "g": float(np.abs(t.conj().T @ s2.g @ t - s1.g).max()),
        "phi": float(np.abs(t @ s1.phi - s2.phi @ t).max()),
    }


def verify_isomorphism(t, s1: FrameStructure, s2: FrameStructure, tol: float = DEFAULT_TOL) -> bool:
    return all(r < tol for r in isomorphism_residuals(t, s1, s2).values())


def omega_automorphism(n: int, l: int) -> np.ndarray:
    """diag(omega^(j + (1-l)/2)) with omega^(1/2) = exp(i pi / (n+1)).

    An isomorphism from the canonical Toda structure to its omega-twin.
    """
    j = np.arange(n + 1)
    return np.diag(np.exp(1j * np.pi * (2 * j + 1 - l) / (n + 1)))


# ---------------------------------------------------------------------------
# sinh-Gordon fixtures (rank 2)


def sinh_gordon_frame(w: float) -> FrameStructure:
    """eta = antidiag(1, 1), Phi = [[0, 1], [1, 0]] dt, g = diag(e^w, e^-w)."""
    return build_toda_frame(1, 0, (w, -w))


def sinh_gordon_diagonal_frame(w: float) -> FrameStructure:
    """The same structure with eta = I and Phi = diag(1, -1) dt.

    g(e_0, e_0) = g(e_1, e_1) = cosh w and g(e_0, e_1) = -i sinh w.
    """
    c, sh = np.cosh(w), np.sinh(w)
    g = np.array([[c, -1j * sh], [1j * sh, c]])
    return FrameStructure(1, np.eye(2), g, np.diag([1.0, -1.0]))


def sinh_gordon_symmetric_frame_change() -> np.ndarray:
    """Columns tau_0 = (e_0 - i e_1)/2, tau_1 = (e_0 + i e_1)/2 of the diagonal-Phi frame."""
    return np.array([[0.5, 0.5], [-0.5j, 0.5j]])


def sinh_gordon_isomorphism() -> np.ndarray:
    """Bundle map from sinh_gordon_frame(w) to sinh_gordon_diagonal_frame(w), any w."""
    return np.array([[1.0, 1.0], [1j, -1j]]) / np.sqrt(2.0)
