"""Z_{n+1}-fixed points: eigenvalue cycles, shift operators, DFT frames and l-normalization.

Index shifts follow the convention new_j = old_{j+s}, with s reported in 0..n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    FrameStructure,
    anti_symmetry_residual,
    build_toda_frame,
    cyclic_shift_matrix,
    toda_eta,
    validate_ttstar_frame,
)
from .cyclotomic import CyclotomicMatrix
from .errors import AntiSymmetryError, FrameError, NotFixedPointError

ARITHMETIC_MODES = ("float", "exact")


def _check_sign(epsilon: int) -> int:
    if epsilon not in (-1, 1):
        raise ValueError(f"epsilon must be +1 or -1, got {epsilon!r}")
    return int(epsilon)


# ---------------------------------------------------------------------------
# Shift operator and DFT frame change


@dataclass(frozen=True, eq=False)
class ShiftOperator:
    """T tau_j = tau_{j-1}, T tau_0 = epsilon tau_n (ones on the superdiagonal, epsilon bottom-left)."""

    n: int
    epsilon: int
    matrix: np.ndarray

    def power_identity_holds(self) -> bool:
        """Exact integer check of T^(n+1) = epsilon * Id."""
        p = np.linalg.matrix_power(self.matrix, self.n + 1)
        return bool(np.array_equal(p, self.epsilon * np.eye(self.n + 1, dtype=np.int64)))

    def exact(self) -> CyclotomicMatrix:
        order = 2 * (self.n + 1)
        return CyclotomicMatrix.from_rationals(order, self.matrix.tolist())


def build_shift_operator(n: int, epsilon: int) -> ShiftOperator:
    if n < 1:
        raise ValueError("n must be >= 1")
    epsilon = _check_sign(epsilon)
    size = n + 1
    m = np.zeros((size, size), dtype=np.int64)
    for j in range(n):
        m[j, j + 1] = 1
    m[n, 0] = epsilon
    m.setflags(write=False)
    return ShiftOperator(n, epsilon, m)


@dataclass(frozen=True, eq=False)
class DftFrameChange:
    """L = (n+1)^(-1/2) * D * F with F_jk = omega^(jk), D = I (epsilon=+1) or diag(omega^(-j/2)).

    In float mode ``matrix`` is L itself. In exact mode it is the unnormalized
    sqrt(n+1) * L as a CyclotomicMatrix over Q(exp(i pi/(n+1))); the scalar
    cancels in every conjugation L^-1 X L, so it is never needed.
    """

    n: int
    epsilon: int
    arithmetic: str
    matrix: np.ndarray | CyclotomicMatrix

    @property
    def order(self) -> int:
        """Order of the root zeta = omega^(1/2) = exp(i pi/(n+1)) generating the field."""
        return 2 * (self.n + 1)

    def inverse(self):
        """L^-1 (exact mode: inverse of the unnormalized matrix)."""
        if self.arithmetic == "float":
            return np.linalg.inv(self.matrix)
        size, order = self.n + 1, self.order
        conj_f = CyclotomicMatrix.from_root_exponents(
            order, [[-2 * j * k for k in range(size)] for j in range(size)]
        )
        conj_d = CyclotomicMatrix.diagonal_roots(order, self._d_exponents(negate=True))
        return (conj_f @ conj_d).scale(Fraction(1, size))

    def _d_exponents(self, negate: bool = False) -> list[int]:
        size = self.n + 1
        if self.epsilon == 1:
            return [0] * size
        return [j if negate else -j for j in range(size)]

    def conjugate(self, x):
        """L^-1 X L in the same arithmetic as the frame change."""
        if self.arithmetic == "float":
            return np.linalg.solve(self.matrix, np.asarray(x, dtype=complex) @ self.matrix)
        return self.inverse() @ x @ self.matrix

    def expected_shift_diagonal(self):
        """L^-1 T L: diag(omega^j) for epsilon=+1, omega^(-1/2) diag(omega^j) for epsilon=-1."""
        size = self.n + 1
        offset = 0 if self.epsilon == 1 else -1
        exps = [2 * j + offset for j in range(size)]
        if self.arithmetic == "exact":
            return CyclotomicMatrix.diagonal_roots(self.order, exps)
        return np.diag(np.exp(1j * np.pi * np.array(exps) / size))

    def omega_diagonal(self):
        """diag(1, omega, ..., omega^n) in the matching arithmetic."""
        size = self.n + 1
        if self.arithmetic == "exact":
            return CyclotomicMatrix.diagonal_roots(self.order, [2 * j for j in range(size)])
        return np.diag(np.exp(2j * np.pi * np.arange(size) / size))

    def cyclic_target(self):
        """The cyclic permutation Phi of the canonical Toda frame."""
        p = cyclic_shift_matrix(self.n)
        if self.arithmetic == "exact":
            return CyclotomicMatrix.from_rationals(self.order, p.astype(int).tolist())
        return p


def build_dft_frame_change(n: int, epsilon: int, arithmetic: str = "float") -> DftFrameChange:
    if n < 1:
        raise ValueError("n must be >= 1")
    epsilon = _check_sign(epsilon)
    if arithmetic not in ARITHMETIC_MODES:
        raise ValueError(f"arithmetic must be one of {ARITHMETIC_MODES}")
    size = n + 1
    order = 2 * size
    # zeta = exp(i pi / (n+1)); omega = zeta^2, omega^(-j/2) = zeta^(-j)
    d_exps = [0] * size if epsilon == 1 else [-j for j in range(size)]
    exps = [[d_exps[j] + 2 * j * k for k in range(size)] for j in range(size)]
    if arithmetic == "exact":
        mat = CyclotomicMatrix.from_root_exponents(order, exps)
    else:
        mat = np.exp(1j * np.pi * np.array(exps, dtype=float) / size) / np.sqrt(size)
        mat.setflags(write=False)
    return DftFrameChange(n, epsilon, arithmetic, mat)


def determine_l(epsilon: int) -> int:
    """T^(n+1) = -Id gives l = 0, T^(n+1) = +Id gives l = 1."""
    return 0 if _check_sign(epsilon) == -1 else 1


def epsilon_for_l(l: int) -> int:
    if l not in (0, 1):
        raise ValueError("only l in {0, 1} has an associated sign")
    return -1 if l == 0 else 1


# ---------------------------------------------------------------------------
# Eigenvalue cycle of Phi


@dataclass(frozen=True, eq=False)
class EigenCycle:
    u0: complex
    ordering: tuple[int, ...]
    eigenvalues: np.ndarray

    def ordered(self) -> np.ndarray:
        return self.eigenvalues[list(self.ordering)]


def _match_cycle(vals: np.ndarray, tol: float) -> EigenCycle:
    size = len(vals)
    mods = np.abs(vals)
    top = mods.max()
    if top == 0.0:
        raise NotFixedPointError("Phi vanishes")
    candidates = np.flatnonzero(mods >= top * (1 - tol))
    args = np.mod(np.angle(vals[candidates]), 2 * np.pi)
    # arguments within tol of 2*pi count as 0
    args[args > 2 * np.pi - tol] = 0.0
    u0 = vals[candidates[np.argmin(args)]]
    omega = np.exp(2j * np.pi / size)
    ordering = []
    used = set()
    for j in range(size):
        target = u0 * omega**j
        dist = np.abs(vals - target)
        k = int(np.argmin(dist))
        if dist[k] > tol * abs(u0) or k in used:
            raise NotFixedPointError(
                f"spectrum of Phi is not an omega-cycle (no eigenvalue near u0*omega^{j})"
            )
        used.add(k)
        ordering.append(k)
    return EigenCycle(complex(u0), tuple(ordering), vals)


def phi_eigenvalue_cycle(phi, tol: float = 1e-8) -> EigenCycle:
    """Order the spectrum of Phi as u0 * omega^j, j = 0..n.

    u0 is the eigenvalue of largest modulus with the smallest argument in
    [0, 2 pi). ``tol`` is relative to |u0|.

    Raises:
        NotFixedPointError: Phi is zero or its spectrum is not one omega-cycle.
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
        raise FrameError("phi must be square")
    if not np.any(phi):
        raise NotFixedPointError("Phi vanishes")
    return _match_cycle(np.linalg.eigvals(phi), tol)


# ---------------------------------------------------------------------------
# Canonicalization


def _solve_gf2(rows: list[tuple[int, int]], forced: dict[int, int]) -> dict[int, int] | None:
    """Solve a linear system over GF(2); rows are (bitmask, rhs). Free variables default to 0."""
    pivots: dict[int, tuple[int, int]] = {}
    all_rows = list(rows) + [(1 << var, bit) for var, bit in forced.items()]
    for mask, rhs in all_rows:
        for col, (pm, pr) in pivots.items():
            if mask >> col & 1:
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return None
            continue
        col = (mask & -mask).bit_length() - 1
        for c, (pm, pr) in list(pivots.items()):
            if pm >> col & 1:
                pivots[c] = (pm ^ mask, pr ^ rhs)
        pivots[col] = (mask, rhs)
    nvars = max([m.bit_length() for m, _ in all_rows] + [0])
    solution = {v: 0 for v in range(nvars) if v not in pivots}
    for col, (pm, pr) in pivots.items():
        free = pm & ~(1 << col)
        parity = 0
        for v, bit in solution.items():
            if free >> v & 1:
                parity ^= bit
        solution[col] = pr ^ parity
    return solution


def _frame_signs(gram: np.ndarray, ratio_tol: float = 1e-4, floor: float = 1e-8) -> tuple[np.ndarray, int]:
    """Signs sigma_j and epsilon making the shift T (corner epsilon) a g-isometry.

    In the eta-orthonormal eigenframe the isomorphism to the omega-twin maps
    tau_j to +-tau_{j-1}. Rescaling by sigma turns it into the plain shift,
    which requires gram[i, j] = c_i c_j gram[i-1, j-1] (c_0 = epsilon, else
    1) after the rescaling. These are linear equations over GF(2).
    """
    size = gram.shape[0]
    scale = np.abs(gram).max()
    e_var = size
    rows = []
    for i in range(size):
        for j in range(i, size):
            a, b = gram[i, j], gram[i - 1, j - 1]
            small_a, small_b = abs(a) <= floor * scale, abs(b) <= floor * scale
            if small_a and small_b:
                continue
            if small_a != small_b:
                raise NotFixedPointError("metric is incompatible with any isomorphism to the omega-twin")
            rho = a / b
            if abs(rho - 1) < ratio_tol:
                bit = 0
            elif abs(rho + 1) < ratio_tol:
                bit = 1
            else:
                raise NotFixedPointError("metric is incompatible with any isomorphism to the omega-twin")
            mask = (1 << i) ^ (1 << j) ^ (1 << (i - 1) % size) ^ (1 << (j - 1) % size)
            if (i == 0) != (j == 0):
                mask ^= 1 << e_var
            rows.append((mask, bit))
    # prefer epsilon = -1 (l = 0) whenever both signs are admissible
    for e_bit in (1, 0):
        sol = _solve_gf2(rows, {e_var: e_bit, 0: 0})
        if sol is not None:
            break
    else:
        raise NotFixedPointError("no sign choice makes the shift an isometry of g")
    sigma = np.array([-1.0 if sol.get(k, 0) else 1.0 for k in range(size)])
    return sigma, -1 if sol[e_var] else 1


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Result of bringing a Z_{n+1}-fixed point into the canonical Toda frame.

    ``frame_change`` has the new frame vectors e_j as columns, in the original
    coordinates, after the coordinate rescaling t = u0 * z (Phi -> Phi / u0).
    """

    frame: FrameStructure
    l: int
    w: tuple[float, ...]
    epsilon: int
    u0: complex
    frame_change: np.ndarray
    residual: float


def canonicalize_to_toda_frame(s: FrameStructure, tol: float = 1e-10) -> CanonicalForm:
    """Find a frame in which s has the canonical Toda form with l in {0, 1}.

    Raises:
        FrameError: s is not a valid tt*-frame.
        NotFixedPointError: s is not a Z_{n+1}-fixed point (no omega-cycle,
            degenerate eta on an eigenline, incompatible metric).
    """
    report = validate_ttstar_frame(s, tol)
    if not report.passed:
        failing = [c.name for c in report.checks if not c.passed]
        raise FrameError(f"input is not a valid tt*-frame: {failing}")
    n, size = s.n, s.rank
    vals, vecs = np.linalg.eig(s.phi)
    cycle = _match_cycle(vals, 1e-8)
    vecs = vecs[:, list(cycle.ordering)]

    eta_scale = np.abs(s.eta).max()
    taus = []
    for j in range(size):
        v = vecs[:, j].copy()
        for t in taus:
            v -= (t @ s.eta @ v) * t
        pairing = v @ s.eta @ v
        if abs(pairing) < 1e-10 * eta_scale * np.vdot(v, v).real:
            raise NotFixedPointError(f"eta is degenerate on the eigenline {j}")
        taus.append(v / np.sqrt(pairing))
    tau = np.column_stack(taus)

    sigma, epsilon = _frame_signs(tau.conj().T @ s.g @ tau)
    tau = tau * sigma
    change = tau @ build_dft_frame_change(n, epsilon).matrix
    if epsilon == -1:
        change = change @ cyclic_shift_matrix(n)
    l = determine_l(epsilon)
    canon = s.twisted(1.0 / cycle.u0).transform(change)

    residuals = [
        np.abs(canon.eta - toda_eta(n, l)).max(),
        np.abs(canon.phi - cyclic_shift_matrix(n)).max(),
        np.abs(canon.g - np.diag(np.diag(canon.g))).max(),
        np.abs(np.diag(canon.g).imag).max(),
    ]
    if residuals[0] > tol or residuals[1] > tol:
        raise NotFixedPointError("frame change failed to reach the canonical eta / Phi")
    if residuals[2] > tol or residuals[3] > tol:
        raise NotFixedPointError("metric is not diagonal in the DFT frame; input is not a Z_{n+1}-fixed point")
    diag = np.diag(canon.g).real
    if np.any(diag <= 0):
        raise NotFixedPointError("metric has non-positive diagonal in the canonical frame")
    w = np.log(diag)
    partner = [(l - j - 1) % size for j in range(size)]
    residuals.append(np.abs(w + w[partner]).max())
    if residuals[-1] > tol:
        raise NotFixedPointError("weights violate the anti-symmetry of the detected l")
    w = 0.5 * (w - w[partner])
    return CanonicalForm(
        frame=build_toda_frame(n, l, w),
        l=l,
        w=tuple(float(x) for x in w),
        epsilon=epsilon,
        u0=cycle.u0,
        frame_change=change,
        residual=float(max(residuals)),
    )


def detect_toda_l(s: FrameStructure, tol: float = DEFAULT_TOL) -> int | None:
    """l if s is already in canonical Toda form (Eq. eta, cyclic Phi, diagonal g), else None."""
    if np.abs(s.phi - cyclic_shift_matrix(s.n)).max() > tol:
        return None
    if np.abs(s.g - np.diag(np.diag(s.g))).max() > tol:
        return None
    for l in range(s.rank):
        if np.abs(s.eta - toda_eta(s.n, l)).max() <= tol:
            return l
    return None


# ---------------------------------------------------------------------------
# Cyclic equivalence and l-normalization


def rotate(values: Sequence, s: int) -> tuple:
    """new_j = values_{j+s} (indices mod len)."""
    size = len(values)
    return tuple(values[(j + s) % size] for j in range(size))


def cyclic_equivalent(w1: Sequence[float], w2: Sequence[float], tol: float = DEFAULT_TOL) -> int | None:
    """Smallest s >= 0 with w2_j = w1_{j+s} for all j (within tol), or None."""
    a = np.asarray(w1, dtype=float)
    b = np.asarray(w2, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("tuples must have equal length")
    size = len(a)
    idx = (np.arange(size)[None, :] + np.arange(size)[:, None]) % size
    hits = np.flatnonzero(np.abs(a[idx] - b[None, :]).max(axis=1) <= tol)
    return int(hits[0]) if hits.size else None


def canonical_rotation(values: Sequence) -> tuple[int, tuple]:
    """Lexicographically smallest rotation; ties go to the smallest shift."""
    size = len(values)
    best = min(range(size), key=lambda s: (rotate(values, s), s))
    return best, rotate(values, best)


def normalization_shift(n: int, l: int) -> tuple[int, int]:
    """(l_new, s) taking the l anti-symmetry to l_new in {0, 1} via new_j = old_{j+s}.

    l = 2m: s = m, l_new = 0. l = 2m+1 and n odd: s = m, l_new = 1.
    l = 2m+1 and n even: s = -(n-l+1)/2, l_new = 0.
    """
    if not 0 <= l <= n:
        raise ValueError(f"l must lie in 0..{n}")
    size = n + 1
    if l % 2 == 0:
        return 0, (l // 2) % size
    if n % 2 == 1:
        return 1, ((l - 1) // 2) % size
    return 0, (-(n - l + 1) // 2) % size


def _anti_symmetry_ok(n: int, l: int, values: Sequence, tol: float) -> bool:
    size = n + 1
    return all(abs(values[j] + values[(l - j - 1) % size]) <= tol for j in range(size))


@dataclass(frozen=True)
class NormalizedTuple:
    l_new: int
    shift: int
    values: tuple


def normalize_l(n: int, l: int, values: Sequence, tol: float = DEFAULT_TOL) -> NormalizedTuple:
    """Rotate an l-anti-symmetric tuple to an equivalent one with l in {0, 1}.

    Works on any numbers supporting + and abs (floats, Fractions); the output
    is a rotation, so exact inputs stay exact.

    Raises:
        AntiSymmetryError: values violates the l anti-symmetry.
    """
    if len(values) != n + 1:
        raise ValueError(f"expected {n + 1} values")
    if not _anti_symmetry_ok(n, l, values, tol):
        raise AntiSymmetryError(f"values violate w_j + w_(l-j-1) = 0 for l = {l}")
    l_new, s = normalization_shift(n, l)
    return NormalizedTuple(l_new, s, rotate(tuple(values), s))


@dataclass(frozen=True)
class AsymmetryClass:
    """An l-anti-symmetric tuple, taken up to cyclic rotation."""

    n: int
    l: int
    values: tuple

    def __post_init__(self):
        if not 0 <= self.l <= self.n:
            raise ValueError(f"l must lie in 0..{self.n}")
        if len(self.values) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} values")
        object.__setattr__(self, "values", tuple(self.values))
        if not _anti_symmetry_ok(self.n, self.l, self.values, DEFAULT_TOL):
            raise AntiSymmetryError(f"values violate w_j + w_(l-j-1) = 0 for l = {self.l}")

    def normalized(self) -> "AsymmetryClass":
        res = normalize_l(self.n, self.l, self.values)
        return AsymmetryClass(self.n, res.l_new, res.values)

    def representative(self) -> tuple:
        return canonical_rotation(self.values)[1]


@dataclass(frozen=True)
class ClassificationReport:
    n: int
    l_input: int | None
    l_normalized: int
    shift: int | None
    class_representative: tuple[float, ...]
    epsilon: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "l_input": self.l_input,
            "l_normalized": self.l_normalized,
            "shift": self.shift,
            "class_representative": [float(v) for v in self.class_representative],
            "epsilon": self.epsilon,
        }


def classify_tuple(n: int, l: int, values: Sequence[float]) -> ClassificationReport:
    res = normalize_l(n, l, values)
    return ClassificationReport(
        n=n,
        l_input=l,
        l_normalized=res.l_new,
        shift=res.shift,
        class_representative=canonical_rotation(res.values)[1],
        epsilon=epsilon_for_l(res.l_new),
    )


def classify_frame(s: FrameStructure, tol: float = 1e-10) -> ClassificationReport:
    """Canonicalize a frame structure and summarize its class.

    ``l_input`` and ``shift`` are only defined when the input already is a
    canonical Toda frame (for some l in 0..n); otherwise they are None.
    """
    canon = canonicalize_to_toda_frame(s, tol)
    l_in = detect_toda_l(s, tol)
    shift = None
    if l_in is not None:
        shift = cyclic_equivalent(np.log(np.diag(s.g).real), canon.w, tol=max(tol, 1e-9))
    return ClassificationReport(
        n=s.n,
        l_input=l_in,
        l_normalized=canon.l,
        shift=shift,
        class_representative=canonical_rotation(canon.w)[1],
        epsilon=canon.epsilon,
    )


# ---------------------------------------------------------------------------
# Reduced systems: the two-unknown cases and the m-unknown columns

# (n, l, index of w, index of v, a, b) for the ten two-unknown cases
TWO_UNKNOWN_CASES = (
    (3, 0, 0, 1, 2, 2),
    (4, 0, 0, 1, 1, 2),
    (4, 1, 1, 2, 2, 1),
    (5, 1, 1, 2, 1, 1),
    (3, 2, 3, 0, 2, 2),
    (4, 2, 4, 0, 2, 1),
    (4, 3, 4, 0, 1, 2),
    (5, 3, 5, 0, 1, 1),
    (4, 4, 0, 1, 2, 1),
    (5, 5, 0, 1, 1, 1),
)

# column -> (a, b, first w-index of v_0); n expressed through m
REDUCTION_COLUMNS = {
    "n=2m-1,l=0": (2, 2, 0),
    "n=2m,l=0": (2, 1, 0),
    "n=2m,l=1": (2, 1, 0),
    "n=2m+1,l=1": (1, 1, 1),
}


@dataclass(frozen=True)
class ReducedSystem:
    """m-unknown system v_k = w_{index_map[k]} with boundary exponents a, b.

    (v_0)'' = e^{a v_0} - e^{v_1 - v_0}, (v_j)'' = e^{v_j - v_{j-1}} - e^{v_{j+1} - v_j},
    (v_{m-1})'' = e^{v_{m-1} - v_{m-2}} - e^{-b v_{m-1}}; for m = 1 the single
    equation is e^{a v_0} - e^{-b v_0}.
    """

    n: int
    l: int
    m: int
    a: int
    b: int
    index_map: tuple[int, ...]

    def embed(self, w: Sequence[float]) -> np.ndarray:
        return np.asarray(w, dtype=float)[list(self.index_map)]

    def rhs(self, v: Sequence[float]) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.m:
            raise ValueError(f"expected {self.m} unknowns")
        left = np.empty_like(v)
        right = np.empty_like(v)
        left[0] = np.exp(self.a * v[0])
        left[1:] = np.exp(v[1:] - v[:-1])
        right[:-1] = np.exp(v[1:] - v[:-1])
        right[-1] = np.exp(-self.b * v[-1])
        return left - right

    def to_dict(self) -> dict:
        return {"n": self.n, "l": self.l, "m": self.m, "a": self.a, "b": self.b,
                "index_map": list(self.index_map)}


def reduce_system(n: int, l: int) -> ReducedSystem:
    """Look up the m-unknown reduction for normalized (n, l).

    Raises:
        ValueError: (n, l) is not covered (l >= 2 must be normalized first;
            n = 1, l = 1 has no unknowns).
    """
    if l == 0:
        key = "n=2m-1,l=0" if n % 2 == 1 else "n=2m,l=0"
        m = (n + 1) // 2 if n % 2 == 1 else n // 2
    elif l == 1:
        key = "n=2m+1,l=1" if n % 2 == 1 else "n=2m,l=1"
        m = (n - 1) // 2 if n % 2 == 1 else n // 2
    else:
        raise ValueError(f"l = {l} is not tabulated; normalize l to 0 or 1 first")
    if m < 1:
        raise ValueError(f"(n, l) = ({n}, {l}) leaves no unknown functions")
    a, b, start = REDUCTION_COLUMNS[key]
    return ReducedSystem(n, l, m, a, b, tuple(range(start, start + m)))


@dataclass(frozen=True)
class CollapsedRow:
    n: int
    l: int
    a: int
    b: int
    target: tuple[int, int]
    shift: int
    w_index: int
    v_index: int
    swapped: bool


@dataclass(frozen=True)
class TwoUnknownCollapse:
    rows: tuple[CollapsedRow, ...]
    classes: tuple[tuple[int, int], ...]
    consistent: bool

    def mapping(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {(r.n, r.l): r.target for r in self.rows}


def collapse_two_unknown_cases() -> TwoUnknownCollapse:
    """Normalize every two-unknown row and group the rows by their normalized (n, l).

    ``consistent`` holds iff two rows share a class exactly when their (a, b)
    agree up to the swap a <-> b.
    """
    ab_of = {(n, l): (a, b) for n, l, _, _, a, b in TWO_UNKNOWN_CASES}
    rows = []
    for n, l, wi, vi, a, b in TWO_UNKNOWN_CASES:
        l_new, s = normalization_shift(n, l)
        target = (n, l_new)
        rep = ab_of.get(target)
        size = n + 1
        rows.append(
            CollapsedRow(
                n=n, l=l, a=a, b=b, target=target, shift=s,
                w_index=(wi - s) % size, v_index=(vi - s) % size,
                swapped=rep is not None and (a, b) != rep and (b, a) == rep,
            )
        )
    classes = tuple(sorted({r.target for r in rows}))
    consistent = True
    for r1 in rows:
        for r2 in rows:
            same_class = r1.target == r2.target
            same_ab = sorted((r1.a, r1.b)) == sorted((r2.a, r2.b))
            consistent &= same_class == same_ab
    return TwoUnknownCollapse(tuple(rows), classes, consistent)


collapse_table1 = collapse_two_unknown_cases

