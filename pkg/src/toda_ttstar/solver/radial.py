"""Radial tt*-Toda boundary-value problem in the log-radial coordinate x = log r.

For radial w_j the equation (w_j)_{t tbar} = e^{w_j - w_{j-1}} - e^{w_{j+1} - w_j}
reads (1/4) w_j'' = e^{2x} (e^{w_j - w_{j-1}} - e^{w_{j+1} - w_j}).

Boundary conditions: w_j(x_max) = 0 on the right. On the left the default is
the slope condition w_j'(x_min) = -m_j, which encodes w_j ~ -m_j log r without
fixing the unknown additive constant; ``left_bc="dirichlet"`` imposes
w_j(x_min) = -m_j x_min instead.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Sequence

import numpy as np

from ..errors import ConvergenceError, InvalidDataError
from . import kernels

log = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def _as_number(v):
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError as exc:
            raise InvalidDataError(f"cannot parse {v!r} as a number") from exc
    if isinstance(v, bool) or not isinstance(v, (int, float, Fraction, np.integer, np.floating)):
        raise InvalidDataError(f"expected a number, got {type(v).__name__}")
    if isinstance(v, (np.integer, np.floating)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        raise InvalidDataError("asymptotic data must be finite")
    return v


def _is_exact(v) -> bool:
    return isinstance(v, Rational)


@dataclass(frozen=True)
class AsymptoticData:
    """Slopes m_j of w_j ~ -m_j log r at the origin, together with n and l.

    ``m`` keeps the caller's number types, so rational input stays exact for the
    W-algebra formulas; the solver converts to float.
    """

    n: int
    l: int
    m: tuple
    tol: float = 1e-12

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidDataError("n must be an integer >= 1")
        if not isinstance(self.l, (int, np.integer)) or not 0 <= self.l <= self.n:
            raise InvalidDataError(f"l must be an integer in 0..{self.n}")
        m = tuple(_as_number(v) for v in self.m)
        if len(m) != self.n + 1:
            raise InvalidDataError(f"expected {self.n + 1} values of m, got {len(m)}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "m", m)
        size = self.n + 1
        scale = 1.0 + max(abs(float(v)) for v in m)
        for j in range(size):
            s = m[j] + m[(self.l - j - 1) % size]
            bad = s != 0 if _is_exact(s) else abs(s) > self.tol * scale
            if bad:
                raise InvalidDataError(f"m violates anti-symmetry for l={self.l} at j={j}")
        for j, gap in enumerate(self.gaps()):
            bad = gap < 0 if _is_exact(gap) else gap < -self.tol * scale
            if bad:
                raise InvalidDataError(f"m_{{j-1}} - m_j + 2 < 0 at j={j}")

    @property
    def size(self) -> int:
        return self.n + 1

    def gaps(self) -> tuple:
        """m_{j-1} - m_j + 2 for every j (cyclic)."""
        return tuple(self.m[j - 1] - self.m[j] + 2 for j in range(self.size))

    def strictly_interior(self) -> bool:
        return all(g > 0 for g in self.gaps())

    def as_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.m])

    def is_rational(self) -> bool:
        return all(_is_exact(v) for v in self.m)

    def to_dict(self) -> dict:
        return {"n": self.n, "l": self.l, "m": [_json_number(v) for v in self.m]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "AsymptoticData":
        try:
            return cls(int(d["n"]), int(d.get("l", 0)), tuple(d["m"]))
        except (KeyError, TypeError) as exc:
            raise InvalidDataError(f"asymptotic data needs 'n' and 'm': {exc}") from exc


def _json_number(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return v


@dataclass(frozen=True)
class GridSpec:
    x_min: float = -6.0
    x_max: float = 2.5
    points: int = 2000

    def __post_init__(self):
        if not (self.x_min < 0 < self.x_max):
            raise InvalidDataError("grid must satisfy x_min < 0 < x_max")
        if int(self.points) != self.points or self.points < 50:
            raise InvalidDataError("grid needs at least 50 points")
        object.__setattr__(self, "points", int(self.points))

    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    def refined(self) -> "GridSpec":
        """Same interval with h halved."""
        return replace(self, points=2 * self.points - 1)


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-10
    max_iter: int = 50
    damping: float = 1.0
    max_halvings: int = 30
    left_bc: str = "neumann"
    backend: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidDataError("tol must be positive")
        if self.max_iter < 1:
            raise InvalidDataError("max_iter must be >= 1")
        if not 0 < self.damping <= 1:
            raise InvalidDataError("damping must lie in (0, 1]")
        if self.left_bc not in ("neumann", "dirichlet"):
            raise InvalidDataError("left_bc must be 'neumann' or 'dirichlet'")


def _coerce(cls, value):
    if value is None:
        return cls()
    if isinstance(value, cls):
        return value
    if isinstance(value, Mapping):
        known = {f for f in cls.__dataclass_fields__}
        extra = set(value) - known
        if extra:
            raise InvalidDataError(f"unknown {cls.__name__} fields: {sorted(extra)}")
        return cls(**value)
    raise InvalidDataError(f"cannot build {cls.__name__} from {type(value).__name__}")


@dataclass(frozen=True)
class RadialSolution:
    """Grid x (increasing, uniform) and profiles w of shape (n+1, len(x))."""

    x: np.ndarray
    w: np.ndarray
    residual_sup: float = float("nan")
    newton_iterations: int = 0
    l: int | None = None
    m: tuple | None = None
    left_bc: str = "neumann"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        w = np.array(self.w, dtype=float)
        if w.ndim != 2 or x.ndim != 1 or w.shape[1] != x.size:
            raise InvalidDataError("w must have shape (n+1, len(x))")
        if w.shape[0] < 2:
            raise InvalidDataError("need at least two profiles")
        x.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.shape[0] - 1

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    @classmethod
    def zeros(cls, n: int, grid: GridSpec | None = None, l: int = 0) -> "RadialSolution":
        grid = grid or GridSpec()
        x = grid.nodes()
        return cls(x, np.zeros((n + 1, x.size)), 0.0, 0, l)

    def summary(self, window: int = 5) -> dict:
        out = {
            "n": self.n,
            "l": self.l,
            "points": int(self.x.size),
            "x_min": float(self.x[0]),
            "x_max": float(self.x[-1]),
            "left_bc": self.left_bc,
            "residual_sup": float(self.residual_sup),
            "newton_iterations": int(self.newton_iterations),
            "m_hat": list(extract_asymptotics(self, window)),
            "sum_sup": sum_sup(self),
        }
        if self.l is not None:
            out["anti_symmetry_sup"] = anti_symmetry_sup(self, self.l)
        if self.m is not None:
            out["m"] = [_json_number(v) for v in self.m]
        return out


# -- the discrete system ---------------------------------------------------

def _bc_code(left_bc: str) -> int:
    return kernels.NEUMANN if left_bc == "neumann" else kernels.DIRICHLET


def _left_data(m: np.ndarray, x_min: float, left_bc: str) -> np.ndarray:
    return m if left_bc == "neumann" else -m * x_min


def assemble_system(x: np.ndarray, w_grid: np.ndarray, m: np.ndarray,
                    left_bc: str = "neumann", backend: str | None = None):
    """Residual (N, p), diagonal blocks (N, p, p) and off-diagonal scalars for state ``w_grid`` (N, p)."""
    impl = kernels.get_backend(backend)
    h = float(x[1] - x[0])
    code = _bc_code(left_bc)
    F, D = impl.assemble(w_grid, np.exp(2.0 * x), h, code, _left_data(m, float(x[0]), left_bc))
    lower, upper = kernels.off_diagonals(x.size, h, code)
    return F, D, lower, upper


def _roundoff_floor(w_grid: np.ndarray, h: float) -> float:
    # cancellation in 0.25 * (w_{k+1} - 2 w_k + w_{k-1}) / h^2
    return 16.0 * _EPS * (1.0 + float(np.abs(w_grid).max())) / (h * h)


def solve_radial_toda(data: AsymptoticData, grid=None, opts=None) -> RadialSolution:
    """Damped Newton on the discretized radial system with the exact block-tridiagonal Jacobian.

    Stops when the sup-norm residual is below ``opts.tol``. If the line search
    can no longer decrease a residual that already sits at the rounding floor
    of the second difference, that residual is accepted.
    """
    if not isinstance(data, AsymptoticData):
        raise InvalidDataError("data must be AsymptoticData")
    grid = _coerce(GridSpec, grid)
    opts = _coerce(SolverOptions, opts)
    if not data.strictly_interior():
        warnings.warn(
            "m lies on the boundary m_{j-1} - m_j + 2 = 0; the solver may not converge",
            RuntimeWarning,
            stacklevel=2,
        )
    impl = kernels.get_backend(opts.backend)
    m = data.as_float()
    x = grid.nodes()
    h = grid.h
    code = _bc_code(opts.left_bc)
    e2x = np.exp(2.0 * x)
    left = _left_data(m, grid.x_min, opts.left_bc)
    lower, upper = kernels.off_diagonals(x.size, h, code)

    def residual(wg):
        F, D = impl.assemble(wg, e2x, h, code, left)
        return F, D, float(np.abs(F).max())

    w = np.outer(x - grid.x_max, -m)  # straight line through w(x_max) = 0 with slope -m
    F, D, r = residual(w)
    it = 0
    while True:
        it += 1
        if r <= opts.tol:
            break
        if it > opts.max_iter:
            raise ConvergenceError(
                f"Newton did not converge in {opts.max_iter} iterations (residual {r:.3e})", r, opts.max_iter
            )
        delta = impl.block_tridiag_solve(D, lower, upper, -F)
        step = opts.damping
        for _ in range(opts.max_halvings + 1):
            w_try = w + step * delta
            F_try, D_try, r_try = residual(w_try)
            if np.isfinite(r_try) and r_try < r:
                break
            step *= 0.5
        else:
            if r <= _roundoff_floor(w, h):
                log.debug("residual %.3e at rounding floor after %d iterations", r, it)
                break
            raise ConvergenceError(f"line search failed (residual {r:.3e})", r, it)
        w, F, D, r = w_try, F_try, D_try, r_try
        log.debug("newton %d: residual %.3e step %.3g", it, r, step)
    return RadialSolution(x, w.T.copy(), r, it, data.l, data.m, opts.left_bc)


# -- diagnostics -------------------------------------------------------------

def toda_residual(sol: RadialSolution) -> tuple[float, ...]:
    """Sup over interior grid points of the discrete equation, one value per j."""
    if sol.x.size < 3:
        raise InvalidDataError("need at least three grid points")
    w = sol.w.T
    c = 0.25 / sol.h**2
    e2x = np.exp(2.0 * sol.x[1:-1])[:, None]
    inner = w[1:-1]
    src = e2x * (np.exp(inner - np.roll(inner, 1, axis=1)) - np.exp(np.roll(inner, -1, axis=1) - inner))
    res = c * (w[2:] - 2.0 * inner + w[:-2]) - src
    return tuple(float(v) for v in np.abs(res).max(axis=0))


def continuum_residual(sol: RadialSolution, points: np.ndarray | None = None) -> float:
    """Sup residual of the differential equation for the cubic-spline interpolant of the grid solution.

    Evaluated away from the ends by default. Unlike ``toda_residual`` this
    measures the discretization error and decays like h^2.
    """
    from scipy.interpolate import CubicSpline

    if points is None:
        a, b = sol.x[0], sol.x[-1]
        pad = 0.1 * min(1.0, (b - a) / 10)
        points = np.linspace(a + pad, b - pad, 997)
    spline = CubicSpline(sol.x, sol.w, axis=1)
    w = spline(points)
    wpp = spline(points, 2)
    src = np.exp(2.0 * points) * (np.exp(w - np.roll(w, 1, axis=0)) - np.exp(np.roll(w, -1, axis=0) - w))
    return float(np.abs(0.25 * wpp - src).max())


@dataclass(frozen=True)
class RefinementReport:
    coarse: RadialSolution
    fine: RadialSolution
    coarse_residual: float
    fine_residual: float

    @property
    def ratio(self) -> float:
        return self.coarse_residual / self.fine_residual


def refinement_ratio(data: AsymptoticData, grid=None, opts=None) -> RefinementReport:
    """Solve on ``grid`` and on the grid with h halved; compare continuum residuals."""
    grid = _coerce(GridSpec, grid)
    coarse = solve_radial_toda(data, grid, opts)
    fine = solve_radial_toda(data, grid.refined(), opts)
    return RefinementReport(coarse, fine, continuum_residual(coarse), continuum_residual(fine))


def extract_asymptotics(sol: RadialSolution, window: int = 5) -> tuple[float, ...]:
    """Negated least-squares slope of each w_j over the first ``window`` grid points."""
    if window < 2:
        raise InvalidDataError("window must be at least 2")
    if window > sol.x.size:
        raise InvalidDataError(f"window {window} exceeds grid size {sol.x.size}")
    xs = sol.x[:window]
    A = np.column_stack([xs, np.ones(window)])
    coef, *_ = np.linalg.lstsq(A, sol.w[:, :window].T, rcond=None)
    return tuple(float(-s) for s in coef[0])


def anti_symmetry_sup(sol: RadialSolution, l: int) -> float:
    size = sol.n + 1
    partner = [(l - j - 1) % size for j in range(size)]
    return float(np.abs(sol.w + sol.w[partner]).max())


def check_anti_symmetry(sol: RadialSolution, l: int, tol: float = 1e-8) -> bool:
    return anti_symmetry_sup(sol, l) < tol


def sum_sup(sol: RadialSolution) -> float:
    """Sup over the grid of |sum_j w_j|."""
    return float(np.abs(sol.w.sum(axis=0)).max())


# -- I/O ---------------------------------------------------------------------

def solution_to_csv(sol: RadialSolution) -> str:
    buf = io.StringIO()
    buf.write(",".join(["x"] + [f"w{j}" for j in range(sol.n + 1)]) + "\n")
    for k in range(sol.x.size):
        buf.write(",".join("%.17g" % v for v in (sol.x[k], *sol.w[:, k])) + "\n")
    return buf.getvalue()


def write_csv(sol: RadialSolution, path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(solution_to_csv(sol))


def read_csv(source, l: int | None = None) -> RadialSolution:
    """Load a solution written by ``write_csv`` (path or text)."""
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = str(source)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise InvalidDataError("empty CSV")
    header = [c.strip() for c in rows[0]]
    expected = ["x"] + [f"w{j}" for j in range(len(header) - 1)]
    if header != expected or len(header) < 3:
        raise InvalidDataError(f"CSV header must be x,w0,...,wn; got {','.join(header)}")
    try:
        data = np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise InvalidDataError(f"bad CSV value: {exc}") from exc
    if data.ndim != 2 or data.shape[0] < 3 or data.shape[1] != len(header):
        raise InvalidDataError("CSV needs at least three complete rows")
    return RadialSolution(data[:, 0], data[:, 1:].T, l=l)


def parse_solve_request(req: Mapping) -> tuple[AsymptoticData, GridSpec, SolverOptions]:
    """Split {"n", "l", "m", "grid", "opts"} into typed pieces."""
    if not isinstance(req, Mapping):
        raise InvalidDataError("solve request must be a JSON object")
    data = AsymptoticData.from_dict(req)
    return data, _coerce(GridSpec, req.get("grid")), _coerce(SolverOptions, req.get("opts"))
