import warnings

import numpy as np
import pytest

from toda_ttstar.classify import reduce_system
from toda_ttstar.errors import ConvergenceError, InvalidDataError
from toda_ttstar.solver import (
    AsymptoticData,
    GridSpec,
    RadialSolution,
    SolverOptions,
    anti_symmetry_sup,
    assemble_system,
    available_backends,
    check_anti_symmetry,
    continuum_residual,
    extract_asymptotics,
    parse_solve_request,
    read_csv,
    refinement_ratio,
    solution_to_csv,
    solve_radial_toda,
    sum_sup,
    toda_residual,
    write_csv,
)
from toda_ttstar.solver import kernels

from oracles import random_valid_m, reduced_bvp, sinh_gordon_fd

BACKENDS = available_backends()
SG = AsymptoticData(1, 0, (-0.5, 0.5))
N3 = AsymptoticData(3, 0, (-1, -1 / 3, 1 / 3, 1))


@pytest.fixture(scope="module")
def sg_solution():
    return solve_radial_toda(SG)


@pytest.fixture(scope="module")
def n3_solution():
    return solve_radial_toda(N3)


# -- data validation ------------------------------------------------------------

def test_asymptotic_data_validation():
    with pytest.raises(InvalidDataError):
        AsymptoticData(1, 0, (0.5, 0.5))          # not anti-symmetric
    with pytest.raises(InvalidDataError):
        AsymptoticData(1, 0, (-1.5, 1.5))         # m_0 - m_1 + 2 < 0
    with pytest.raises(InvalidDataError):
        AsymptoticData(2, 0, (0.1, -0.1))
    with pytest.raises(InvalidDataError):
        AsymptoticData(0, 0, (0.0,))
    with pytest.raises(InvalidDataError):
        AsymptoticData(2, 3, (0, 0, 0))
    with pytest.raises(InvalidDataError):
        AsymptoticData(1, 0, (float("nan"), 0.0))
    with pytest.raises(InvalidDataError):
        AsymptoticData(1, 0, ("x", 0))
    d = AsymptoticData(1, 0, ("-1/2", "1/2"))
    assert d.is_rational() and d.strictly_interior()
    assert AsymptoticData.from_dict(d.to_dict()) == d
    assert not AsymptoticData(1, 0, (-1, 1)).strictly_interior()


def test_grid_and_options_validation():
    for bad in ({"x_min": 1.0}, {"x_max": -0.5}, {"points": 49}, {"points": 100.5}):
        with pytest.raises(InvalidDataError):
            GridSpec(**bad)
    for bad in ({"tol": 0}, {"max_iter": 0}, {"damping": 0}, {"damping": 1.5}, {"left_bc": "robin"}):
        with pytest.raises(InvalidDataError):
            SolverOptions(**bad)
    with pytest.raises(InvalidDataError):
        solve_radial_toda(SG, {"points": 100, "bogus": 1})
    with pytest.raises(InvalidDataError):
        solve_radial_toda({"n": 1}, None)
    assert GridSpec(points=100).refined().points == 199


# -- kernels ----------------------------------------------------------------------

@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("left_bc", ["neumann", "dirichlet"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_jacobian_matches_finite_differences(backend, left_bc, n, rng):
    x = np.linspace(-3.0, 1.0, 50)
    m = rng.normal(size=n + 1)
    for _ in range(5):
        w = rng.normal(scale=0.8, size=(50, n + 1))
        F, D, lo, up = assemble_system(x, w, m, left_bc, backend)
        J = kernels.dense_jacobian(D, lo, up)
        eps = 1e-6
        J_fd = np.empty_like(J)
        flat = w.ravel()
        for k in range(flat.size):
            e = np.zeros_like(flat)
            e[k] = eps
            Fp = assemble_system(x, (flat + e).reshape(w.shape), m, left_bc, backend)[0].ravel()
            Fm = assemble_system(x, (flat - e).reshape(w.shape), m, left_bc, backend)[0].ravel()
            J_fd[:, k] = (Fp - Fm) / (2 * eps)
        assert np.abs(J - J_fd).max() / np.abs(J).max() < 1e-6


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
def test_backends_agree(rng):
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    for p in (2, 3, 5, 7):
        x = np.linspace(-6, 2.5, 80)
        w = rng.normal(size=(80, p))
        m = rng.normal(size=p)
        for bc in ("neumann", "dirichlet"):
            a = assemble_system(x, w, m, bc, "python")
            b = assemble_system(x, w, m, bc, "cython")
            for u, v in zip(a, b):
                np.testing.assert_allclose(u, v, rtol=1e-13, atol=1e-13)
            rhs = rng.normal(size=(80, p))
            s1 = py.block_tridiag_solve(a[1], a[2], a[3], rhs)
            s2 = cy.block_tridiag_solve(a[1], a[2], a[3], rhs)
            np.testing.assert_allclose(s1, s2, rtol=1e-10, atol=1e-12)
            J = kernels.dense_jacobian(a[1], a[2], a[3])
            np.testing.assert_allclose(J @ s2.ravel(), rhs.ravel(), atol=1e-10)


@pytest.mark.parametrize("backend", BACKENDS)
def test_singular_block_raises(backend):
    impl = kernels.get_backend(backend)
    D = np.zeros((3, 2, 2))
    with pytest.raises(np.linalg.LinAlgError):
        impl.block_tridiag_solve(D, np.zeros(3), np.zeros(3), np.ones((3, 2)))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
    assert kernels.BACKEND in BACKENDS


def test_conservation_of_the_sum(rng):
    """sum_j F_j = 0.25 * Laplacian(sum_j w_j) / h^2 at interior points: the sources telescope."""
    x = np.linspace(-6, 2.5, 200)
    h = x[1] - x[0]
    for p in (2, 4, 6):
        w = rng.normal(size=(200, p))
        F = assemble_system(x, w, np.zeros(p))[0]
        s = w.sum(axis=1)
        lap = 0.25 * (s[2:] - 2 * s[1:-1] + s[:-2]) / h**2
        np.testing.assert_allclose(F[1:-1].sum(axis=1), lap, atol=1e-9 * np.abs(lap).max())


# -- solver ---------------------------------------------------------------------

@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("n,l", [(1, 0), (2, 1), (4, 0), (5, 3)])
def test_zero_data(backend, n, l):
    sol = solve_radial_toda(AsymptoticData(n, l, (0,) * (n + 1)), {"points": 200}, {"backend": backend})
    assert sol.residual_sup == 0 and sol.newton_iterations == 1
    assert not sol.w.any()
    assert extract_asymptotics(sol) == (0.0,) * (n + 1)
    assert max(toda_residual(sol)) == 0
    assert check_anti_symmetry(sol, l)


def test_sinh_gordon_against_scalar_oracle(sg_solution):
    x, u = sinh_gordon_fd(-0.5)
    np.testing.assert_array_equal(x, sg_solution.x)
    assert np.abs(sg_solution.w[0] - u).max() < 1e-9
    assert np.abs(sg_solution.w[1] + u).max() < 1e-9
    assert sg_solution.residual_sup < 1e-10
    assert anti_symmetry_sup(sg_solution, 0) < 1e-8


def test_sinh_gordon_against_continuum_solve(sg_solution):
    sol = reduced_bvp(reduce_system(1, 0), [-0.5])
    # second-order discretization error at h ~ 4e-3
    assert np.abs(sol(sg_solution.x)[0] - sg_solution.w[0]).max() < 2e-6


def test_n3_against_half_size_reduction(n3_solution):
    assert check_anti_symmetry(n3_solution, 0, 1e-8)
    sol = reduced_bvp(reduce_system(3, 0), [-1, -1 / 3])
    coarse = np.abs(sol(n3_solution.x)[:2] - n3_solution.w[:2]).max()
    fine_sol = solve_radial_toda(N3, {"points": 3999})
    fine = np.abs(sol(fine_sol.x)[:2] - fine_sol.w[:2]).max()
    assert coarse < 2e-6
    assert 3.0 < coarse / fine < 5.0


@pytest.mark.parametrize("n,l", [(2, 0), (2, 1), (3, 1), (4, 1), (5, 0), (5, 1), (4, 3)])
def test_symmetry_and_sum_zero(n, l, rng):
    m = random_valid_m(rng, n, l)
    sol = solve_radial_toda(AsymptoticData(n, l, m), {"points": 800})
    assert check_anti_symmetry(sol, l, 1e-8)
    assert sum_sup(sol) < 1e-8
    assert max(toda_residual(sol)) < 1e-9
    m_hat = extract_asymptotics(sol)
    for est, exact in zip(m_hat, m):
        assert abs(est - exact) <= max(0.02 * abs(exact), 0.02)


def test_shifted_data_breaks_symmetry(n3_solution):
    # (-1, -1/3, 1/3, 1) rotated by one satisfies the l = 2 condition, not l = 0
    rotated = AsymptoticData(3, 2, (-1 / 3, 1 / 3, 1, -1))
    sol = solve_radial_toda(rotated, {"points": 400})
    assert check_anti_symmetry(sol, 2)
    assert not check_anti_symmetry(sol, 0)
    assert not check_anti_symmetry(n3_solution, 2)


@pytest.mark.parametrize("n,l", [(3, 0), (4, 1)])
def test_refinement_ratio_is_second_order(n, l, rng):
    rep = refinement_ratio(AsymptoticData(n, l, random_valid_m(rng, n, l)), {"points": 500})
    assert 2.5 <= rep.ratio <= 6.0
    assert continuum_residual(rep.fine) == rep.fine_residual


def test_dirichlet_variant():
    sol = solve_radial_toda(SG, None, {"left_bc": "dirichlet"})
    np.testing.assert_allclose(sol.w[:, 0], [-0.5 * 6.0, 0.5 * 6.0], atol=1e-12)
    assert np.all(sol.w[:, -1] == 0)
    assert sol.left_bc == "dirichlet"
    assert sol.residual_sup < 1e-10


def test_neumann_slope_and_right_boundary(sg_solution):
    h = sg_solution.h
    w = sg_solution.w
    assert np.all(w[:, -1] == 0)
    # one-sided second-order slope estimate at x_min
    slope = (-3 * w[:, 0] + 4 * w[:, 1] - w[:, 2]) / (2 * h)
    np.testing.assert_allclose(slope, [0.5, -0.5], atol=1e-3)


def test_non_convergence_reports_residual():
    with pytest.raises(ConvergenceError) as info:
        solve_radial_toda(SG, None, {"max_iter": 1})
    assert info.value.residual > 1 and info.value.iterations == 1


def test_boundary_data_warns():
    with pytest.warns(RuntimeWarning):
        try:
            solve_radial_toda(AsymptoticData(1, 0, (-1, 1)), {"points": 200})
        except ConvergenceError:
            pass


def test_damped_newton_still_converges():
    sol = solve_radial_toda(SG, {"points": 300}, {"damping": 0.5, "max_iter": 200})
    assert sol.residual_sup < 1e-10


# -- diagnostics -----------------------------------------------------------------

def test_toda_residual_of_a_spike():
    grid = GridSpec(points=101)
    zero = RadialSolution.zeros(2, grid)
    delta = 1e-5
    w = np.zeros_like(zero.w)
    w[1, 50] = delta
    res = toda_residual(RadialSolution(zero.x, w))
    h = grid.h
    assert 0.45 < res[1] / (delta / h**2) < 0.55
    assert res[0] < 1e-2 * res[1]  # coupling through the source is O(delta), not O(delta / h^2)


def test_extract_asymptotics_linear():
    x = np.linspace(-6, 2.5, 100)
    m = np.array([0.3, -0.1, -0.2])
    sol = RadialSolution(x, -np.outer(m, x))
    np.testing.assert_allclose(extract_asymptotics(sol, 7), m, atol=1e-13)
    with pytest.raises(InvalidDataError):
        extract_asymptotics(sol, 1)
    with pytest.raises(InvalidDataError):
        extract_asymptotics(sol, 101)


def test_extract_asymptotics_solver(sg_solution):
    m_hat = extract_asymptotics(sg_solution)
    assert abs(m_hat[1] - 0.5) < 0.01 and abs(m_hat[0] + 0.5) < 0.01


# -- I/O --------------------------------------------------------------------------

def test_csv_round_trip(tmp_path, sg_solution):
    path = tmp_path / "sol.csv"
    write_csv(sg_solution, path)
    text = path.read_text()
    assert text.splitlines()[0] == "x,w0,w1"
    back = read_csv(path)
    np.testing.assert_array_equal(back.x, sg_solution.x)
    np.testing.assert_array_equal(back.w, sg_solution.w)
    assert extract_asymptotics(back) == extract_asymptotics(sg_solution)
    assert read_csv(solution_to_csv(sg_solution)).w.shape == sg_solution.w.shape


@pytest.mark.parametrize("text", ["", "x,y\n1,2\n", "x,w0,w1\n1,2\n", "x,w0,w1\n1,a,2\n2,3,4\n3,4,5\n"])
def test_bad_csv(text):
    with pytest.raises(InvalidDataError):
        read_csv(text)


def test_solve_request_parsing():
    data, grid, opts = parse_solve_request(
        {"n": 1, "l": 0, "m": [-0.5, 0.5], "grid": {"points": 300}, "opts": {"tol": 1e-9}})
    assert data == SG and grid.points == 300 and opts.tol == 1e-9
    with pytest.raises(InvalidDataError):
        parse_solve_request({"l": 0})
    with pytest.raises(InvalidDataError):
        parse_solve_request([1, 2])


def test_summary_fields(sg_solution):
    s = sg_solution.summary()
    assert s["n"] == 1 and s["points"] == 2000 and s["m"] == [-0.5, 0.5]
    assert s["anti_symmetry_sup"] < 1e-8 and len(s["m_hat"]) == 2


def test_solution_shape_errors():
    with pytest.raises(InvalidDataError):
        RadialSolution(np.arange(5.0), np.zeros((2, 4)))
    with pytest.raises(InvalidDataError):
        RadialSolution(np.arange(5.0), np.zeros((1, 5)))
    with pytest.raises(InvalidDataError):
        toda_residual(RadialSolution(np.arange(2.0), np.zeros((2, 2))))


def test_no_warning_for_interior_data():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        solve_radial_toda(SG, {"points": 100})
