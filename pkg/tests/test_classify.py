import itertools
from fractions import Fraction

import numpy as np
import pytest

from toda_ttstar.classify import (
    TWO_UNKNOWN_CASES,
    REDUCTION_COLUMNS,
    AsymmetryClass,
    build_dft_frame_change,
    build_shift_operator,
    canonical_rotation,
    canonicalize_to_toda_frame,
    classify_frame,
    classify_tuple,
    collapse_two_unknown_cases,
    cyclic_equivalent,
    detect_toda_l,
    determine_l,
    epsilon_for_l,
    normalization_shift,
    normalize_l,
    phi_eigenvalue_cycle,
    reduce_system,
    rotate,
)
from toda_ttstar.core import (
    FrameStructure,
    build_toda_frame,
    cyclic_shift_matrix,
    root_of_unity,
    sinh_gordon_diagonal_frame,
    sinh_gordon_frame,
    validate_ttstar_frame,
    verify_isomorphism,
)
from toda_ttstar.cyclotomic import CyclotomicMatrix
from toda_ttstar.errors import AntiSymmetryError, FrameError, NotFixedPointError

from oracles import random_antisymmetric


# -- eigenvalue cycle ---------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 8))
def test_cycle_of_cyclic_shift(n):
    cyc = phi_eigenvalue_cycle(cyclic_shift_matrix(n))
    assert abs(cyc.u0 - 1) < 1e-12
    np.testing.assert_allclose(cyc.ordered(), root_of_unity(n) ** np.arange(n + 1), atol=1e-10)


def test_cycle_scales_with_phi():
    assert abs(phi_eigenvalue_cycle(2 * cyclic_shift_matrix(3)).u0 - 2) < 1e-12
    z = 1.5 * np.exp(0.7j)
    cyc = phi_eigenvalue_cycle(z * cyclic_shift_matrix(4))
    assert abs(abs(cyc.u0) - 1.5) < 1e-12
    # the cycle property, whichever representative is chosen
    np.testing.assert_allclose(np.sort_complex(cyc.ordered()),
                               np.sort_complex(np.linalg.eigvals(z * cyclic_shift_matrix(4))), atol=1e-10)


@pytest.mark.parametrize("phi", [np.diag([1.0, 2.0]), np.zeros((2, 2)), np.diag([1.0, 1j, -1.0])])
def test_cycle_failures(phi):
    with pytest.raises(NotFixedPointError):
        phi_eigenvalue_cycle(phi)


# -- shift operator and DFT -----------------------------------------------------

def test_shift_operator_examples():
    t = build_shift_operator(1, -1)
    assert np.array_equal(t.matrix, [[0, 1], [-1, 0]])
    assert np.array_equal(t.matrix @ t.matrix, -np.eye(2))
    t2 = build_shift_operator(2, 1)
    assert np.array_equal(np.linalg.matrix_power(t2.matrix, 3), np.eye(3))
    t5 = build_shift_operator(5, -1)
    assert np.array_equal(np.linalg.matrix_power(t5.matrix.astype(int), 6), -np.eye(6, dtype=int))
    assert t5.exact().power(6) == CyclotomicMatrix.identity(12, 6).scale(-1)
    with pytest.raises(ValueError):
        build_shift_operator(2, 0)


def test_dft_two_by_two():
    L = build_dft_frame_change(1, 1).matrix
    np.testing.assert_allclose(L, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(np.linalg.inv(L) @ np.diag([1, -1]) @ L, [[0, 1], [1, 0]], atol=1e-15)


def test_dft_three_by_three_twisted():
    n = 2
    dft = build_dft_frame_change(n, -1)
    t = build_shift_operator(n, -1).matrix
    omega = root_of_unity(n)
    expected = omega ** -0.5 * np.diag(omega ** np.arange(3))
    np.testing.assert_allclose(np.linalg.inv(dft.matrix) @ t @ dft.matrix, expected, atol=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("eps", [-1, 1])
def test_dft_identities_float(n, eps):
    dft = build_dft_frame_change(n, eps)
    L = dft.matrix
    Linv = np.linalg.inv(L)
    t = build_shift_operator(n, eps).matrix
    conj = Linv @ t @ L
    assert np.abs(conj - np.diag(np.diag(conj))).max() < 1e-12
    omega = root_of_unity(n)
    diag = np.diag(omega ** np.arange(n + 1))
    np.testing.assert_allclose(Linv @ diag @ L, cyclic_shift_matrix(n), atol=1e-12)
    np.testing.assert_allclose(L.conj().T @ L, np.eye(n + 1), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("eps", [-1, 1])
def test_dft_exact_matches_float(n, eps):
    exact = build_dft_frame_change(n, eps, arithmetic="exact")
    flt = build_dft_frame_change(n, eps)
    # exact mode stores the unnormalized matrix
    np.testing.assert_allclose(exact.matrix.to_complex() / np.sqrt(n + 1), flt.matrix, atol=1e-12)


def test_determine_l():
    assert determine_l(-1) == 0 and determine_l(1) == 1
    for eps in (-1, 1):
        assert epsilon_for_l(determine_l(build_shift_operator(3, eps).epsilon)) == eps


# -- canonicalization -----------------------------------------------------------

def _random_frame_change(rng, size):
    return rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))


def test_round_trip_many(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        l = int(rng.integers(0, n + 1))
        w = random_antisymmetric(rng, n, l, scale=1.5)
        s = build_toda_frame(n, l, w)
        canon = canonicalize_to_toda_frame(s)
        assert canon.residual < 1e-10
        assert cyclic_equivalent(w, canon.w, 1e-9) is not None
        assert all(abs(canon.w[j] + canon.w[(canon.l - j - 1) % (n + 1)]) < 1e-10 for j in range(n + 1))
        if n % 2 == 0:
            assert canon.l == 0
        elif max(abs(v) for v in w) > 1e-9:  # w = 0 satisfies both conditions
            assert canon.l == normalize_l(n, l, w).l_new


def test_round_trip_after_frame_change_and_twist(rng):
    for _ in range(40):
        n = int(rng.integers(1, 6))
        l = int(rng.integers(0, n + 1))
        w = random_antisymmetric(rng, n, l)
        s = build_toda_frame(n, l, w).transform(_random_frame_change(rng, n + 1)).twisted(1.7 * np.exp(0.4j))
        assert validate_ttstar_frame(s, 1e-9).passed
        canon = canonicalize_to_toda_frame(s)
        assert canon.residual < 1e-10
        assert cyclic_equivalent(w, canon.w, 1e-8) is not None
        # frame_change realizes the isomorphism to the canonical frame of the rescaled structure
        assert verify_isomorphism(canon.frame_change, canon.frame, s.twisted(1 / canon.u0), 1e-8)


def test_plus_minus_identity_automorphisms(rng):
    s = build_toda_frame(3, 0, (0.4, -0.2, 0.2, -0.4))
    for sign in (1, -1):
        canon = canonicalize_to_toda_frame(s.transform(sign * np.eye(4)))
        assert cyclic_equivalent((0.4, -0.2, 0.2, -0.4), canon.w, 1e-10) is not None


@pytest.mark.parametrize("w", [0.8, -0.3, 1.9])
def test_diagonal_sinh_gordon_frame_canonicalizes_to_the_cyclic_one(w):
    s2 = sinh_gordon_diagonal_frame(w)
    canon = canonicalize_to_toda_frame(s2)
    assert canon.l == 0 and abs(canon.u0 - 1) < 1e-12
    s1 = sinh_gordon_frame(w)
    np.testing.assert_allclose(canon.w, (w, -w), atol=1e-12)
    assert verify_isomorphism(canon.frame_change, s1, s2, 1e-12)


def test_non_fixed_point_is_rejected():
    # a valid tt*-structure whose Higgs field has spectrum {1, 2}
    s = FrameStructure(1, np.eye(2), np.eye(2), np.diag([1.0, 2.0]))
    assert validate_ttstar_frame(s).passed
    with pytest.raises(NotFixedPointError):
        canonicalize_to_toda_frame(s)


def test_invalid_frame_is_rejected():
    s = sinh_gordon_frame(0.3)
    g = np.array([[np.cosh(0.3), 0.2], [0.2, np.cosh(0.3)]])
    with pytest.raises(FrameError):
        canonicalize_to_toda_frame(FrameStructure(1, s.eta, g, s.phi))


def test_detect_and_classify_frame(rng):
    w = random_antisymmetric(rng, 4, 3)
    s = build_toda_frame(4, 3, w)
    assert detect_toda_l(s) == 3
    rep = classify_frame(s)
    assert rep.l_input == 3 and rep.l_normalized == 0 and rep.epsilon == -1
    assert rep.shift is not None
    np.testing.assert_allclose(rotate(w, rep.shift), canonicalize_to_toda_frame(s).w, atol=1e-9)
    assert detect_toda_l(s.transform(_random_frame_change(rng, 5))) is None


# -- cyclic equivalence -----------------------------------------------------------

def test_cyclic_equivalence_examples():
    w = (0.3, -1.2, 0.5, 2.0, -0.7)
    assert cyclic_equivalent(w, w) == 0
    assert cyclic_equivalent(w, rotate(w, 3)) == 3
    assert cyclic_equivalent((1, -1, 0), (1, 0, -1)) is None
    with pytest.raises(ValueError):
        cyclic_equivalent((1, 2), (1, 2, 3))


@pytest.mark.parametrize("n", range(1, 6))
def test_cyclic_equivalence_brute_force(n, rng):
    size = n + 1
    for _ in range(40):
        # small integer entries so that coincidences actually occur
        w1 = tuple(rng.integers(-1, 2, size=size).astype(float))
        w2 = tuple(rng.integers(-1, 2, size=size).astype(float)) if rng.random() < 0.5 else rotate(w1, int(rng.integers(size)))
        brute = [s for s in range(size) if all(w2[j] == w1[(j + s) % size] for j in range(size))]
        assert cyclic_equivalent(w1, w2) == (brute[0] if brute else None)


def test_canonical_rotation():
    s, rep = canonical_rotation((2, 0, 1, 0, 1))
    assert rep == (0, 1, 0, 1, 2) and s == 1
    s, rep = canonical_rotation((1, 1, 1))
    assert s == 0 and rep == (1, 1, 1)


# -- l normalization ----------------------------------------------------------

def test_normalize_examples():
    res = normalize_l(3, 2, (0.7, -0.7, 0.4, -0.4))
    assert (res.l_new, res.shift) == (0, 1)
    assert all(abs(res.values[j] + res.values[3 - j]) < 1e-15 for j in range(4))
    vals = (0.3, 0.0, -0.3, 0.9, -0.9)   # w_j + w_{2-j} = 0 for n = 4
    res = normalize_l(4, 3, vals)
    assert (res.l_new, res.shift) == (0, 4)
    assert res.values == rotate(vals, -1)
    assert normalize_l(2, 0, (0.5, 0.0, -0.5)).shift == 0
    with pytest.raises(AntiSymmetryError):
        normalize_l(3, 0, (1, 2, 3, 4))
    with pytest.raises(ValueError):
        normalize_l(3, 0, (1, -1))


@pytest.mark.parametrize("n", range(1, 9))
def test_normalization_shift_is_the_unique_good_rotation_class(n):
    # brute force: some rotation maps the l-condition to the l_new-condition index-wise
    size = n + 1
    for l in range(size):
        l_new, s = normalization_shift(n, l)
        for j in range(size):
            assert (j + s) % size == (l - ((l_new - j - 1) % size + s) - 1) % size


@pytest.mark.parametrize("n", range(1, 9))
def test_normalize_exact_rationals(n, rng):
    for l in range(n + 1):
        for _ in range(10):
            vals = random_antisymmetric(rng, n, l, exact=True)
            res = normalize_l(n, l, vals, tol=0)
            assert all(isinstance(v, Fraction) for v in res.values)
            assert all(res.values[j] + res.values[(res.l_new - j - 1) % (n + 1)] == 0 for j in range(n + 1))
            assert cyclic_equivalent([float(v) for v in vals], [float(v) for v in res.values], 0) is not None
            again = normalize_l(n, res.l_new, res.values, tol=0)
            assert again.shift == 0 and again.values == res.values


def test_asymmetry_class():
    c = AsymmetryClass(4, 2, (0.5, -0.5, 0.2, 0.0, -0.2))
    norm = c.normalized()
    assert norm.l == 0
    assert c.representative() == canonical_rotation(c.values)[1]
    with pytest.raises(AntiSymmetryError):
        AsymmetryClass(2, 0, (1, 1, 1))
    with pytest.raises(ValueError):
        AsymmetryClass(2, 5, (0, 0, 0))


def test_classify_tuple_report():
    rep = classify_tuple(3, 2, (0.7, -0.7, 0.4, -0.4)).to_dict()
    assert {k: rep[k] for k in ("n", "l_input", "l_normalized", "shift", "epsilon")} == {
        "n": 3, "l_input": 2, "l_normalized": 0, "shift": 1, "epsilon": -1}
    assert rep["class_representative"] == [-0.7, 0.4, -0.4, 0.7]


# -- reductions -------------------------------------------------------------------

@pytest.mark.parametrize("n,l,m,a,b,idx", [
    (3, 0, 2, 2, 2, (0, 1)),
    (4, 0, 2, 2, 1, (0, 1)),
    (4, 1, 2, 2, 1, (0, 1)),
    (5, 1, 2, 1, 1, (1, 2)),
    (1, 0, 1, 2, 2, (0,)),
    (2, 1, 1, 2, 1, (0,)),
    (7, 1, 3, 1, 1, (1, 2, 3)),
])
def test_reduce_system_lookup(n, l, m, a, b, idx):
    red = reduce_system(n, l)
    assert (red.m, red.a, red.b, red.index_map) == (m, a, b, idx)


def test_reduce_system_errors():
    with pytest.raises(ValueError):
        reduce_system(4, 2)
    with pytest.raises(ValueError):
        reduce_system(1, 1)


def test_reduction_columns_literal():
    assert {k: v[:2] for k, v in REDUCTION_COLUMNS.items()} == {
        "n=2m-1,l=0": (2, 2), "n=2m,l=0": (2, 1), "n=2m,l=1": (2, 1), "n=2m+1,l=1": (1, 1)}


@pytest.mark.parametrize("n,l", [(3, 0), (5, 1), (7, 0), (7, 1)])
def test_reduced_rhs_matches_full_system(n, l, rng):
    """Embedding a symmetric w into the reduced unknowns reproduces the full right-hand side."""
    red = reduce_system(n, l)
    w = np.array(random_antisymmetric(rng, n, l))
    full = np.exp(w - np.roll(w, 1)) - np.exp(np.roll(w, -1) - w)
    np.testing.assert_allclose(red.rhs(red.embed(w)), full[list(red.index_map)], atol=1e-12)


def test_two_unknown_collapse():
    col = collapse_two_unknown_cases()
    assert len(col.rows) == 10 == len(TWO_UNKNOWN_CASES)
    assert col.classes == ((3, 0), (4, 0), (5, 1))
    assert col.consistent
    mapping = col.mapping()
    assert mapping[(3, 2)] == (3, 0)
    assert mapping[(4, 4)] == (4, 0)
    assert mapping[(5, 5)] == (5, 1)
    swapped = {(r.n, r.l) for r in col.rows if r.swapped}
    assert (4, 4) in swapped and (3, 2) not in swapped


def test_two_unknown_rows_are_consistent_with_the_toda_equation():
    """For each row, embedding (w, v) at the listed indices reproduces the two-unknown system."""
    for n, l, wi, vi, a, b in TWO_UNKNOWN_CASES:
        size = n + 1
        for wv in itertools.product((0.3, -0.45), (0.2, 0.7)):
            full = np.zeros(size)
            full[wi], full[vi] = wv
            for j in (wi, vi):
                full[(l - j - 1) % size] = -full[j]
            rhs = np.exp(full - np.roll(full, 1)) - np.exp(np.roll(full, -1) - full)
            w, v = full[wi], full[vi]
            got = sorted([rhs[wi], rhs[vi]])
            cand1 = sorted([np.exp(a * w) - np.exp(v - w), np.exp(v - w) - np.exp(-b * v)])
            # the swap a <-> b corresponds to (w, v) -> (-v, -w)
            cand2 = sorted([np.exp(a * -v) - np.exp(-w + v), np.exp(-w + v) - np.exp(b * w)])
            cand3 = sorted([-x for x in cand2])
            assert any(np.allclose(got, c, atol=1e-12) for c in (cand1, cand2, cand3))
