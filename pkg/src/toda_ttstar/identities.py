"""Exact identity suites in cyclotomic / rational arithmetic."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .classify import (
    TWO_UNKNOWN_CASES,
    build_dft_frame_change,
    build_shift_operator,
    collapse_two_unknown_cases,
    normalize_l,
    reduce_system,
    rotate,
)
from .core import cyclic_shift_matrix, toda_eta
from .cyclotomic import CyclotomicMatrix


@dataclass(frozen=True)
class IdentityResult:
    name: str
    passed: bool
    params: dict = field(default_factory=dict)

    def line(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}({args})"


def shift_and_dft_identities(n: int, epsilon: int) -> list[IdentityResult]:
    """T^(n+1) = eps Id, L^-1 T L diagonal, L^-1 diag(omega^j) L = cyclic Phi, all exact."""
    params = {"n": n, "epsilon": epsilon}
    shift = build_shift_operator(n, epsilon)
    dft = build_dft_frame_change(n, epsilon, arithmetic="exact")
    t_exact = shift.exact()
    size = n + 1
    results = [
        IdentityResult("shift_power", shift.power_identity_holds()
                       and t_exact.power(size) == CyclotomicMatrix.identity(dft.order, size).scale(epsilon), params),
        IdentityResult("dft_inverse", dft.inverse() @ dft.matrix == CyclotomicMatrix.identity(dft.order, size), params),
    ]
    diag = dft.conjugate(t_exact)
    results.append(IdentityResult("dft_diagonalizes_shift",
                                  diag.is_diagonal() and diag == dft.expected_shift_diagonal(), params))
    results.append(IdentityResult("dft_cycles_omega_diagonal",
                                  dft.conjugate(dft.omega_diagonal()) == dft.cyclic_target(), params))
    return results


def omega_automorphism_identity(n: int, l: int, seed: int = 0) -> IdentityResult:
    """diag(omega^(j+(1-l)/2)) is an isomorphism onto the omega-twin, exactly.

    The metric is diag(2^k_j) with integer k_j + k_(l-j-1) = 0, which keeps
    every entry rational while satisfying kappa^2 = Id.
    """
    rng = random.Random(seed * 1000 + 31 * n + l)
    size, order = n + 1, 2 * (n + 1)
    k = [0] * size
    for j in range(size):
        p = (l - j - 1) % size
        if j < p:
            k[j] = rng.randint(-4, 4)
            k[p] = -k[j]
    eta = CyclotomicMatrix.from_rationals(order, toda_eta(n, l).astype(int).tolist())
    g = CyclotomicMatrix.from_rationals(
        order, [[Fraction(2) ** k[i] if i == j else 0 for j in range(size)] for i in range(size)]
    )
    phi = CyclotomicMatrix.from_rationals(order, cyclic_shift_matrix(n).astype(int).tolist())
    t = CyclotomicMatrix.diagonal_roots(order, [2 * j + 1 - l for j in range(size)])
    kappa = eta @ g.T  # eta is its own inverse
    ok = (
        t.T @ eta @ t == eta
        and t.H @ g @ t == g
        and t @ phi == phi.times_root(2) @ t
        and kappa @ kappa.conj() == CyclotomicMatrix.identity(order, size)
    )
    return IdentityResult("omega_automorphism", ok, {"n": n, "l": l})


def _random_tuple(rng: random.Random, n: int, l: int) -> tuple[Fraction, ...]:
    size = n + 1
    vals = [Fraction(0)] * size
    for j in range(size):
        p = (l - j - 1) % size
        if j < p:
            vals[j] = Fraction(rng.randint(-999, 999), rng.randint(1, 97))
            vals[p] = -vals[j]
    return tuple(vals)


def normalization_identities(n: int, samples: int = 50, seed: int = 0) -> list[IdentityResult]:
    """Exact rational check of the l-normalization for every l in 0..n."""
    rng = random.Random(seed * 7919 + n)
    out = []
    size = n + 1
    for l in range(size):
        ok = True
        expected_l = 0 if (l % 2 == 0 or n % 2 == 0) else 1
        for _ in range(samples):
            vals = _random_tuple(rng, n, l)
            res = normalize_l(n, l, vals, tol=0)
            ok &= res.l_new == expected_l
            ok &= all(res.values[j] + res.values[(res.l_new - j - 1) % size] == 0 for j in range(size))
            ok &= res.values == rotate(vals, res.shift)
            again = normalize_l(n, res.l_new, res.values, tol=0)
            ok &= again.shift == 0 and again.l_new == res.l_new
        out.append(IdentityResult("normalize_l", bool(ok), {"n": n, "l": l}))
    return out


def reduction_identities() -> list[IdentityResult]:
    collapse = collapse_two_unknown_cases()
    tab2_ok = True
    for (n, l), ab in {(3, 0): (2, 2), (4, 0): (2, 1), (4, 1): (2, 1), (5, 1): (1, 1)}.items():
        red = reduce_system(n, l)
        tab2_ok &= (red.a, red.b) == ab
    rows_ok = all(
        (r.a, r.b) == (a, b) for r, (_, _, _, _, a, b) in zip(collapse.rows, TWO_UNKNOWN_CASES)
    )
    return [
        IdentityResult("two_unknown_three_classes", collapse.classes == ((3, 0), (4, 0), (5, 1))),
        IdentityResult("two_unknown_classes_match_ab_up_to_swap", collapse.consistent and rows_ok),
        IdentityResult("reduction_lookup", bool(tab2_ok)),
    ]


def run_identity_suite(n_max: int = 8, samples: int = 50, seed: int = 0) -> list[IdentityResult]:
    results: list[IdentityResult] = []
    for n in range(1, n_max + 1):
        for eps in (-1, 1):
            results.extend(shift_and_dft_identities(n, eps))
        for l in range(n + 1):
            results.append(omega_automorphism_identity(n, l, seed))
        results.extend(normalization_identities(n, samples, seed))
    results.extend(reduction_identities())
    return results
