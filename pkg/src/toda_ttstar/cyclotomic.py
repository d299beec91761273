"""Exact matrices over the cyclotomic field Q(zeta), zeta = exp(2*pi*i/order).

An entry is stored as an integer coefficient vector (c_0, ..., c_{order-1})
meaning (sum_k c_k zeta^k) / den, with one positive common denominator per
matrix. Arithmetic happens in Z[x]/(x^order - 1); equality is decided after
reducing modulo the cyclotomic polynomial, which makes the representation
canonical.

The identity suites only need roots of unity, small integers and rationals,
so int64 numerators are ample; products guard against overflow anyway.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

_INT_LIMIT = 2**62


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients low to high, den monic)."""
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        out[i - dn] = c
        if c:
            for k, d in enumerate(den):
                num[i - dn + k] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("polynomial division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> tuple[int, ...]:
    """Coefficients (lowest degree first) of the order-th cyclotomic polynomial."""
    if order < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (order - 1) + [1]
    for d in range(1, order):
        if order % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _reduce_mod_cyclotomic(num: np.ndarray, order: int) -> np.ndarray:
    """Reduce coefficient vectors (last axis) modulo the cyclotomic polynomial."""
    phi = np.asarray(cyclotomic_polynomial(order), dtype=np.int64)
    deg = len(phi) - 1
    work = num.copy()
    for top in range(work.shape[-1] - 1, deg - 1, -1):
        c = work[..., top].copy()
        if not c.any():
            continue
        work[..., top - deg : top + 1] -= c[..., None] * phi
    return work[..., :deg]


class CyclotomicMatrix:
    """Immutable matrix with entries in Q(exp(2*pi*i/order))."""

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, num: np.ndarray, den: int = 1):
        num = np.asarray(num, dtype=np.int64)
        if num.ndim != 3 or num.shape[2] != order:
            raise ValueError(f"numerator must have shape (rows, cols, {order})")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        num, den = self._normalize(order, num, int(den))
        num.setflags(write=False)
        self.order = order
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(order: int, num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
        reduced = _reduce_mod_cyclotomic(num, order)
        full = np.zeros_like(num)
        full[..., : reduced.shape[-1]] = reduced
        g = int(np.gcd.reduce(np.abs(full).ravel(), initial=0)) if full.size else 0
        g = math.gcd(g, den)
        if g > 1:
            full //= g
            den //= g
        if not full.any():
            den = 1
        return full, den

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rationals(cls, order: int, entries) -> "CyclotomicMatrix":
        """Matrix of rational (int / Fraction) entries."""
        fr = [[Fraction(v) for v in row] for row in entries]
        den = 1
        for row in fr:
            for v in row:
                den = den * v.denominator // math.gcd(den, v.denominator)
        rows, cols = len(fr), len(fr[0]) if fr else 0
        num = np.zeros((rows, cols, order), dtype=np.int64)
        for i, row in enumerate(fr):
            for j, v in enumerate(row):
                num[i, j, 0] = v.numerator * (den // v.denominator)
        return cls(order, num, den)

    @classmethod
    def from_root_exponents(cls, order: int, exponents, coefficients=None, den: int = 1) -> "CyclotomicMatrix":
        """Matrix with entries coefficient * zeta**exponent; ``None`` exponents give 0."""
        exps = list(exponents)
        rows, cols = len(exps), len(exps[0])
        num = np.zeros((rows, cols, order), dtype=np.int64)
        for i in range(rows):
            for j in range(cols):
                e = exps[i][j]
                if e is None:
                    continue
                c = 1 if coefficients is None else int(coefficients[i][j])
                num[i, j, e % order] += c
        return cls(order, num, den)

    @classmethod
    def diagonal_roots(cls, order: int, exponents: Iterable[int]) -> "CyclotomicMatrix":
        exps = list(exponents)
        size = len(exps)
        table = [[exps[i] if i == j else None for j in range(size)] for i in range(size)]
        return cls.from_root_exponents(order, table)

    @classmethod
    def identity(cls, order: int, size: int) -> "CyclotomicMatrix":
        return cls.diagonal_roots(order, [0] * size)

    @classmethod
    def zeros(cls, order: int, rows: int, cols: int) -> "CyclotomicMatrix":
        return cls(order, np.zeros((rows, cols, order), dtype=np.int64))

    # -- basic properties ---------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape[0], self.num.shape[1]

    def _check_compatible(self, other: "CyclotomicMatrix") -> None:
        if not isinstance(other, CyclotomicMatrix):
            raise TypeError("expected a CyclotomicMatrix")
        if other.order != self.order:
            raise ValueError("matrices live in different cyclotomic fields")

    # -- arithmetic ---------------------------------------------------

    def _combine(self, other: "CyclotomicMatrix", sign: int) -> "CyclotomicMatrix":
        self._check_compatible(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        den = self.den * other.den // math.gcd(self.den, other.den)
        num = self.num * (den // self.den) + sign * other.num * (den // other.den)
        return CyclotomicMatrix(self.order, num, den)

    def __add__(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "CyclotomicMatrix":
        return CyclotomicMatrix(self.order, -self.num, self.den)

    def __matmul__(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        self._check_compatible(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError("inner dimensions differ")
        order = self.order
        bound = int(np.abs(self.num).max(initial=0)) * int(np.abs(other.num).max(initial=0))
        if bound * self.shape[1] * order >= _INT_LIMIT:
            raise OverflowError("cyclotomic matrix product exceeds int64 range")
        p = np.arange(order)
        shift = (p[None, :] - p[:, None]) % order  # [p, q] -> q - p
        circ = other.num[:, :, shift]
        num = np.einsum("ijp,jkpq->ikq", self.num, circ)
        return CyclotomicMatrix(order, num, self.den * other.den)

    def scale(self, factor) -> "CyclotomicMatrix":
        """Multiply by a rational scalar."""
        f = Fraction(factor)
        return CyclotomicMatrix(self.order, self.num * f.numerator, self.den * f.denominator)

    def times_root(self, exponent: int) -> "CyclotomicMatrix":
        """Multiply every entry by zeta**exponent."""
        return CyclotomicMatrix(self.order, np.roll(self.num, exponent % self.order, axis=2), self.den)

    def conj(self) -> "CyclotomicMatrix":
        """Entrywise complex conjugate (zeta -> zeta**-1)."""
        idx = (-np.arange(self.order)) % self.order
        return CyclotomicMatrix(self.order, self.num[:, :, idx], self.den)

    @property
    def T(self) -> "CyclotomicMatrix":
        return CyclotomicMatrix(self.order, self.num.transpose(1, 0, 2), self.den)

    @property
    def H(self) -> "CyclotomicMatrix":
        return self.conj().T

    def power(self, k: int) -> "CyclotomicMatrix":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = CyclotomicMatrix.identity(self.order, self.shape[0])
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    # -- comparison and export ----------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicMatrix):
            return NotImplemented
        return (
            self.order == other.order
            and self.shape == other.shape
            and self.den == other.den
            and np.array_equal(self.num, other.num)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.num.any()

    def is_diagonal(self) -> bool:
        off = self.num.copy()
        size = min(self.shape)
        off[np.arange(size), np.arange(size), :] = 0
        return not off.any()

    def to_complex(self) -> np.ndarray:
        zeta = np.exp(2j * np.pi * np.arange(self.order) / self.order)
        return (self.num @ zeta) / self.den

    def __repr__(self) -> str:
        return f"CyclotomicMatrix(order={self.order}, shape={self.shape}, den={self.den})"
