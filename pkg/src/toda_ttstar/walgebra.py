"""Minimal-model data of the W_{n+1} algebra attached to rational asymptotic data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .errors import InvalidDataError
from .solver.radial import AsymptoticData

_MAX_FLOAT_DENOMINATOR = 10**6


def to_fraction(v) -> Fraction:
    """Exact rational from int, Fraction, "p/q" string, or a float that is a short rational."""
    if isinstance(v, bool):
        raise InvalidDataError("booleans are not numbers here")
    if isinstance(v, Rational):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except ValueError as exc:
            raise InvalidDataError(f"cannot parse {v!r} as a rational") from exc
    if isinstance(v, float):
        if not math.isfinite(v):
            raise InvalidDataError("m must be finite")
        f = Fraction(v).limit_denominator(_MAX_FLOAT_DENOMINATOR)
        if float(f) != v:
            raise InvalidDataError(f"{v!r} is not representable as a short rational; pass 'p/q' instead")
        return f
    raise InvalidDataError(f"cannot interpret {v!r} as a rational")


def fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class MinimalModelData:
    n: int
    Q: int
    N: int
    P: tuple[int, ...]
    b: tuple[Fraction, ...]
    weight_label: tuple[Fraction, ...]
    c_eff: Fraction
    m: tuple[Fraction, ...]

    @property
    def b_integrality(self) -> tuple[bool, ...]:
        """Per j: is b_j a nonnegative integer."""
        return tuple(v.denominator == 1 and v >= 0 for v in self.b)

    @property
    def b_integral(self) -> bool:
        return all(self.b_integrality)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "Q": self.Q,
            "N": self.N,
            "P": list(self.P),
            "b": [fraction_str(v) for v in self.b],
            "b_integral": self.b_integral,
            "weight_label": [fraction_str(v) for v in self.weight_label],
            "c_eff": fraction_str(self.c_eff),
        }


def minimal_Q(m: Sequence[Fraction]) -> int:
    """Smallest Q >= 2 with Q * m_j / 2 integral for every j."""
    q = 1
    for v in m:
        d = (Fraction(v) / 2).denominator
        q = q * d // math.gcd(q, d)
    return max(q, 2)


def minimal_model_data(data: AsymptoticData | Sequence, Q: int | None = None) -> MinimalModelData:
    """N, P_j, b_j, weight label and c_eff for rational m.

    ``data`` may be AsymptoticData or a bare sequence m_0..m_n; the bare form
    skips the anti-symmetry check, which is what rotation experiments need.
    """
    values = data.m if isinstance(data, AsymptoticData) else tuple(data)
    m = tuple(to_fraction(v) for v in values)
    size = len(m)
    if size < 2:
        raise InvalidDataError("need at least two values of m")
    n = size - 1
    gaps = [m[j - 1] - m[j] + 2 for j in range(size)]
    if any(g <= 0 for g in gaps):
        raise InvalidDataError("minimal-model data needs m_{j-1} - m_j + 2 > 0 for all j")
    if Q is None:
        Q = minimal_Q(m)
    else:
        if isinstance(Q, bool) or not isinstance(Q, int) or Q < 2:
            raise InvalidDataError("Q must be an integer >= 2")
        if any((Q * v / 2).denominator != 1 for v in m):
            raise InvalidDataError(f"Q={Q} does not clear the denominators of m_j/2")
    P = tuple(int(Q * v / 2) for v in m)
    N = size * (Q - 1)
    k = Fraction(N + size, 2 * size)
    b = tuple(k * g - 1 for g in gaps)
    label = tuple(m[j - 1] - m[j] for j in range(size))
    c_eff = n - Fraction(3 * (N + size), size) * sum(v * v for v in m)
    return MinimalModelData(n, Q, N, P, b, label, c_eff, m)


def ceff_consistency(mmd: MinimalModelData) -> bool:
    """(N+n+1)/(4(n+1)) sum m_j^2 == (n - c_eff)/12, exactly."""
    size = mmd.n + 1
    lhs = Fraction(mmd.N + size, 4 * size) * sum(v * v for v in mmd.m)
    return lhs == Fraction(mmd.n - mmd.c_eff, 12)
