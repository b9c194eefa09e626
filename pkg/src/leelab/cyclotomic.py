"""Exact arithmetic in Z[zeta_m], enough to decide whether a character sum is zero."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from sympy import Poly, cyclotomic_poly, symbols

_x = symbols("x")


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple:
    """Coefficients of Phi_m, constant term first.  Phi_m is monic of degree phi(m)."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(m, _x), _x).all_coeffs()))


def _reduce(coeffs: Sequence[int], m: int) -> tuple:
    phi = cyclotomic_coeffs(m)
    deg = len(phi) - 1
    c = [int(a) for a in coeffs]
    for top in range(len(c) - 1, deg - 1, -1):
        lead = c[top]
        if lead:
            shift = top - deg
            for j, pj in enumerate(phi):
                c[shift + j] -= lead * pj
    c = c[:deg] + [0] * max(0, deg - len(c))
    return tuple(c)


@dataclass(frozen=True)
class CyclotomicInt:
    """sum_j c_j zeta_m^j with 0 <= j < phi(m), stored reduced modulo Phi_m."""

    m: int
    coeffs: tuple

    @classmethod
    def from_powers(cls, m: int, counts: Sequence[int]) -> "CyclotomicInt":
        """sum_k counts[k] * zeta_m^k for k = 0..len(counts)-1 (exponents taken mod m)."""
        folded = [0] * m
        for k, a in enumerate(counts):
            folded[k % m] += int(a)
        return cls(m, _reduce(folded, m))

    @classmethod
    def zeta_power(cls, m: int, k: int) -> "CyclotomicInt":
        counts = [0] * m
        counts[k % m] = 1
        return cls.from_powers(m, counts)

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check(other)
        return CyclotomicInt(self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        return self + (-other)

    def __mul__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check(other)
        prod = [0] * max(1, len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return CyclotomicInt(self.m, _reduce(prod, self.m))

    def _check(self, other):
        if not isinstance(other, CyclotomicInt) or other.m != self.m:
            raise ValueError("operands live in different cyclotomic rings")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.m)
        return complex(sum(c * z ** k for k, c in enumerate(self.coeffs)))

    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": list(self.coeffs)}
