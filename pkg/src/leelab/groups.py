"""Finite abelian groups in invariant-factor form, plus integer-lattice helpers.

Elements of Z_{d_1} x ... x Z_{d_k} are encoded as integers in mixed radix
(last factor fastest) so a whole group fits in small numpy tables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterator, Sequence

import numpy as np
from sympy import Matrix, factorint, isprime
from sympy.matrices.normalforms import hermite_normal_form as _sympy_hnf
from sympy.matrices.normalforms import invariant_factors

from .geometry import partitions


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError("can only factor positive integers")
    return {int(p): int(k) for p, k in factorint(n).items()}


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def radical(n: int) -> int:
    return prod(factorize(n)) if n > 1 else 1


@dataclass(frozen=True)
class AbelianGroup:
    """Z_{d_1} x ... x Z_{d_k} with d_1 | d_2 | ... | d_k, all d_i > 1.

    The trivial group has ``factors == ()``.
    """

    factors: tuple = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors if int(d) != 1)
        if any(d < 1 for d in fs):
            raise ValueError("factor orders must be positive")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"factors {fs} do not form a divisibility chain")
        object.__setattr__(self, "factors", fs)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def __str__(self) -> str:
        if not self.factors:
            return "Z_1"
        return " x ".join(f"Z_{d}" for d in self.factors)

    # element encoding -------------------------------------------------
    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise ValueError("coordinate count does not match the number of factors")
        x = 0
        for c, d in zip(coords, self.factors):
            x = x * d + int(c) % d
        return x

    def decode(self, x: int) -> tuple:
        out = []
        for d in reversed(self.factors):
            out.append(x % d)
            x //= d
        return tuple(reversed(out))

    @cached_property
    def coords(self) -> np.ndarray:
        """(order, k) array of coordinates of every element, in encoding order."""
        if not self.factors:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(d) for d in self.factors], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def _encode_array(self, c: np.ndarray) -> np.ndarray:
        x = np.zeros(c.shape[:-1], dtype=np.int64)
        for j, d in enumerate(self.factors):
            x = x * d + np.mod(c[..., j], d)
        return x

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        return self._encode_array(c[:, None, :] + c[None, :, :])

    def scalar(self, k: int) -> np.ndarray:
        """Map x -> k*x as a lookup array."""
        return self._encode_array(self.coords * int(k))

    def neg(self) -> np.ndarray:
        return self.scalar(-1)

    def units(self) -> list[int]:
        """Integers u in [1, exponent) coprime to the exponent (automorphisms x -> u*x)."""
        m = self.exponent
        return [u for u in range(1, m) if gcd(u, m) == 1] or [1]

    def element_orders(self) -> np.ndarray:
        c = self.coords
        orders = np.ones(self.order, dtype=np.int64)
        for j, d in enumerate(self.factors):
            o = d // np.gcd(c[:, j], d)
            orders = np.lcm(orders, o)
        return orders


def abelian_groups(order: int) -> list[AbelianGroup]:
    """Every abelian group of the given order up to isomorphism.

    One partition of the exponent per prime; parts are combined into the
    invariant-factor chain.
    """
    if order < 1:
        raise ValueError("order must be positive")
    fac = sorted(factorize(order).items())
    per_prime = [[(p, part) for part in partitions(k, k)] for p, k in fac]
    groups = []
    for choice in itertools.product(*per_prime):
        width = max((len(part) for _, part in choice), default=0)
        factors = [1] * width
        for p, part in choice:
            # part is descending; the largest power goes to the last factor
            for i, a in enumerate(part):
                factors[width - 1 - i] *= p ** a
        groups.append(AbelianGroup(tuple(factors)))
    return groups


def cyclic(m: int) -> AbelianGroup:
    return AbelianGroup((m,))


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the lattice spanned by ``rows``, one basis vector per row.

    Delegates to sympy's column-style Hermite form on the transpose.
    """
    A = Matrix([list(map(int, r)) for r in rows]).T
    H = _sympy_hnf(A)
    return [[int(H[i, j]) for i in range(H.rows)] for j in range(H.cols)]


def lattice_index(vectors: Sequence[Sequence[int]], n: int) -> int:
    """Index of the span of ``vectors`` in Z^n; 0 when the rank is below n."""
    if not vectors:
        return 0 if n else 1
    inv = invariant_factors(Matrix([list(map(int, v)) for v in vectors]))
    nonzero = [int(d) for d in inv if d != 0]
    if len(nonzero) < n:
        return 0
    return abs(prod(nonzero))


def generates_Zn(vectors: Sequence[Sequence[int]], n: int) -> bool:
    return lattice_index(vectors, n) == 1


def reduced_residues(m: int) -> Iterator[int]:
    return (a for a in range(1, max(m, 2)) if gcd(a, m) == 1)
