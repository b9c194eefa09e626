"""Lee metric, Lee spheres and the other small tiles everything else is built from.

Points are plain tuples of Python ints.  Every count here is exact.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

Point = tuple  # tuple[int, ...]


def as_point(p: Iterable[int]) -> Point:
    return tuple(int(c) for c in p)


def unit(n: int, i: int, scale: int = 1) -> Point:
    """Standard basis vector e_{i+1} (0-based ``i``) in Z^n."""
    v = [0] * n
    v[i] = scale
    return tuple(v)


def lee_weight(p: Sequence[int], q: int | None = None) -> int:
    if q is None:
        return sum(abs(c) for c in p)
    total = 0
    for c in p:
        r = c % q
        total += min(r, q - r)
    return total


def lee_distance(u: Sequence[int], v: Sequence[int], q: int | None = None) -> int:
    """Lee distance on Z^n, or on Z_q^n when ``q`` is given."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} != {len(v)}")
    if q is None:
        return sum(abs(a - b) for a, b in zip(u, v))
    if q < 1:
        raise ValueError("modulus must be positive")
    total = 0
    for a, b in zip(u, v):
        d = (a - b) % q
        total += min(d, q - d)
    return total


# --------------------------------------------------------------------------
# tiles


@dataclass(frozen=True)
class Tile:
    """A finite set of points of Z^n.

    Points are stored sorted lexicographically, so two tiles with the same
    point set compare and hash equal.
    """

    n: int
    points: tuple

    def __init__(self, n: int, points: Iterable[Iterable[int]]):
        pts = sorted({as_point(p) for p in points})
        if n < 1:
            raise ValueError("dimension must be >= 1")
        if not pts:
            raise ValueError("a tile must be nonempty")
        for p in pts:
            if len(p) != n:
                raise ValueError(f"point {p} does not have dimension {n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return as_point(p) in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_pset")
        if s is None:
            s = frozenset(self.points)
            object.__setattr__(self, "_pset", s)
        return s

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self), self.n)

    def translate(self, t: Sequence[int]) -> "Tile":
        return Tile(self.n, (tuple(a + b for a, b in zip(p, t)) for p in self.points))

    def negate(self) -> "Tile":
        return Tile(self.n, (tuple(-a for a in p) for p in self.points))

    def scale(self, a: int) -> "Tile":
        if a == 0:
            raise ValueError("blowout factor must be nonzero")
        return Tile(self.n, (tuple(a * c for c in p) for p in self.points))

    def canonical(self) -> "Tile":
        """Translate so the lexicographically smallest point is the origin."""
        m = self.points[0]
        return self.translate(tuple(-c for c in m))

    def differences(self) -> "Tile":
        """The difference set V - V."""
        return Tile(self.n, (tuple(a - b for a, b in zip(u, v))
                             for u in self.points for v in self.points))

    def is_symmetric(self) -> bool:
        return self.negate() == self

    def to_json(self) -> dict:
        return {"n": self.n, "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "Tile":
        try:
            return cls(int(data["n"]), data["points"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed tile JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _ball_points(n: int, budget: int, exact: bool) -> Iterator[Point]:
    if n == 0:
        if not exact or budget == 0:
            yield ()
        return
    for c in range(-budget, budget + 1):
        for rest in _ball_points(n - 1, budget - abs(c), exact):
            yield (c,) + rest


def lee_sphere(n: int, e: int) -> Tile:
    """S(n, e): all x in Z^n with |x_1| + ... + |x_n| <= e."""
    if n < 1 or e < 0:
        raise ValueError("need n >= 1 and e >= 0")
    return Tile(n, _ball_points(n, e, exact=False))


def shell(n: int, e: int) -> frozenset:
    """Points at Lee distance exactly ``e`` from the origin."""
    if n < 1 or e < 0:
        raise ValueError("need n >= 1 and e >= 0")
    return frozenset(_ball_points(n, e, exact=True))


def sphere_size(n: int, e: int) -> int:
    """|S(n,e)| = sum_i 2^i C(n,i) C(e,i)."""
    if n < 0 or e < 0:
        raise ValueError("need n >= 0 and e >= 0")
    return sum(2 ** i * comb(n, i) * comb(e, i) for i in range(min(n, e) + 1))


def shell_size(n: int, e: int) -> int:
    if e < 0:
        return 0
    if n == 0:
        return 1 if e == 0 else 0
    return sphere_size(n, e) - (sphere_size(n, e - 1) if e > 0 else 0)


def semicross(k: int) -> Tile:
    """{0, e_1, ..., e_k} in Z^k."""
    if k < 1:
        raise ValueError("semi-cross needs k >= 1")
    return Tile(k, [(0,) * k] + [unit(k, i) for i in range(k)])


def double_sphere(n: int, e: int) -> Tile:
    """DS(n, e) = S(n, e) union (S(n, e) + e_1)."""
    s = lee_sphere(n, e)
    return Tile(n, list(s.points) + list(s.translate(unit(n, 0)).points))


def blowout(tile: Tile, a: int) -> Tile:
    return tile.scale(a)


def special_tiles(kind: str, *params) -> Tile:
    kind = kind.lower().replace("_", "-")
    if kind in ("sphere", "lee-sphere"):
        return lee_sphere(*params)
    if kind == "semicross":
        return semicross(*params)
    if kind in ("double-sphere", "doublesphere"):
        return double_sphere(*params)
    if kind == "blowout":
        return blowout(*params)
    raise ValueError(f"unknown tile kind {kind!r}")


# --------------------------------------------------------------------------
# signed-permutation symmetry


@dataclass(frozen=True, order=True)
class OrbitRep:
    """Orbit of a point under the signed permutations of the axes.

    ``magnitudes`` holds the absolute values of the nonzero coordinates,
    sorted ascending.  ``str`` gives the ``(1^2,3^1)`` notation.
    """

    magnitudes: tuple = ()

    def __post_init__(self):
        mags = tuple(sorted(int(m) for m in self.magnitudes))
        if any(m <= 0 for m in mags):
            raise ValueError("orbit magnitudes must be positive")
        object.__setattr__(self, "magnitudes", mags)

    @property
    def support(self) -> int:
        return len(self.magnitudes)

    @property
    def weight(self) -> int:
        return sum(self.magnitudes)

    def multiplicities(self) -> list[tuple[int, int]]:
        return [(m, len(list(g))) for m, g in itertools.groupby(self.magnitudes)]

    def point(self, n: int) -> Point:
        """The representative (m_1,...,m_1, m_2,..., 0,...,0) in Z^n."""
        if self.support > n:
            raise ValueError(f"support {self.support} exceeds dimension {n}")
        return self.magnitudes + (0,) * (n - self.support)

    def __str__(self) -> str:
        return "(" + ",".join(f"{m}^{a}" for m, a in self.multiplicities()) + ")"

    @classmethod
    def parse(cls, text: str) -> "OrbitRep":
        body = text.strip().strip("()").replace(" ", "")
        if not body:
            return cls(())
        mags: list[int] = []
        for part in body.split(","):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", part)
            if not m:
                raise ValueError(f"cannot parse orbit notation {text!r}")
            mags += [int(m.group(1))] * int(m.group(2) or 1)
        return cls(tuple(mags))


def orbit_rep(p: Sequence[int]) -> OrbitRep:
    return OrbitRep(tuple(abs(int(c)) for c in p if c != 0))


def orbit_size(rep: OrbitRep, n: int) -> int:
    """Number of distinct images of the representative under the 2^n n! isometries."""
    if rep.support > n:
        raise ValueError(f"support {rep.support} exceeds dimension {n}")
    size = factorial(n) // factorial(n - rep.support)
    for _, a in rep.multiplicities():
        size //= factorial(a)
    return size * 2 ** rep.support


def orbit_points(rep: OrbitRep, n: int) -> Iterator[Point]:
    """Enumerate every point in the orbit (each exactly once)."""
    base = rep.point(n)
    for perm in set(itertools.permutations(base)):
        nz = [i for i, c in enumerate(perm) if c]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            v = list(perm)
            for i, s in zip(nz, signs):
                v[i] *= s
            yield tuple(v)


def partitions(total: int, max_parts: int, max_part: int | None = None) -> Iterator[tuple]:
    """Partitions of ``total`` into at most ``max_parts`` positive parts (descending)."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, max_parts - 1, first):
            yield (first,) + rest


def orbit_reps_of_weight(w: int, n: int) -> list[OrbitRep]:
    return [OrbitRep(p) for p in partitions(w, n)]


def apply_signed_permutation(p: Sequence[int], perm: Sequence[int], signs: Sequence[int]) -> Point:
    """Coordinate i of the image is signs[i] * p[perm[i]]."""
    return tuple(s * p[j] for j, s in zip(perm, signs))


def random_signed_permutation(n: int, rng) -> tuple[list[int], list[int]]:
    perm = list(rng.permutation(n))
    signs = [int(s) for s in rng.choice([-1, 1], size=n)]
    return perm, signs


def tile_symmetries(tile: Tile) -> list[tuple[tuple, tuple]]:
    """Signed permutations (perm, signs) mapping the tile onto itself.

    Brute force over all 2^n n! isometries; only call for small n.
    """
    n = tile.n
    pts = tile._set
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            if all(apply_signed_permutation(p, perm, signs) in pts for p in tile.points):
                out.append((perm, signs))
    return out


def is_permutation_invariant(tile: Tile) -> bool:
    n = tile.n
    if n == 1:
        return True
    pts = tile._set
    gens = [tuple(range(1, n)) + (0,), (1, 0) + tuple(range(2, n))]
    ident = (1,) * n
    return all(apply_signed_permutation(p, g, ident) in pts for g in gens for p in tile.points)


def is_sign_invariant(tile: Tile) -> bool:
    pts = tile._set
    for i in range(tile.n):
        signs = tuple(-1 if j == i else 1 for j in range(tile.n))
        if not all(apply_signed_permutation(p, range(tile.n), signs) in pts for p in tile.points):
            return False
    return True


# --------------------------------------------------------------------------
# CLI tile mini-language


def parse_tile_spec(spec: str) -> Tile:
    """``sphere:n,e``, ``semicross:k``, ``doublesphere:n,e`` or ``file:path``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "file":
        with open(rest) as fh:
            return Tile.from_json(json.load(fh))
    try:
        args = [int(a) for a in rest.split(",") if a.strip()]
    except ValueError as exc:
        raise ValueError(f"bad tile spec {spec!r}") from exc
    if kind == "sphere" and len(args) == 2:
        return lee_sphere(*args)
    if kind == "semicross" and len(args) == 1:
        return semicross(*args)
    if kind == "doublesphere" and len(args) == 2:
        return double_sphere(*args)
    raise ValueError(f"bad tile spec {spec!r}")
