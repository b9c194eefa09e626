"""Codes on the torus Z_q^n and the checks that run on concrete tilings.

A :class:`TorusCode` stands for the q-periodic code in Z^n obtained by
pulling the codeword set back along Z^n -> Z_q^n.  Everything is
vectorised over the q^n cells with numpy, so instances up to a few million
cells are fine.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .geometry import Point, Tile, double_sphere, lee_sphere

MAX_CELLS = 20_000_000


class TileProjectionError(ValueError):
    """Two tile points land on the same torus cell."""

    def __init__(self, u: Point, v: Point, q: int):
        super().__init__(f"tile points {u} and {v} coincide modulo {q}")
        self.pair = (u, v)
        self.q = q


class PreconditionError(ValueError):
    """An operation was called outside the range where its claim applies."""


@dataclass(frozen=True)
class TorusCode:
    n: int
    q: int
    codewords: tuple

    def __init__(self, n: int, q: int, codewords: Iterable[Sequence[int]]):
        if n < 1 or q < 1:
            raise ValueError("need n >= 1 and q >= 1")
        words = []
        for c in codewords:
            c = tuple(int(x) % q for x in c)
            if len(c) != n:
                raise ValueError(f"codeword {c} does not have dimension {n}")
            words.append(c)
        uniq = sorted(set(words))
        if len(uniq) != len(words):
            raise ValueError("codewords must be pairwise distinct modulo q")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "codewords", tuple(uniq))

    def __len__(self) -> int:
        return len(self.codewords)

    @property
    def shape(self) -> tuple:
        return (self.q,) * self.n

    @property
    def cells(self) -> int:
        return self.q ** self.n

    def array(self) -> np.ndarray:
        return np.array(self.codewords, dtype=np.int64).reshape(len(self), self.n)

    def indices(self) -> np.ndarray:
        return ravel(self.array(), self.q)

    def mask(self) -> np.ndarray:
        m = self.__dict__.get("_mask")
        if m is None:
            if self.cells > MAX_CELLS:
                raise MemoryError(f"torus with {self.cells} cells is too large")
            m = np.zeros(self.cells, dtype=bool)
            m[self.indices()] = True
            m.setflags(write=False)
            object.__setattr__(self, "_mask", m)
        return m

    def __contains__(self, p) -> bool:
        return tuple(int(x) % self.q for x in p) in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cset")
        if s is None:
            s = frozenset(self.codewords)
            object.__setattr__(self, "_cset", s)
        return s

    def translate(self, t: Sequence[int]) -> "TorusCode":
        return TorusCode(self.n, self.q, (tuple(a + b for a, b in zip(c, t)) for c in self.codewords))

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "codewords": [list(c) for c in self.codewords]}

    @classmethod
    def from_json(cls, data: dict) -> "TorusCode":
        try:
            return cls(int(data["n"]), int(data["q"]), data["codewords"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed code JSON: {exc}") from exc

    @classmethod
    def from_mask(cls, n: int, q: int, mask: np.ndarray) -> "TorusCode":
        idx = np.flatnonzero(mask)
        return cls(n, q, unravel(idx, q, n).tolist())

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def ravel(points: np.ndarray, q: int) -> np.ndarray:
    """Row-major cell index of each row of ``points`` (reduced mod q)."""
    pts = np.mod(np.asarray(points, dtype=np.int64), q)
    idx = np.zeros(pts.shape[0], dtype=np.int64)
    for j in range(pts.shape[1]):
        idx = idx * q + pts[:, j]
    return idx


def unravel(idx: np.ndarray, q: int, n: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    rest = idx.copy()
    for j in range(n - 1, -1, -1):
        out[:, j] = rest % q
        rest //= q
    return out


def all_cells(q: int, n: int) -> np.ndarray:
    return unravel(np.arange(q ** n), q, n)


def linear_code(n: int, q: int, weights: Sequence[int], modulus: int, residue: int = 0) -> TorusCode:
    """{x in Z_q^n : sum w_i x_i = residue (mod modulus)}; needs modulus | q."""
    if q % modulus:
        raise ValueError("the defining modulus must divide q")
    if q ** n > MAX_CELLS:
        raise MemoryError(f"Z_{q}^{n} is too large to list; use sectors.LinearCode")
    cells = all_cells(q, n)
    keep = (cells @ np.asarray(weights, dtype=np.int64) - residue) % modulus == 0
    return TorusCode(n, q, cells[keep].tolist())


def check_projection(tile: Tile, q: int) -> np.ndarray:
    """Torus offsets of the tile; raises if two points collide modulo q."""
    seen: dict[tuple, Point] = {}
    for p in tile.points:
        key = tuple(c % q for c in p)
        if key in seen:
            raise TileProjectionError(seen[key], p, q)
        seen[key] = p
    return tile.array()


# --------------------------------------------------------------------------
# coverage


def coverage(code: TorusCode, tile: Tile, chunk: int = 1 << 16) -> np.ndarray:
    """Multiplicity with which each cell is covered by {tile + c}."""
    if tile.n != code.n:
        raise ValueError("tile and code dimensions differ")
    offs = check_projection(tile, code.q)
    words = code.array()
    counts = np.zeros(code.cells, dtype=np.int64)
    for start in range(0, len(words), chunk):
        block = words[start:start + chunk]
        pts = (block[:, None, :] + offs[None, :, :]).reshape(-1, code.n)
        counts += np.bincount(ravel(pts, code.q), minlength=code.cells)
    return counts


def distance_profile(code: TorusCode) -> tuple[int | None, int]:
    """(minimum Lee distance, covering radius) by multi-source BFS on the torus.

    Minimum distance is ``None`` for a code with fewer than two words.
    """
    q, n = code.q, code.n
    shape = code.shape
    if len(code) == 0:
        raise ValueError("empty code")
    dist = np.full(shape, -1, dtype=np.int64)
    label = np.full(shape, -1, dtype=np.int64)
    flat_idx = code.indices()
    dist.reshape(-1)[flat_idx] = 0
    label.reshape(-1)[flat_idx] = np.arange(len(code))
    frontier = dist == 0
    level = 0
    moves = [(ax, s) for ax in range(n) for s in ((1, -1) if q > 2 else (1,))] if q > 1 else []
    while True:
        unvisited = dist < 0
        if not unvisited.any():
            break
        level += 1
        new = np.zeros(shape, dtype=bool)
        for ax, s in moves:
            reach = np.roll(frontier, s, axis=ax) & unvisited & ~new
            if reach.any():
                label[reach] = np.roll(label, s, axis=ax)[reach]
                new |= reach
        dist[new] = level
        frontier = new
    radius = int(dist.max())
    if len(code) < 2:
        return None, radius
    best = None
    for ax in range(n):
        other_label = np.roll(label, 1, axis=ax)
        differ = other_label != label
        if differ.any():
            cand = int((dist + np.roll(dist, 1, axis=ax))[differ].min()) + 1
            best = cand if best is None else min(best, cand)
    return best, radius


@dataclass
class VerificationReport:
    covered_exactly_once: bool
    first_violation: tuple | None
    min_distance: int | None
    covering_radius: int | None
    size_matches: bool = True
    max_multiplicity: int = 1
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        fv = None
        if self.first_violation is not None:
            fv = {"point": list(self.first_violation[0]), "multiplicity": self.first_violation[1]}
        return {
            "covered_exactly_once": self.covered_exactly_once,
            "first_violation": fv,
            "min_distance": self.min_distance,
            "covering_radius": self.covering_radius,
            "size_matches": self.size_matches,
            "max_multiplicity": self.max_multiplicity,
            "notes": list(self.notes),
        }


def verify_perfect(code: TorusCode, tile: Tile, e: int | None = None,
                   distances: bool | None = None) -> VerificationReport:
    """Does {tile + c : c in code} partition Z_q^n?

    The size identity |C||V| = q^n and the no-double-cover condition are
    both evaluated and reported separately.  With ``e`` given the tile is
    taken to be S(n, e) and the minimum distance is checked against 2e+1.
    """
    counts = coverage(code, tile)
    bad = np.flatnonzero(counts != 1)
    first = None
    if bad.size:
        i = int(bad[0])
        first = (tuple(int(x) for x in unravel([i], code.q, code.n)[0]), int(counts[i]))
    size_ok = len(code) * len(tile) == code.cells
    exact = bad.size == 0
    if distances is None:
        distances = code.cells <= 5_000_000
    md = cr = None
    notes = []
    if distances:
        md, cr = distance_profile(code)
        if e is not None and md is not None and md < 2 * e + 1:
            notes.append(f"minimum distance {md} < {2 * e + 1}")
    return VerificationReport(
        covered_exactly_once=bool(exact and size_ok),
        first_violation=first,
        min_distance=md,
        covering_radius=cr,
        size_matches=size_ok,
        max_multiplicity=int(counts.max()),
        notes=notes,
    )


def verify_quasi_perfect(code: TorusCode, e: int) -> tuple[bool, dict]:
    """Covering radius at most e+1 and minimum distance 2e+1 or 2e+2."""
    md, cr = distance_profile(code)
    dist_ok = md is None or md in (2 * e + 1, 2 * e + 2)
    ok = cr <= e + 1 and dist_ok
    return ok, {"min_distance": md, "covering_radius": cr, "e": e}


def diameter_anticode(n: int, d: int) -> Tile:
    """Largest anticode of diameter d-1: S(n,(d-1)/2) for odd d, DS(n,(d-2)/2) for even d."""
    if d < 1:
        raise ValueError("diameter must be >= 1")
    if d % 2:
        return lee_sphere(n, (d - 1) // 2)
    return double_sphere(n, (d - 2) // 2)


def verify_diameter_perfect(code: TorusCode, n: int, d: int, q: int) -> bool:
    """C has minimum distance >= d and is a transversal of a tiling by the anticode."""
    from .exactcover import solve_exact_cover

    if code.n != n or code.q != q:
        raise ValueError("code parameters do not match")
    anti = diameter_anticode(n, d)
    md, _ = distance_profile(code)
    if md is not None and md < d:
        return False
    if len(code) * len(anti) != code.cells:
        return False
    # common case: one offset a works for every codeword
    for a in anti.points:
        shifted = anti.translate(tuple(-x for x in a))
        try:
            if verify_perfect(code, shifted, distances=False).covered_exactly_once:
                return True
        except TileProjectionError:
            return False
    # general case: choose the offset per codeword
    offs = anti.array()
    rows = {}
    for ci, c in enumerate(code.codewords):
        for ai, a in enumerate(anti.points):
            base = np.array(c) - np.array(a)
            cells = ravel(base[None, :] + offs, q).tolist()
            rows[(ci, ai)] = [("cell", x) for x in cells] + [("word", ci)]
    for _ in solve_exact_cover(rows):
        return True
    return False


# --------------------------------------------------------------------------
# polynomial-method checks


def _blown_offsets(tile: Tile, a: int, q: int) -> np.ndarray:
    return check_projection(tile.scale(a), q)


def blowout_check(code: TorusCode, tile: Tile, a: int) -> bool:
    """Do the translates of aV by the same codewords tile Z_q^n?"""
    if gcd(a, len(tile)) != 1:
        raise PreconditionError(f"gcd({a}, |V|={len(tile)}) != 1")
    blown = tile.scale(a)
    check_projection(blown, code.q)
    return verify_perfect(code, blown, distances=False).covered_exactly_once


def shift_exclusion_check(code: TorusCode, tile: Tile, a: int) -> tuple[bool, tuple | None]:
    """No l + a(v - w) with v != w in V lands on a codeword.

    Returns ``(ok, witness)``; the witness is ``(l, v, w)``.
    """
    if gcd(a, len(tile)) != 1:
        raise PreconditionError(f"gcd({a}, |V|={len(tile)}) != 1")
    q = code.q
    mask = code.mask()
    words = code.array()
    for v in tile.points:
        for w in tile.points:
            if v == w:
                continue
            shift = np.array([a * (x - y) for x, y in zip(v, w)], dtype=np.int64)
            hit = mask[ravel(words + shift, q)]
            if hit.any():
                k = int(np.flatnonzero(hit)[0])
                return False, (code.codewords[k], v, w)
    return True, None


def t_functional(code: TorusCode, tile: Tile, m: Sequence[int], a: int = 1) -> int:
    """|(-aV + m) intersect C| counted on the torus."""
    if gcd(a, len(tile)) != 1:
        raise PreconditionError(f"gcd({a}, |V|={len(tile)}) != 1")
    offs = _blown_offsets(tile, a, code.q)
    pts = np.asarray(m, dtype=np.int64)[None, :] - offs
    return int(code.mask()[ravel(pts, code.q)].sum())


def t_functional_all(code: TorusCode, tile: Tile, a: int = 1) -> np.ndarray:
    """The T functional at every monomial exponent m in Z_q^n at once."""
    if gcd(a, len(tile)) != 1:
        raise PreconditionError(f"gcd({a}, |V|={len(tile)}) != 1")
    offs = _blown_offsets(tile, a, code.q)
    grid = code.mask().reshape(code.shape).astype(np.int64)
    total = np.zeros(code.shape, dtype=np.int64)
    for v in offs:
        # value at m is mask[m - a v]
        total += np.roll(grid, shift=tuple(int(x) for x in v), axis=tuple(range(code.n)))
    return total.reshape(-1)


# --------------------------------------------------------------------------
# periods


@dataclass
class PeriodGroup:
    n: int
    q: int
    elements: frozenset
    generators: list

    def __contains__(self, v) -> bool:
        return tuple(int(x) % self.q for x in v) in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def lattice_basis(self) -> list:
        """Basis (Hermite form) of the lifted period lattice in Z^n."""
        from .groups import hermite_normal_form

        rows = [list(g) for g in self.generators]
        rows += [[self.q if j == i else 0 for j in range(self.n)] for i in range(self.n)]
        return hermite_normal_form(rows)


def _closure(gens: list, n: int, q: int) -> set:
    zero = (0,) * n
    group = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % q for a, b in zip(x, g))
                if y not in group:
                    group.add(y)
                    nxt.append(y)
        frontier = nxt
    return group


def is_period(code: TorusCode, s: Sequence[int]) -> bool:
    """C + s = C on the torus; cheap even when the full period group is not."""
    shift = np.asarray(s, dtype=np.int64)
    return bool(code.mask()[ravel(code.array() + shift, code.q)].all())


def detect_periods(code: TorusCode, max_codewords: int = 50_000) -> PeriodGroup:
    """All s with C + s = C (mod q), plus a generating set."""
    if len(code) > max_codewords:
        raise MemoryError(f"period detection capped at {max_codewords} codewords")
    q = code.q
    words = code.array()
    mask = code.mask()
    c0 = words[0]
    rng = np.random.default_rng(0)
    probe = words[rng.choice(len(words), size=min(64, len(words)), replace=False)]
    periods = []
    for c in words:
        s = c - c0
        if not mask[ravel(probe + s, q)].all():
            continue
        if mask[ravel(words + s, q)].all():
            periods.append(tuple(int(x) % q for x in s))
    periods.sort()
    gens: list = []
    generated = {(0,) * code.n}
    for s in periods:
        if s not in generated:
            gens.append(s)
            generated = _closure(gens, code.n, q)
    return PeriodGroup(code.n, q, frozenset(periods), gens)


def is_lattice(code: TorusCode) -> bool:
    """True iff the codeword set is a coset of a subgroup of Z_q^n."""
    return len(detect_periods(code)) == len(code)
