"""Six-dimensional sectors meeting Lee spheres, the g_i census, and the local inequality.

A sector is ``base + {0,1}^A`` for a set A of axes; the other coordinates
stay at the base values.  A Lee sphere meets a k-dimensional sector in
0 or sum_{i<=t} C(k,i) points, which for k = 6 means one of
1, 7, 22, 42, 57, 63, 64.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, isqrt

import numpy as np

from .geometry import Tile, shell_size
from .torus import TorusCode, ravel, verify_perfect

TYPES = (1, 7, 22, 42, 57, 63)
COEFFS = {1: 1, 7: -1, 22: -10, 42: 10, 57: 1, 63: -1}


def legal_sizes(k: int) -> frozenset:
    return frozenset([0] + [sum(comb(k, i) for i in range(t + 1)) for t in range(k + 1)])


@dataclass(frozen=True)
class Sector:
    base: tuple
    axes: tuple

    def __post_init__(self):
        axes = tuple(sorted(int(a) for a in self.axes))
        if len(set(axes)) != len(axes):
            raise ValueError("sector axes must be distinct")
        if any(a < 0 or a >= len(self.base) for a in axes):
            raise ValueError("sector axis out of range")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "base", tuple(int(c) for c in self.base))

    @property
    def k(self) -> int:
        return len(self.axes)

    def points(self) -> np.ndarray:
        k = self.k
        eps = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64).reshape(-1, k)
        pts = np.tile(np.array(self.base, dtype=np.int64), (len(eps), 1))
        pts[:, list(self.axes)] += eps
        return pts


@dataclass
class SectorIntersection:
    size: int
    legal: bool

    def to_json(self) -> dict:
        return {"size": self.size, "legal": self.legal}


def sector_intersection(tile: Tile, sector: Sector) -> SectorIntersection:
    if tile.n != len(sector.base):
        raise ValueError("sector and tile dimensions differ")
    size = sum(1 for p in map(tuple, sector.points().tolist()) if p in tile)
    return SectorIntersection(size, size in legal_sizes(sector.k))


# --------------------------------------------------------------------------
# census


_EPS6 = np.array(list(itertools.product((0, 1), repeat=6)), dtype=np.int64)


def _box_counts(rho: int, chunk: int = 1 << 15) -> dict[int, int]:
    """Histogram of |S(6,rho) ∩ (b + {0,1}^6)| over b in [-rho-1, rho]^6 (zeros dropped)."""
    side = np.arange(-rho - 1, rho + 1, dtype=np.int64)
    L = len(side)
    hist: dict[int, int] = {}
    total = L ** 6
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        b = np.stack([side[(idx // L ** (5 - j)) % L] for j in range(6)], axis=1)
        w = np.abs(b[:, None, :] + _EPS6[None, :, :]).sum(axis=2)
        sizes = (w <= rho).sum(axis=1)
        vals, cnts = np.unique(sizes[sizes > 0], return_counts=True)
        for v, c in zip(vals.tolist(), cnts.tolist()):
            hist[v] = hist.get(v, 0) + c
    return hist


@dataclass
class SectorCensus:
    n: int
    e: int
    counts: dict  # size -> number of (sphere, sector) pairs, sizes 1..64
    window: str = ""

    def g(self, i: int) -> int:
        return self.counts.get(i, 0)

    def incidences(self) -> int:
        return sum(i * c for i, c in self.counts.items())

    def to_json(self) -> dict:
        return {"n": self.n, "e": self.e,
                "g": {str(k): v for k, v in sorted(self.counts.items())},
                "window": self.window}


def census_g(n: int, e: int) -> SectorCensus:
    """Count the sectors of every 6-subset of axes by their intersection with S(n,e).

    Only the six sector coordinates are enumerated; the remaining n-6 base
    coordinates contribute through the number of points of Z^{n-6} at each
    weight r, which leaves a radius of e-r on the sector axes.
    """
    if n < 6:
        raise ValueError("the census uses 6-dimensional sectors, so n >= 6")
    if e < 0:
        raise ValueError("radius must be nonnegative")
    counts: dict[int, int] = {}
    axis_sets = comb(n, 6)
    for r in range(e + 1):
        mult = shell_size(n - 6, r) * axis_sets
        if not mult:
            continue
        for size, c in _box_counts(e - r).items():
            counts[size] = counts.get(size, 0) + c * mult
    window = ("sector coordinates in [-(e-r)-1, e-r]^6 for off-sector weight r, "
              f"weighted by |shell(n-6, r)| and C({n},6) axis choices")
    return SectorCensus(n, e, counts, window)


def census_flat(n: int, e: int) -> dict[int, int]:
    """Brute-force census over every full base point; a test oracle for small n, e."""
    counts: dict[int, int] = {}
    for axes in itertools.combinations(range(n), 6):
        others = [i for i in range(n) if i not in axes]
        for base in itertools.product(range(-e - 1, e + 1), repeat=n):
            if any(abs(base[i]) > e for i in others):
                continue
            pts = np.array(base, dtype=np.int64) + 0
            box = np.tile(pts, (64, 1))
            box[:, list(axes)] += _EPS6
            size = int((np.abs(box).sum(axis=1) <= e).sum())
            if size:
                counts[size] = counts.get(size, 0) + 1
    return counts


def post_combination(c: SectorCensus) -> dict:
    value = sum(COEFFS[i] * c.g(i) for i in TYPES)
    above = c.n >= 6 and post_condition(c.n, c.e)
    return {"n": c.n, "e": c.e, "value": value, "above_threshold": above,
            "expected_negative": above, "consistent": (value < 0) if above else True}


# --------------------------------------------------------------------------
# threshold


def post_condition(n: int, e: int) -> bool:
    """e >= (sqrt2/2) n - (3/4) sqrt2 - 1/2, decided as 2(2e+1)^2 >= (2n-3)^2."""
    if 2 * n - 3 <= 0:
        return e >= 0
    return 2 * (2 * e + 1) ** 2 >= (2 * n - 3) ** 2


def post_threshold(n: int) -> int:
    """Smallest e >= 0 meeting the Post bound for dimension n >= 6."""
    if n < 6:
        raise ValueError("not applicable for n < 6")
    # 2e+1 >= (2n-3)/sqrt2  <=>  (2e+1)^2 >= ceil((2n-3)^2 / 2)
    target = -(-((2 * n - 3) ** 2) // 2)
    s = isqrt(target)
    if s * s < target:
        s += 1
    if s % 2 == 0:
        s += 1
    e = (s - 1) // 2
    assert post_condition(n, e) and (e == 0 or not post_condition(n, e - 1))
    return e


# --------------------------------------------------------------------------
# local inequality on tilings


@dataclass
class LinearCode:
    """{x in Z_q^n : sum w_i x_i = residue (mod modulus)}, modulus dividing q."""

    n: int
    q: int
    weights: tuple
    modulus: int
    residue: int = 0

    def __post_init__(self):
        if self.q % self.modulus:
            raise ValueError("modulus must divide q")

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return np.mod(pts @ np.asarray(self.weights, dtype=np.int64) - self.residue,
                      self.modulus) == 0

    def size(self) -> int:
        return self.q ** self.n // self.modulus


class _Owner:
    """Maps torus points to the codeword whose tile covers them (as a cell index)."""

    def __init__(self, code, tile: Tile):
        self.tile = tile
        self.q = code.q
        self.n = code.n
        self.offsets = tile.array()
        if isinstance(code, TorusCode):
            table = np.full(code.cells, -1, dtype=np.int64)
            words = code.array()
            for v in self.offsets:
                cells = ravel(words + v, code.q)
                if np.any(table[cells] >= 0):
                    raise ValueError("code is not a tiling: a cell is covered twice")
                table[cells] = ravel(words, code.q)
            if np.any(table < 0):
                raise ValueError("code is not a tiling: some cell is uncovered")
            self.table = table
            self.linear = None
        else:
            self.table = None
            self.linear = code

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table[ravel(pts, self.q)]
        out = np.full(pts.shape[0], -1, dtype=np.int64)
        for v in self.offsets:
            cand = pts - v
            hit = self.linear.contains(cand)
            if np.any(hit & (out >= 0)):
                raise ValueError("code is not a tiling: a point is covered twice")
            out[hit] = ravel(cand[hit], self.q)
        if np.any(out < 0):
            raise ValueError("code is not a tiling: a point is uncovered")
        return out


@dataclass
class PostLocalReport:
    sectors_checked: int
    mode: str
    type_totals: dict
    min_value: int
    violations: list
    illegal_sizes: list
    axes: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations and not self.illegal_sizes

    def to_json(self) -> dict:
        return {"sectors_checked": self.sectors_checked, "mode": self.mode,
                "type_totals": {str(k): v for k, v in sorted(self.type_totals.items())},
                "min_value": self.min_value, "holds": self.holds,
                "violations": self.violations[:10], "illegal_sizes": self.illegal_sizes[:10]}


def _run_lengths(owners: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per row, the multiset of owner multiplicities as a (rows, 65) histogram."""
    s = np.sort(owners, axis=1)
    K, m = s.shape
    starts = np.ones_like(s, dtype=bool)
    starts[:, 1:] = s[:, 1:] != s[:, :-1]
    # run length at each start = distance to next start
    pos = np.broadcast_to(np.arange(m), s.shape)
    start_pos = np.where(starts, pos, m)
    nxt = np.minimum.accumulate(start_pos[:, ::-1], axis=1)[:, ::-1]
    nxt_after = np.concatenate([nxt[:, 1:], np.full((K, 1), m)], axis=1)
    lengths = np.where(starts, nxt_after - pos, 0)
    hist = np.zeros((K, m + 1), dtype=np.int64)
    rows = np.repeat(np.arange(K), m)
    np.add.at(hist, (rows, lengths.ravel()), 1)
    hist[:, 0] = 0
    return hist, lengths


def verify_post_local(code, tile: Tile, sample: int | None = None, seed: int = 0,
                      chunk: int = 1 << 14, axes_sets=None) -> PostLocalReport:
    """Check t1 - t7 - 10 t22 + 10 t42 + t57 - t63 >= 0 on torus sectors of a tiling.

    ``code`` is a TorusCode or a LinearCode; ``tile`` must tile with it
    (checked).  With ``sample`` set, that many random (axes, base) sectors
    are drawn; otherwise every base for every 6-subset of axes is examined.
    """
    n, q = code.n, code.q
    if n < 6:
        raise ValueError("sectors are 6-dimensional, so n >= 6")
    if isinstance(code, TorusCode):
        rep = verify_perfect(code, tile)
        if not rep.covered_exactly_once:
            raise ValueError("code is not a tiling by this tile")
    owner = _Owner(code, tile)
    if axes_sets is None:
        axes_sets = list(itertools.combinations(range(n), 6))
    totals = {i: 0 for i in range(1, 65)}
    min_value = None
    violations: list = []
    illegal: list = []
    legal = legal_sizes(6)
    checked = 0
    rng = np.random.default_rng(seed)
    coeff = np.zeros(65, dtype=np.int64)
    for i, c in COEFFS.items():
        coeff[i] = c
    if sample is None:
        jobs = [(ax, None) for ax in axes_sets]
    else:
        picks = rng.integers(0, len(axes_sets), size=sample)
        jobs = [(axes_sets[a], int((picks == a).sum())) for a in range(len(axes_sets))]
    for ax, count in jobs:
        total = q ** n if count is None else count
        for start in range(0, total, chunk):
            stop = min(total, start + chunk)
            if count is None:
                bases = all_cells_slice(q, n, start, stop)
            else:
                bases = rng.integers(0, q, size=(stop - start, n))
            pts = np.repeat(bases[:, None, :], 64, axis=1)
            pts[:, :, list(ax)] += _EPS6[None, :, :]
            owners = owner(pts.reshape(-1, n)).reshape(len(bases), 64)
            hist, _ = _run_lengths(owners)
            for i in range(1, 65):
                totals[i] += int(hist[:, i].sum())
            bad_size = np.flatnonzero(hist[:, [i for i in range(1, 65) if i not in legal]].sum(axis=1))
            for b in bad_size[:10]:
                illegal.append({"axes": list(ax), "base": bases[b].tolist()})
            vals = hist @ coeff
            lo = int(vals.min())
            min_value = lo if min_value is None else min(min_value, lo)
            for b in np.flatnonzero(vals < 0)[:10]:
                violations.append({"axes": list(ax), "base": bases[b].tolist(),
                                   "types": {str(i): int(hist[b, i]) for i in range(1, 65) if hist[b, i]}})
            checked += len(bases)
    mode = "exhaustive" if sample is None else f"sampled {sample} (seed {seed})"
    return PostLocalReport(checked, mode, {k: v for k, v in totals.items() if v},
                           0 if min_value is None else min_value, violations, illegal,
                           [list(a) for a in axes_sets])


def all_cells_slice(q: int, n: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return np.stack([(idx // q ** (n - 1 - j)) % q for j in range(n)], axis=1)
