"""Density-type nonexistence bounds: the LP witness, Lepistö's shell bounds, the region map.

Every bound is exact: rationals are ``fractions.Fraction`` and thresholds
involving square roots are compared in squared integer form.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import networkx as nx
import numpy as np

from .geometry import (OrbitRep, lee_distance, lee_sphere, orbit_rep, orbit_reps_of_weight,
                       orbit_size, shell, sphere_size)
from .sectors import post_condition

# --------------------------------------------------------------------------
# LP witness


@dataclass
class OrbitFunction:
    """A G-invariant function on Z^n given by its value on each orbit."""

    n: int
    entries: dict  # OrbitRep -> Fraction

    def __call__(self, p) -> Fraction:
        return self.entries.get(orbit_rep(p), Fraction(0))

    def total(self) -> Fraction:
        return sum((v * orbit_size(r, self.n) for r, v in self.entries.items()), Fraction(0))

    def support(self) -> list[OrbitRep]:
        return [r for r, v in self.entries.items() if v]

    def to_json(self) -> dict:
        return {"n": self.n, "entries": {str(r): str(v) for r, v in sorted(self.entries.items())}}


@dataclass
class Witness:
    """h on the four representative points and its symmetrisation g."""

    n: int
    e: int
    h: dict  # OrbitRep -> Fraction, value at the representative point only
    g: OrbitFunction

    @property
    def h_sum(self) -> Fraction:
        return sum(self.h.values(), Fraction(0))

    def to_json(self) -> dict:
        return {"n": self.n, "e": self.e,
                "h": {str(r): str(v) for r, v in self.h.items()},
                "g": self.g.to_json()["entries"],
                "sum_h": str(self.h_sum), "sum_g": str(self.g.total())}


def witness_values(n: int, e: int) -> dict:
    if e < 1 or n < 2 * e + 2:
        raise ValueError("witness needs e >= 1 and n >= 2e+2")
    d = 2 * n - 3 * e - 3
    return {
        OrbitRep((1,) * (e + 1)): Fraction(-1),
        OrbitRep((1,) * (e + 3)): Fraction(4 * (n - e - 2) * (n - e - 1), e * (e + 3) * d),
        OrbitRep((1,) * (e + 1) + (2,)): Fraction(4 * (n - e - 1), (e + 1) * d),
        OrbitRep((1,) * e + (3,)): Fraction((2 * e + 1) * (e + 1), 2 * e * (n - 2 * e - 1)),
    }


def build_witness(n: int, e: int) -> Witness:
    h = witness_values(n, e)
    g = OrbitFunction(n, {r: v / orbit_size(r, n) for r, v in h.items()})
    return Witness(n, e, h, g)


def _orbit_ball_count(rep: OrbitRep, x: tuple, e: int) -> int:
    """#{z in the orbit of rep : |x - z| <= e}, by a DP over coordinates."""
    mults = rep.multiplicities()
    mags = tuple(m for m, _ in mults)
    n = len(x)

    @lru_cache(maxsize=None)
    def go(i: int, remaining: tuple, zeros: int, budget: int) -> int:
        if budget < 0:
            return 0
        if i == n:
            return 1 if not any(remaining) and zeros == 0 else 0
        xi = x[i]
        total = 0
        if zeros:
            total += go(i + 1, remaining, zeros - 1, budget - abs(xi))
        for j, left in enumerate(remaining):
            if left:
                rest = remaining[:j] + (left - 1,) + remaining[j + 1:]
                m = mags[j]
                total += go(i + 1, rest, zeros, budget - abs(xi - m))
                total += go(i + 1, rest, zeros, budget - abs(xi + m))
        return total

    return go(0, tuple(a for _, a in mults), n - rep.support, e)


def convolution_orbit(w: Witness, x: tuple) -> Fraction:
    """(g * chi_S(n,e))(x) through orbit counts."""
    return sum((v * _orbit_ball_count(r, tuple(x), w.e) for r, v in w.g.entries.items()),
               Fraction(0))


class _FlatConvolver:
    """(g * chi_S)(x) = sum over y in S(n,e) of g(x - y), by direct enumeration."""

    def __init__(self, w: Witness):
        self.w = w
        self.S = lee_sphere(w.n, w.e).array()
        self.patterns = [(np.array(sorted(r.point(w.n), reverse=True)), v)
                         for r, v in w.g.entries.items()]

    def __call__(self, x) -> Fraction:
        d = np.sort(np.abs(np.asarray(x) - self.S), axis=1)[:, ::-1]
        total = Fraction(0)
        for pat, v in self.patterns:
            total += v * int(np.all(d == pat, axis=1).sum())
        return total


@dataclass
class LPReport:
    n: int
    e: int
    vanishes_on_sphere: bool
    convolution_nonneg_outside: bool
    min_convolution: Fraction
    argmin: str
    routes_agree: bool | None
    total_sum: Fraction
    sum_identity: bool
    reps_checked: int
    decay: str = "holds by finite support"

    @property
    def proves_nonexistence(self) -> bool:
        return (self.vanishes_on_sphere and self.convolution_nonneg_outside
                and self.total_sum < 0)

    def to_json(self) -> dict:
        return {"n": self.n, "e": self.e,
                "condition_0": self.decay,
                "condition_1_vanishes_on_sphere": self.vanishes_on_sphere,
                "condition_2_convolution_nonneg_outside": self.convolution_nonneg_outside,
                "min_convolution": str(self.min_convolution), "argmin": self.argmin,
                "routes_agree": self.routes_agree,
                "total_sum": str(self.total_sum), "total_sum_float": float(self.total_sum),
                "condition_3_sum_negative": self.total_sum < 0,
                "sum_g_equals_sum_h": self.sum_identity,
                "reps_checked": self.reps_checked,
                "proves_nonexistence": self.proves_nonexistence}


def verify_lp_conditions(n: int, e: int, flat: bool = True) -> LPReport:
    """Check the witness conditions exactly.

    Condition (2) only needs x of weight 2e+1 .. 2e+3: the support of g has
    weight at most e+3, so g * chi_S vanishes beyond 2e+3.  Both the orbit DP
    and (with ``flat``) brute force over S(n,e) are evaluated per orbit
    representative and must agree.
    """
    w = build_witness(n, e)
    vanish = all(r.weight > e for r in w.g.support())
    flat_conv = _FlatConvolver(w) if flat else None
    lo, arg, agree, count = None, "", True if flat else None, 0
    for weight in range(2 * e + 1, 2 * e + 4):
        for rep in orbit_reps_of_weight(weight, n):
            x = rep.point(n)
            val = convolution_orbit(w, x)
            if flat_conv is not None and flat_conv(x) != val:
                agree = False
            count += 1
            if lo is None or val < lo:
                lo, arg = val, str(rep)
    total = w.g.total()
    return LPReport(n, e, vanish, lo >= 0, lo, arg, agree, total, total == w.h_sum, count)


def lp_lhs(n: int, e: int) -> Fraction:
    d = 2 * n - 3 * e - 3
    if e < 1 or d == 0 or n - 2 * e - 1 == 0:
        raise ValueError("degenerate denominator")
    return (Fraction(4 * (n - e - 1), d) * (Fraction(n - e - 2, e * (e + 3)) + Fraction(1, e + 1))
            + Fraction((2 * e + 1) * (e + 1), 2 * e * (n - 2 * e - 1)))


def lp_inequality(n: int, e: int) -> bool:
    """True iff the witness total is negative, i.e. the left side is < 1."""
    if e < 1 or n < 2 * e + 2:
        raise ValueError("needs e >= 1 and n >= 2e+2")
    return lp_lhs(n, e) < 1


def lp_interval(e: int, n_max: int | None = None) -> list[int]:
    """All n (from 2e+2 to n_max) where lp_inequality holds."""
    n_max = n_max or e * e
    out = []
    for n in range(2 * e + 2, n_max + 1):
        try:
            if lp_inequality(n, e):
                out.append(n)
        except ValueError:
            continue
    return out


# --------------------------------------------------------------------------
# Lepistö


@dataclass
class LambdaShell:
    n: int
    e: int
    s: int
    points: frozenset

    def __len__(self) -> int:
        return len(self.points)


def lambda_size(n: int, e: int, s: int) -> int:
    """|Λ(e,s)| via the generating polynomial of one coordinate in (-s, s]."""
    if s < 1:
        raise ValueError("need s >= 1")
    target = e + 2
    one = [0] * (s + 1)
    for c in range(-s + 1, s + 1):
        one[abs(c)] += 1
    poly = [1] + [0] * target
    for _ in range(n):
        new = [0] * (target + 1)
        for i, a in enumerate(poly):
            if a:
                for j, b in enumerate(one):
                    if i + j <= target:
                        new[i + j] += a * b
        poly = new
    return poly[target]


def lambda_shell(n: int, e: int, s: int, cap: int = 2_000_000) -> LambdaShell:
    """Points of Lee weight e+2 with every coordinate in (-s, s]."""
    if s < 2:
        raise ValueError("Λ(e,s) is used with s >= 2")
    if lambda_size(n, e, s) > cap:
        raise MemoryError("Λ(e,s) too large to enumerate")
    pts = frozenset(p for p in shell(n, e + 2) if all(-s < c <= s for c in p))
    return LambdaShell(n, e, s, pts)


def distance_bound(n: int, e: int, s: int, code_size: int) -> Fraction:
    if code_size < 2:
        raise ZeroDivisionError("the distance bound needs at least two codewords")
    C = code_size
    return Fraction(e + 2, C - 1) * (C * (2 - Fraction(e + 2, n)) + 4 * s - 6)


def averaging_bound(n: int, e: int, s: int) -> Fraction:
    if e < 2:
        raise ValueError("averaging bound needs e >= 2")
    return Fraction(lambda_size(n, e, s), sphere_size(n, e) - sphere_size(n, e - 2))


def lep_bounds(n: int, e: int, s: int, code_size: int) -> dict:
    out: dict = {"n": n, "e": e, "s": s, "code_size": code_size,
                 "lambda_size": lambda_size(n, e, s)}
    b9 = distance_bound(n, e, s, code_size)
    out["distance_bound"] = b9
    out["distance_bound_below_2e+2"] = b9 < 2 * e + 2
    out["averaging_bound"] = averaging_bound(n, e, s) if e >= 2 else None
    return out


def verify_lep9_small(n: int, e: int, s: int, q: int | None = None, cap: int = 24) -> dict:
    """Every e-error-correcting C ⊆ Λ(e,s) with |C| >= 2 has a pair within the distance bound.

    Distances are taken in Z^n, or in Z_q^n when ``q`` is given (q >= 2s).
    """
    lam = sorted(lambda_shell(n, e, s).points)
    if len(lam) > cap:
        raise MemoryError(f"|Λ| = {len(lam)} exceeds the exhaustive cap {cap}")
    if q is not None and q < 2 * s:
        raise ValueError("needs q >= 2s")
    G = nx.Graph()
    G.add_nodes_from(range(len(lam)))
    dist = {}
    for i, j in itertools.combinations(range(len(lam)), 2):
        d = lee_distance(lam[i], lam[j], q)
        dist[i, j] = d
        if d >= 2 * e + 1:
            G.add_edge(i, j)
    checked, violations = 0, []
    for clique in nx.enumerate_all_cliques(G):
        if len(clique) < 2:
            continue
        checked += 1
        dmin = min(dist[min(a, b), max(a, b)] for a, b in itertools.combinations(clique, 2))
        if dmin > distance_bound(n, e, s, len(clique)):
            violations.append([list(lam[i]) for i in clique])
    return {"n": n, "e": e, "s": s, "q": q, "lambda_size": len(lam),
            "codes_checked": checked, "violations": violations, "holds": not violations}


# --------------------------------------------------------------------------
# region map

EXISTS = "exists"
OPEN = "open"


def lp_region(n: int, e: int) -> bool:
    """e >= 18 and 3e+21 <= n <= e^2/2 - 20 (as 2n <= e^2 - 40)."""
    return e >= 18 and 3 * e + 21 <= n and 2 * n <= e * e - 40


def lepisto_region(n: int, e: int) -> bool:
    """n < (e+2)^2 / 2.1 with e >= 285, i.e. 21 n < 10 (e+2)^2."""
    return e >= 285 and 21 * n < 10 * (e + 2) ** 2


@dataclass
class RegionVerdict:
    n: int
    e: int
    status: str
    fired: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"n": self.n, "e": self.e, "status": self.status, "fired": self.fired}


def gw_region(n: int, e: int) -> RegionVerdict:
    """Status of PL(n,e) from the known constructions and nonexistence bounds.

    ``fired`` lists every rule that applies; ``status`` is the first
    nonexistence rule in the order small-n, Post, LP, Lepistö, cited, or
    ``exists``/``open``.
    """
    if n < 1 or e < 0:
        raise ValueError("need n >= 1 and e >= 0")
    fired = []
    if e == 0:
        fired.append(("exists", "every word is a codeword"))
    if n <= 2 and e >= 1:
        fired.append(("exists", "PL(1,e) and PL(2,e) lattice constructions"))
    if e == 1:
        fired.append(("exists", "PL(n,1) lattice construction"))
    if 3 <= n <= 5 and e >= 2:
        fired.append(("nonexistent-small-n", "settled for 3 <= n <= 5 and e >= 2"))
    if n >= 6 and e >= 2 and post_condition(n, e):
        fired.append(("nonexistent-Post", "e >= (sqrt2/2) n - (3/4) sqrt2 - 1/2"))
    if lp_region(n, e):
        fired.append(("nonexistent-LP", "e >= 18 and 3e+21 <= n <= e^2/2 - 20"))
    if lepisto_region(n, e):
        fired.append(("nonexistent-Lepistö", "n < (e+2)^2/2.1 and e >= 285"))
    if (n, e) == (6, 2):
        fired.append(("nonexistent-cited", "PL(6,2) shown not to exist"))
    kinds = [k for k, _ in fired]
    has_exist = EXISTS in kinds
    non = [k for k in kinds if k.startswith("nonexistent")]
    if has_exist and non:
        raise AssertionError(f"inconsistent region cell ({n},{e}): {kinds}")
    status = EXISTS if has_exist else (non[0] if non else OPEN)
    return RegionVerdict(n, e, status, [{"status": k, "rule": r} for k, r in fired])


def gw_table(n_max: int, e_max: int) -> list[RegionVerdict]:
    return [gw_region(n, e) for n in range(1, n_max + 1) for e in range(0, e_max + 1)]


def band(n: int, rule: str, e_range: Iterable[int]) -> list[int]:
    """e values in ``e_range`` at which the named rule fires for dimension n."""
    test = {"LP": lp_region, "Lepistö": lepisto_region,
            "Post": lambda n, e: n >= 6 and e >= 2 and post_condition(n, e)}[rule]
    return [e for e in e_range if test(n, e)]
