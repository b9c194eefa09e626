"""Tilings of Z^{p-1} by the semi-cross {0, e_1, ..., e_{p-1}}.

Every such tiling has p*e_i among its periods (the difference e_i - 0
multiplied by p), so it is the lift of a tiling of the torus Z_p^{p-1};
enumerating torus tilings is therefore exhaustive for Z^{p-1}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Sequence

import numpy as np

from .geometry import semicross
from .groups import is_prime
from .search import SearchOptions, search_tiling
from .torus import TorusCode, is_lattice, linear_code, ravel, verify_perfect


class FalsificationError(RuntimeError):
    """A computed object contradicts a proved statement; carries the witness path."""

    def __init__(self, message: str, witness_path: str | None = None):
        super().__init__(message)
        self.witness_path = witness_path


@dataclass
class SemicrossEnumeration:
    p: int
    codes: list  # tilings containing 0 as a codeword
    lattice_flags: list
    classes: list  # lists of indices, one per coordinate-permutation class
    nodes: int
    complete: bool
    reduction: str = ("each tiling of Z^{p-1} has periods p*e_i, so it descends to "
                      "Z_p^{p-1}; runs fix 0 as a codeword and do no other reduction")

    @property
    def total_tilings(self) -> int:
        # pairs (tiling, codeword) counted two ways: N_total * p^{n-1} = p^n * N_0
        return len(self.codes) * self.p

    @property
    def all_lattice(self) -> bool:
        return all(self.lattice_flags)

    def to_json(self) -> dict:
        return {"p": self.p, "tilings_containing_0": len(self.codes),
                "total_tilings": self.total_tilings, "all_lattice": self.all_lattice,
                "lattice_flags": self.lattice_flags,
                "permutation_classes": len(self.classes), "nodes": self.nodes,
                "complete": self.complete, "reduction": self.reduction}


def _permute(code: TorusCode, perm: Sequence[int]) -> frozenset:
    arr = code.array()[:, list(perm)]
    return frozenset(map(tuple, arr.tolist()))


def enumerate_semicross_tilings(p: int, node_limit: int | None = None,
                                witness_dir: str | Path = ".", resume: dict | None = None,
                                workers: int = 1) -> SemicrossEnumeration:
    """All tilings of Z_p^{p-1} by the semi-cross that contain 0, tagged lattice or not.

    A non-lattice tiling would contradict the proved cases (p <= 7); if one
    appears it is written to ``witness_dir`` and FalsificationError raised.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = p - 1
    tile = semicross(n)
    opts = SearchOptions(symmetry_reduction=False, max_solutions=None,
                         node_limit=node_limit, worker_count=workers)
    res = search_tiling(tile, n, p, opts, resume=resume)
    codes = res.codes
    flags = []
    for c in codes:
        if not verify_perfect(c, tile).covered_exactly_once:
            raise AssertionError("search returned a non-tiling")
        flags.append(is_lattice(c))
    if not all(flags):
        bad = codes[flags.index(False)]
        path = Path(witness_dir) / f"semicross_p{p}_nonlattice.json"
        path.write_text(bad.dumps())
        raise FalsificationError(f"non-lattice semi-cross tiling for p={p}", str(path))
    classes: list[list[int]] = []
    seen: dict = {}
    for i, c in enumerate(codes):
        key = min(sorted(_permute(c, perm)) for perm in itertools.permutations(range(n)))
        key = tuple(key)
        if key in seen:
            classes[seen[key]].append(i)
        else:
            seen[key] = len(classes)
            classes.append([i])
    return SemicrossEnumeration(p, codes, flags, classes, res.stats.nodes,
                                res.verdict != "inconclusive")


def standard_lattice(p: int) -> TorusCode:
    """{l : p | l_1 + 2 l_2 + ... + (p-1) l_{p-1}} on Z_p^{p-1}."""
    return linear_code(p - 1, p, list(range(1, p)), p)


def matches_standard(code: TorusCode) -> bool:
    """True iff a translate of the code equals the standard lattice after permuting axes."""
    p, n = code.q, code.n
    if n != p - 1:
        return False
    base = code.translate(tuple(-c for c in code.codewords[0]))
    target = set(map(tuple, standard_lattice(p).codewords))
    return any(_permute(base, perm) == target for perm in itertools.permutations(range(n)))


# --------------------------------------------------------------------------
# counting lemma


def count_type_ones(code: TorusCode, k: int, reference: Sequence[int]) -> int:
    """Codewords c with c - reference of type [1^k] (k ones, the rest zero, mod p)."""
    d = np.mod(code.array() - np.asarray(reference), code.q)
    return int(np.sum(np.all((d == 0) | (d == 1), axis=1) & (d.sum(axis=1) == k)))


def counting_lemma_expected(p: int, k: int, reference_is_codeword: bool) -> int:
    sign = (-1) ** k
    num = comb(p - 1, k) + (p - 1) * sign if reference_is_codeword else comb(p - 1, k) - sign
    if num % p:
        raise ArithmeticError("counting formula is not integral")
    return num // p


def counting_lemma_check(code: TorusCode, k: int, reference: Sequence[int] | None = None) -> bool:
    """Check the [1^k] count at one reference word, or at every word when ``reference`` is None."""
    p = code.q
    if code.n != p - 1:
        raise ValueError("counting lemma concerns Z_p^{p-1}")
    if not 1 <= k < p:
        raise ValueError("need 1 <= k < p")
    refs = [tuple(reference)] if reference is not None else \
        list(itertools.product(range(p), repeat=code.n))
    for w in refs:
        expected = counting_lemma_expected(p, k, w in code)
        if count_type_ones(code, k, w) != expected:
            return False
    return True


# --------------------------------------------------------------------------
# the p = 5 structure sets


def _signed_type(d: np.ndarray, plus: int, minus: int, p: int) -> np.ndarray:
    """Rows whose entries (read in {-1,0,1} mod p) have ``plus`` ones and ``minus`` minus-ones."""
    ones = (d == 1).sum(axis=1)
    negs = (d == p - 1).sum(axis=1)
    zero = (d == 0).sum(axis=1)
    return (ones == plus) & (negs == minus) & (zero == d.shape[1] - plus - minus)


def _lift(d: np.ndarray, p: int) -> np.ndarray:
    return np.where(d == p - 1, -1, d)


@dataclass
class USets:
    w: tuple
    U2p: frozenset  # difference vectors u - w, entries in {-1, 0, 1}
    U2m: frozenset
    U3p: frozenset
    U3m: frozenset
    checks: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        s = lambda xs: sorted(list(x) for x in xs)
        return {"w": list(self.w), "U2+": s(self.U2p), "U2-": s(self.U2m),
                "U3+": s(self.U3p), "U3-": s(self.U3m), "checks": self.checks}


def _raw_usets(code: TorusCode, w) -> tuple:
    p = code.q
    d = np.mod(code.array() - np.asarray(w), p)
    get = lambda a, b: frozenset(map(tuple, _lift(d[_signed_type(d, a, b, p)], p).tolist()))
    return get(2, 0), get(0, 2), get(2, 1), get(1, 2)


def u_sets(code: TorusCode, w: Sequence[int], stability: bool = True) -> USets:
    """The sets U2±(w), U3±(w) of a p = 5 tiling, stored as differences from w.

    Checks: sizes (p-1)/2 and 4, difference sums ±(1,...,1), and, with
    ``stability``, that moving w by any a in U2+ ∪ U3+ leaves U2+ and U3+
    (as difference sets) unchanged.
    """
    p = code.q
    if p != 5 or code.n != 4:
        raise ValueError("these sets are defined for the p = 5 semi-cross")
    w = tuple(int(c) % p for c in w)
    if w not in code:
        raise ValueError("reference word must be a codeword")
    U2p, U2m, U3p, U3m = _raw_usets(code, w)
    ones = np.ones(code.n, dtype=np.int64)
    checks = {
        "U2+ size": len(U2p) == (p - 1) // 2,
        "U2- size": len(U2m) == (p - 1) // 2,
        "U3+ size": len(U3p) == 4,
        "U3- size": len(U3m) == 4,
        "U2+ sums to i": bool(np.array_equal(np.sum(list(U2p), axis=0), ones)) if U2p else False,
        "U2- sums to -i": bool(np.array_equal(np.sum(list(U2m), axis=0), -ones)) if U2m else False,
    }
    if stability:
        ok = True
        for a in U2p | U3p:
            w2 = tuple((x + y) % p for x, y in zip(w, a))
            a2p, _, a3p, _ = _raw_usets(code, w2)
            ok &= a2p == U2p and a3p == U3p
        checks["stability"] = ok
    return USets(w, U2p, U2m, U3p, U3m, checks)


def cyclic_shifts(v: Sequence[int]) -> frozenset:
    v = tuple(v)
    return frozenset(v[i:] + v[:i] for i in range(len(v)))


def cyclic_ordering(code: TorusCode) -> tuple | None:
    """An axis ordering under which the codeword set is closed under cyclic shifts, if any."""
    if code.n > 7:
        raise ValueError("axis orderings are enumerated only up to dimension 7")
    arr = code.array()
    mask = code.mask()
    for perm in itertools.permutations(range(code.n)):
        a = arr[:, list(perm)]
        shifted = np.roll(a, -1, axis=1)
        # shifted rows are in permuted coordinates; map back before lookup
        back = np.empty_like(shifted)
        back[:, list(perm)] = shifted
        if mask[ravel(back, code.q)].all():
            return perm
    return None


def cyclic_check(code: TorusCode) -> bool:
    return cyclic_ordering(code) is not None
