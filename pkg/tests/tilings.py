"""Cached producers for every tiling the test suite builds.

Acceptance criterion 10 runs the polynomial-method checks over all of
them, so each producer is memoised and shared across test modules.
"""
from __future__ import annotations

from functools import lru_cache

from leelab.geometry import lee_sphere, semicross
from leelab.search import SearchOptions, search_tiling
from leelab.semicross import enumerate_semicross_tilings
from leelab.torus import linear_code

# (label, n, e, q) for the known small constructions
KNOWN = [("PL(1,%d,%d)" % (e, 2 * e + 1), 1, e, 2 * e + 1) for e in range(1, 6)] + [
    ("PL(2,2,13)", 2, 2, 13),
    ("PL(3,1,7)", 3, 1, 7),
    ("PL(4,1,3)", 4, 1, 3),
]


@lru_cache(maxsize=None)
def known_tiling(n: int, e: int, q: int):
    res = search_tiling(lee_sphere(n, e), n, q, SearchOptions())
    return res


@lru_cache(maxsize=None)
def semicross_enumeration(p: int):
    return enumerate_semicross_tilings(p)


@lru_cache(maxsize=None)
def pl_6_1_13():
    return linear_code(6, 13, [1, 2, 3, 4, 5, 6], 13)


GROUPS = [label for label, *_ in KNOWN] + ["semicross p=3", "semicross p=5", "PL(6,1,13) linear"]


def tilings_in_group(group: str):
    """(label, code, tile) triples; groups are fixed so collection stays cheap."""
    for label, n, e, q in KNOWN:
        if label == group:
            return [(label, known_tiling(n, e, q).code, lee_sphere(n, e))]
    if group.startswith("semicross"):
        p = int(group.rsplit("=", 1)[1])
        return [(f"{group} #{i}", c, semicross(p - 1))
                for i, c in enumerate(semicross_enumeration(p).codes)]
    if group == "PL(6,1,13) linear":
        return [(group, pl_6_1_13(), lee_sphere(6, 1))]
    raise KeyError(group)


def all_tilings():
    return [t for g in GROUPS for t in tilings_in_group(g)]
