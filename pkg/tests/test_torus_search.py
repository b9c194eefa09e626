import json

import numpy as np
import pytest

from leelab.geometry import Tile, lee_sphere, semicross
from leelab.search import SearchOptions, certificate, search_tiling
from leelab.torus import (PreconditionError, TileProjectionError, TorusCode, blowout_check,
                          check_projection, detect_periods, diameter_anticode, is_lattice,
                          is_period, linear_code, shift_exclusion_check, t_functional,
                          verify_diameter_perfect, verify_perfect, verify_quasi_perfect)


def exact_cover_oracle(tile: Tile, q: int) -> int:
    """Count all tilings of Z_q^n by translates of ``tile`` with plain set recursion."""
    n = tile.n
    cells = [tuple(c) for c in np.ndindex(*(q,) * n)]
    placements = {}
    for t in cells:
        cov = frozenset(tuple((a + b) % q for a, b in zip(p, t)) for p in tile.points)
        if len(cov) == len(tile):
            placements[t] = cov

    def count(uncovered: frozenset) -> int:
        if not uncovered:
            return 1
        cell = min(uncovered)
        return sum(count(uncovered - cov) for cov in placements.values()
                   if cell in cov and cov <= uncovered)

    return count(frozenset(cells))


@pytest.mark.parametrize("n,e,q", [(2, 1, 5), (2, 2, 13), (2, 1, 10), (3, 1, 7)])
def test_full_enumeration_matches_oracle(n, e, q):
    tile = lee_sphere(n, e)
    res = search_tiling(tile, n, q, SearchOptions(symmetry_reduction=False,
                                                  fix_origin_codeword=False, max_solutions=None))
    assert res.verdict == "exists"
    assert len(res.codes) == exact_cover_oracle(tile, q)
    for c in res.codes:
        assert verify_perfect(c, tile).covered_exactly_once


def test_nonexistence_matches_oracle():
    tile = lee_sphere(2, 1)
    res = search_tiling(tile, 2, 4)  # 5 does not divide 16
    assert res.verdict == "nonexistent" and res.reductions
    assert exact_cover_oracle(tile, 4) == 0


def test_serial_parallel_identical():
    tile = lee_sphere(3, 1)
    base = dict(symmetry_reduction=False, max_solutions=None)
    a = search_tiling(tile, 3, 7, SearchOptions(**base))
    b = search_tiling(tile, 3, 7, SearchOptions(worker_count=3, **base))
    assert a.stats.to_json() == b.stats.to_json()
    assert [c.codewords for c in a.codes] == [c.codewords for c in b.codes]


def test_determinism_of_certificate():
    tile = lee_sphere(2, 2)
    c1 = certificate(search_tiling(tile, 2, 13), tile, 13)
    c2 = certificate(search_tiling(tile, 2, 13), tile, 13)
    assert json.dumps(c1, sort_keys=True) == json.dumps(c2, sort_keys=True)


def test_node_limit_and_resume_reproduce_full_run():
    tile = lee_sphere(3, 1)
    opts = dict(symmetry_reduction=False, max_solutions=None)
    full = search_tiling(tile, 3, 7, SearchOptions(**opts))
    limit, res, ck = 25, None, None
    while True:
        res = search_tiling(tile, 3, 7, SearchOptions(node_limit=limit, **opts), resume=ck)
        if res.verdict != "inconclusive":
            break
        assert res.checkpoint is not None
        ck, limit = res.checkpoint, limit + 25
    assert res.stats.nodes == full.stats.nodes
    assert res.stats.solutions == full.stats.solutions


def test_inconclusive_is_honest():
    res = search_tiling(lee_sphere(3, 2), 3, 25, SearchOptions(node_limit=3))
    assert res.verdict == "inconclusive" and res.code is None


def test_tile_projection_error():
    with pytest.raises(TileProjectionError):
        check_projection(lee_sphere(2, 2), 3)


def test_verify_perfect_reports_violation():
    code = TorusCode(2, 5, [(0, 0), (1, 0)])
    rep = verify_perfect(code, lee_sphere(2, 1))
    assert not rep.covered_exactly_once and rep.first_violation is not None
    assert not rep.size_matches


def test_linear_codes_and_periods():
    c = linear_code(3, 7, [1, 2, 3], 7)
    assert verify_perfect(c, lee_sphere(3, 1), 1).covered_exactly_once
    assert is_lattice(c) and len(detect_periods(c)) == 49
    assert is_period(c, (1, 3, 0)) and not is_period(c, (1, 0, 0))
    assert not is_lattice(TorusCode(1, 4, [(0,), (1,), (3,)]))


def test_quasi_and_diameter_perfect():
    code = linear_code(2, 5, [1, 2], 5)
    ok, info = verify_quasi_perfect(code, 1)
    assert ok and info["min_distance"] == 3
    assert diameter_anticode(2, 3) == lee_sphere(2, 1)
    assert verify_diameter_perfect(code, 2, 3, 5)


def test_polynomial_checks_on_pl_2_2_13():
    tile = lee_sphere(2, 2)
    code = linear_code(2, 13, [1, 5], 13)
    assert verify_perfect(code, tile).covered_exactly_once
    assert blowout_check(code, tile, 2)
    assert shift_exclusion_check(code, tile, 3) == (True, None)
    assert t_functional(code, tile, (4, 9)) == 1
    with pytest.raises(PreconditionError):
        blowout_check(code, tile, 13)


def test_shift_exclusion_catches_non_tiling():
    code = TorusCode(1, 4, [(0,), (1,)])
    ok, witness = shift_exclusion_check(code, semicross(1), 1)
    assert not ok and witness is not None
