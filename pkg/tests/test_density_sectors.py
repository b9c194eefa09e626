import itertools
from fractions import Fraction

import pytest

from leelab.density import (band, build_witness, convolution_orbit, gw_region, gw_table,
                            lambda_shell, lambda_size, distance_bound, lp_inequality, lp_interval,
                            lp_lhs, verify_lep9_small, verify_lp_conditions, witness_values)
from leelab.geometry import OrbitRep, lee_sphere, orbit_rep, orbit_reps_of_weight, orbit_size
from leelab.sectors import (LinearCode, Sector, census_flat, census_g, legal_sizes,
                            post_combination, post_condition, post_threshold, sector_intersection,
                            verify_post_local)
from leelab.torus import linear_code


def brute_convolution(n, e, x):
    """(g * chi_S)(x) straight from the definition of g."""
    h = witness_values(n, e)
    total = Fraction(0)
    for y in lee_sphere(n, e):
        r = orbit_rep(tuple(a - b for a, b in zip(x, y)))
        if r in h:
            total += h[r] / orbit_size(r, n)
    return total


def test_witness_values_small_case():
    h = witness_values(4, 1)
    assert h[OrbitRep((1, 1))] == -1
    assert h[OrbitRep((1, 1, 1, 1))] == 1
    assert h[OrbitRep((1, 1, 2))] == 2
    assert h[OrbitRep((1, 3))] == 3
    assert build_witness(4, 1).h_sum == 5


@pytest.mark.parametrize("n,e", [(4, 1), (6, 2), (7, 2)])
def test_convolution_against_definition(n, e):
    w = build_witness(n, e)
    for weight in range(0, 2 * e + 4):
        for rep in orbit_reps_of_weight(weight, n)[:6]:
            x = rep.point(n)
            assert convolution_orbit(w, x) == brute_convolution(n, e, x)


@pytest.mark.parametrize("e", range(1, 11))
def test_witness_support_weights(e):
    for n in (2 * e + 2, 2 * e + 7, 40):
        if 2 * n - 3 * e - 3 == 0:
            continue
        assert {r.weight for r in build_witness(n, e).g.support()} <= {e + 1, e + 3}


def test_lp_report_and_degenerate_inputs():
    rep = verify_lp_conditions(6, 2)
    assert rep.vanishes_on_sphere and rep.convolution_nonneg_outside and rep.routes_agree
    assert not rep.proves_nonexistence
    with pytest.raises(ValueError):
        lp_inequality(3, 1)
    with pytest.raises(ValueError):
        lp_lhs(3, 1)  # 2n - 3e - 3 = 0
    assert lp_interval(18)[0] == 75 and lp_interval(18)[-1] == 142


def test_lp_endpoints_at_18():
    assert lp_inequality(75, 18) and not lp_inequality(74, 18)
    assert lp_inequality(142, 18) and not lp_inequality(143, 18)
    assert abs(float(lp_lhs(75, 18)) - 0.9911) < 1e-4


def test_region_table_is_consistent():
    rows = gw_table(12, 6)
    assert {r.status for r in rows} >= {"exists", "open", "nonexistent-Post", "nonexistent-small-n"}
    assert gw_region(1, 7).status == "exists" and gw_region(9, 1).status == "exists"
    assert gw_region(4, 3).status == "nonexistent-small-n"
    assert band(75, "LP", range(100)) == [18]


def test_post_threshold_is_exact():
    for n in range(6, 200):
        e = post_threshold(n)
        assert post_condition(n, e) and not post_condition(n, e - 1)
        # float sanity well away from the boundary
        assert e >= (2 ** 0.5 / 2) * n - 0.75 * 2 ** 0.5 - 0.5 - 1e-9


def test_lambda_shell():
    for n, e, s in [(2, 1, 2), (3, 2, 2), (3, 2, 3), (4, 3, 2)]:
        pts = lambda_shell(n, e, s).points
        brute = {p for p in itertools.product(range(-s + 1, s + 1), repeat=n)
                 if sum(map(abs, p)) == e + 2}
        assert pts == brute and lambda_size(n, e, s) == len(brute)
    with pytest.raises(ValueError):
        lambda_shell(2, 1, 1)


def test_distance_bound_small_exhaustive():
    out = verify_lep9_small(2, 1, 2)
    assert out["holds"] and out["codes_checked"] > 0
    assert distance_bound(2, 1, 2, 2) == Fraction(3, 1) * (2 * (2 - Fraction(3, 2)) + 2)


def test_sector_legality_and_census():
    assert legal_sizes(2) == {0, 1, 3, 4}
    sec = Sector((0, 0, 0, 0, 0, 0), (0, 1, 2, 3, 4, 5))
    assert sector_intersection(lee_sphere(6, 1), sec).size == 7
    for n, e in [(6, 1), (6, 2), (7, 1)]:
        assert census_g(n, e).counts == census_flat(n, e)


def test_post_combination_signs():
    assert post_combination(census_g(6, 3))["value"] == -960
    assert post_combination(census_g(6, 1))["value"] == 320


def test_post_local_sampled_on_pl_7_1_15():
    code = LinearCode(7, 15, tuple(range(1, 8)), 15)
    with pytest.raises(MemoryError):
        linear_code(7, 15, list(range(1, 8)), 15)
    rep = verify_post_local(code, lee_sphere(7, 1), sample=2000, seed=1)
    assert rep.holds and rep.sectors_checked == 2000 and rep.mode.startswith("sampled")
