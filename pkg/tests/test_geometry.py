import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from leelab.geometry import (OrbitRep, Tile, double_sphere, is_permutation_invariant,
                             is_sign_invariant, lee_distance, lee_sphere, lee_weight,
                             orbit_points, orbit_rep, orbit_reps_of_weight, orbit_size,
                             parse_tile_spec, random_signed_permutation,
                             apply_signed_permutation, semicross, shell, shell_size,
                             sphere_size, tile_symmetries)

points = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                       min_size=3, max_size=3))


def brute_sphere(n, e):
    return sum(1 for p in itertools.product(range(-e, e + 1), repeat=n)
               if sum(map(abs, p)) <= e)


@given(st.integers(1, 5), st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_sphere_size_matches_enumeration(n, e):
    assert sphere_size(n, e) == brute_sphere(n, e) == len(lee_sphere(n, e))
    assert sphere_size(n, e) == sum(2 ** i * comb(n, i) * comb(e, i) for i in range(min(n, e) + 1))


@given(points)
def test_triangle_inequality_and_symmetry(pts):
    u, v, w = pts
    assert lee_distance(u, w) <= lee_distance(u, v) + lee_distance(v, w)
    assert lee_distance(u, v) == lee_distance(v, u)
    assert (lee_distance(u, v) == 0) == (u == v)


@given(points, st.integers(2, 9))
def test_torus_distance_is_min_over_lifts(pts, q):
    u, v, _ = pts
    d = sum(min((a - b) % q, (b - a) % q) for a, b in zip(u, v))
    assert lee_distance(u, v, q) == d
    assert lee_distance(u, v, q) <= lee_distance(u, v)


@given(points, st.randoms())
def test_weight_is_signed_permutation_invariant(pts, rnd):
    import numpy as np
    u = pts[0]
    perm, signs = random_signed_permutation(len(u), np.random.default_rng(rnd.randint(0, 10**6)))
    g = apply_signed_permutation(u, perm, signs)
    assert lee_weight(g) == lee_weight(u)
    assert orbit_rep(g) == orbit_rep(u)


@pytest.mark.parametrize("n,e", [(1, 3), (2, 2), (3, 2), (4, 3)])
def test_shells_partition_sphere(n, e):
    union = set()
    for r in range(e + 1):
        sh = shell(n, r)
        assert len(sh) == shell_size(n, r)
        assert not (union & sh)
        union |= sh
    assert union == set(lee_sphere(n, e).points)


@pytest.mark.parametrize("n,w", [(3, 4), (4, 3), (5, 5)])
def test_orbit_sizes_sum_to_shell(n, w):
    reps = orbit_reps_of_weight(w, n)
    assert sum(orbit_size(r, n) for r in reps) == shell_size(n, w)
    for r in reps:
        pts = list(orbit_points(r, n))
        assert len(pts) == len(set(pts)) == orbit_size(r, n)
        assert all(orbit_rep(p) == r for p in pts)


def test_orbit_rep_parse_and_order():
    r = OrbitRep.parse("1^2,3")
    assert r.weight == 5 and r.support == 3
    assert orbit_rep((0, -3, 1, 1)) == r


def test_tile_normalises_and_validates():
    t = Tile(2, [(1, 0), (0, 0), (1, 0)])
    assert len(t) == 2 and t.points[0] == (0, 0)
    assert Tile.from_json(t.to_json()) == t
    with pytest.raises(ValueError):
        Tile(2, [(0, 0, 0)])
    with pytest.raises(ValueError):
        Tile(2, [])
    with pytest.raises(ValueError):
        Tile.from_json({"points": []})


def test_special_tiles():
    assert len(semicross(4)) == 5
    for n, e in [(2, 1), (3, 1), (3, 2)]:
        s = set(lee_sphere(n, e).points)
        shifted = {(p[0] + 1,) + p[1:] for p in s}
        assert set(double_sphere(n, e).points) == s | shifted
    assert is_permutation_invariant(lee_sphere(3, 2)) and is_sign_invariant(lee_sphere(3, 2))
    assert not is_sign_invariant(semicross(3)) and is_permutation_invariant(semicross(3))
    assert len(tile_symmetries(lee_sphere(2, 1))) == 8


def test_parse_tile_spec():
    assert parse_tile_spec("sphere:3,2") == lee_sphere(3, 2)
    assert parse_tile_spec("semicross:4") == semicross(4)
    for bad in ("sphere:3", "cube:2", "sphere:a,b"):
        with pytest.raises(ValueError):
            parse_tile_spec(bad)
