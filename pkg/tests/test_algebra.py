import cmath
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from leelab.algebra import (CharacterPoint, SplittingHom, character_sum,
                            character_zero_by_counting, find_splitting_hom,
                            fourier_finiteness_prime, prime_tile_reduction, prove_no_linear,
                            radius1_alphabet_condition, theorem_d_witness_search)
from leelab.cyclotomic import CyclotomicInt
from leelab.geometry import Tile, lee_sphere, semicross
from leelab.groups import (AbelianGroup, abelian_groups, cyclic, hermite_normal_form,
                           lattice_index, radical)


def test_abelian_groups_enumeration():
    assert sorted(g.factors for g in abelian_groups(25)) == [(5, 5), (25,)]
    assert len(abelian_groups(72)) == 6  # p(3) * p(2)
    assert all(g.order == 72 for g in abelian_groups(72))
    with pytest.raises(ValueError):
        AbelianGroup((4, 6))


def test_group_tables():
    g = AbelianGroup((2, 6))
    for x, y in itertools.product(range(g.order), repeat=2):
        a, b = g.decode(x), g.decode(y)
        s = tuple((u + v) % f for u, v, f in zip(a, b, g.factors))
        assert g.add_table[x, y] == g.encode(s)
    assert g.exponent == 6
    assert sorted(g.element_orders().tolist()).count(1) == 1


def test_lattice_helpers():
    assert lattice_index([[1, 0], [0, 1]], 2) == 1
    assert lattice_index([[2, 0], [0, 3]], 2) == 6
    assert lattice_index([[1, 1]], 2) == 0
    assert hermite_normal_form([[2, 0], [0, 2], [1, 1]]) and radical(72) == 6


@given(st.integers(3, 30), st.lists(st.integers(0, 40), min_size=1, max_size=8))
@settings(max_examples=60, deadline=None)
def test_cyclotomic_zero_agrees_with_float(m, exps):
    counts = [0] * m
    for k in exps:
        counts[k % m] += 1
    z = CyclotomicInt.from_powers(m, counts)
    approx = sum(c * cmath.exp(2j * cmath.pi * k / m) for k, c in enumerate(counts))
    assert z.is_zero() == (abs(approx) < 1e-9)
    assert abs(complex(z) - approx) < 1e-9


def test_cyclotomic_arithmetic():
    m = 12
    z1 = CyclotomicInt.zeta_power(m, 1)
    one = CyclotomicInt.zeta_power(m, 0)
    acc = one
    for _ in range(m):
        acc = acc * z1
    assert (acc - one).is_zero()
    assert (z1 + (-z1)).is_zero()


def test_character_sum_known_zero_and_nonzero():
    tile = lee_sphere(3, 2)
    assert character_sum(tile, CharacterPoint(5, (0, 1, 2)))[0].is_zero()
    assert not character_sum(tile, CharacterPoint(5, (1, 1, 1)))[0].is_zero()


@pytest.mark.parametrize("alpha", list(itertools.product(range(5), repeat=3))[:40])
def test_counting_oracle_matches_exact(alpha):
    tile = lee_sphere(3, 2)
    pt = CharacterPoint(5, alpha)
    assert character_sum(tile, pt)[0].is_zero() == character_zero_by_counting(tile, pt)


def test_witness_scan():
    scan = theorem_d_witness_search(semicross(4), [5])
    assert scan.witness is not None and scan.witness.alpha == (1, 2, 3, 4)
    assert len(theorem_d_witness_search(semicross(4), [5], find_all=True)) == 24
    domino = Tile(2, [(0, 0), (1, 0)])
    assert theorem_d_witness_search(domino, [2]).witness.alpha == (1, 0)


def test_splitting_homs():
    res = find_splitting_hom(lee_sphere(2, 2), cyclic(13))
    assert res.verdict == "exists" and res.hom.is_bijective_on(lee_sphere(2, 2))
    assert SplittingHom(cyclic(7), (1, 2, 3)).is_bijective_on(lee_sphere(3, 1))
    assert not SplittingHom(cyclic(7), (1, 1, 3)).is_bijective_on(lee_sphere(3, 1))
    assert find_splitting_hom(lee_sphere(3, 2), cyclic(25), node_limit=1).verdict in (
        "inconclusive", "nonexistent")


def test_hom_search_symmetry_agrees_with_plain():
    for g in abelian_groups(25):
        a = find_splitting_hom(lee_sphere(3, 2), g, symmetry=True)
        b = find_splitting_hom(lee_sphere(3, 2), g, symmetry=False)
        assert a.verdict == b.verdict == "nonexistent"
        assert a.nodes <= b.nodes


def test_prove_no_linear_certificate_shape():
    cert = prove_no_linear(3, 2)
    assert cert["verdict"] == "nonexistent"
    assert sorted(g["group"] for g in cert["groups"]) == [[5, 5], [25]]
    assert cert["nodes"] == sum(g["nodes"] for g in cert["groups"])


@pytest.mark.parametrize("n,q,expected", [(4, 3, True), (3, 5, False), (3, 7, True),
                                          (12, 10, True), (2, 5, True), (2, 4, False)])
def test_radius1_alphabet_condition(n, q, expected):
    out = radius1_alphabet_condition(n, q)
    assert out["condition"] is expected
    if expected:
        assert out["perfect"] and out["bijective_on_sphere"]


def test_prime_tiles():
    assert prime_tile_reduction(lee_sphere(4, 2))["verdict"] == "no-tiling"
    assert prime_tile_reduction(semicross(4))["verdict"] == "lattice-exists"
    assert prime_tile_reduction(lee_sphere(2, 2))["verdict"] == "lattice-exists"
    assert prime_tile_reduction(lee_sphere(3, 2))["verdict"] == "not-applicable"
    f = fourier_finiteness_prime(semicross(4))
    assert f["verdict"] == "finite"
