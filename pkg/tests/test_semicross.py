import numpy as np
import pytest

from leelab.geometry import semicross
from leelab.semicross import (counting_lemma_check, counting_lemma_expected, cyclic_check,
                              enumerate_semicross_tilings, matches_standard, standard_lattice,
                              u_sets)
from leelab.torus import linear_code, verify_perfect

from tilings import semicross_enumeration


@pytest.mark.parametrize("p,through_zero", [(2, 1), (3, 1), (5, 6)])
def test_enumeration_counts(p, through_zero):
    r = enumerate_semicross_tilings(p)
    assert r.complete and len(r.codes) == through_zero
    assert r.total_tilings == through_zero * p
    assert r.all_lattice and len(r.classes) == 1
    assert all(matches_standard(c) for c in r.codes)


def test_rejects_composite():
    with pytest.raises(ValueError):
        enumerate_semicross_tilings(4)


def test_standard_lattice_tiles():
    for p in (3, 5, 7):
        assert verify_perfect(standard_lattice(p), semicross(p - 1)).covered_exactly_once


def test_counting_formula_integral_and_checked():
    for p in (3, 5, 7):
        for k in range(1, p):
            counting_lemma_expected(p, k, True)
            counting_lemma_expected(p, k, False)
    code = standard_lattice(7)
    assert all(counting_lemma_check(code, k, (0,) * 6) for k in range(1, 7))


def test_usets_on_a_known_tiling():
    code = semicross_enumeration(5).codes[4]
    u = u_sets(code, code.codewords[0])
    assert u.holds
    diffs = {tuple(np.array(a)) for a in u.U2p}
    assert len(diffs) == 2
    for a in u.U2p:
        assert sorted(map(abs, a)) == [0, 0, 1, 1]
    with pytest.raises(ValueError):
        u_sets(standard_lattice(3), (0, 0))


def test_cyclic_check():
    assert all(cyclic_check(c) for c in semicross_enumeration(5).codes)
    assert not cyclic_check(linear_code(3, 4, [1, 2, 3], 4))
