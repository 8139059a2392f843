import random

import pytest
from hypothesis import given, strategies as st

from builders import equal, rand_vec, random_cover, random_nerve
from oracles import bar_cohomology
from grpd import linalg as la
from grpd.cochains import (CoefficientSpec, TotalCochain, a_double_complex, cup, cup_vec,
                           pullback_map, total_complex)
from grpd.complexes import cohomology, induced_map
from grpd.models import circle_model, cyclic_model, plain_circle_model, z2_model
from grpd.nerve import Cover, cech_nerve, label_map
from grpd.simplicial import point


def tcof(n, coeff=None):
    return total_complex(a_double_complex(n, coeff))


def unit(tc):
    v = la.qvec([0] * tc.n(0))
    for r, s, o, n in tc.blocks[0]:
        v[o:o + n] = 1
    return v


def test_z2_total_complex():
    tc = tcof(z2_model(5))
    assert [tc.n(k) for k in range(6)] == [1] * 6
    assert [tc.d(k)[0, 0] for k in range(5)] == [0, 2, 0, 2, 0]


def test_point_cech_nerve():
    base = point(D=2)
    allkeys = set().union(*[set(l) for l in base.levels])
    dc = a_double_complex(cech_nerve(Cover(base, [allkeys]), 3))
    dims = {(r, s): dc.dim(r, s) for r in range(4) for s in range(dc.S + 1)}
    assert dims[(0, 0)] == 1
    assert sum(dims.values()) == 1


def test_one_column_total_complex_is_the_column():
    dc = a_double_complex(plain_circle_model(0))
    tc = total_complex(dc)
    assert tc.n(0) == 3 and tc.n(1) == 3
    assert (tc.d(0) == dc.ddprime(0, 0)).all()


def test_random_double_complexes():
    rng = random.Random(11)
    for _ in range(20):
        n = random_nerve(rng, 3)
        dc = a_double_complex(n)
        assert dc.check() == {"dp2": True, "dpp2": True, "commute": True}
        assert total_complex(dc).is_complex()


def test_rational_matrices_match_integer():
    n = circle_model(3)
    tz = tcof(n)
    tq = tcof(n, CoefficientSpec("Rationals", "Integers"))
    assert tq.ring == "Q"
    for k in range(tz.hi):
        assert (tz.d(k) == tq.d(k)).all()


def test_coefficient_spec_rejects_bad_pair():
    with pytest.raises(ValueError):
        CoefficientSpec("RationalsModOne", "Rationals")


def _leibniz(tc, a, ka, b, kb):
    lhs = tc.d(ka + kb) @ cup_vec(tc, a, ka, b, kb)
    rhs = cup_vec(tc, tc.d(ka) @ a, ka + 1, b, kb) + (-1) ** ka * cup_vec(tc, a, ka, tc.d(kb) @ b, kb + 1)
    return equal(lhs, rhs)


def test_leibniz_random():
    rng = random.Random(3)
    for _ in range(100):
        tc = tcof(random_nerve(rng, 3))
        ka, kb = rng.randint(0, 2), rng.randint(0, 2)
        if ka + kb + 1 > tc.hi:
            continue
        a, b = rand_vec(rng, tc.n(ka)), rand_vec(rng, tc.n(kb))
        assert _leibniz(tc, a, ka, b, kb)


TC_Z3 = tcof(cyclic_model(3, 4))


@given(st.integers(0, 1), st.integers(0, 2), st.data())
def test_leibniz_property(ka, kb, data):
    tc = TC_Z3
    a = la.qvec(data.draw(st.lists(st.integers(-5, 5), min_size=tc.n(ka), max_size=tc.n(ka))))
    b = la.qvec(data.draw(st.lists(st.integers(-5, 5), min_size=tc.n(kb), max_size=tc.n(kb))))
    assert _leibniz(tc, a, ka, b, kb)


def test_unit_law():
    rng = random.Random(4)
    for n in (circle_model(3), z2_model(3), cech_nerve(random_cover(rng), 3)):
        tc = tcof(n)
        one = unit(tc)
        for k in range(3):
            b = rand_vec(rng, tc.n(k))
            assert equal(cup_vec(tc, one, 0, b, k), b)
            assert equal(cup_vec(tc, b, k, one, 0), b)


def test_associativity():
    rng = random.Random(6)
    for _ in range(20):
        tc = tcof(random_nerve(rng, 4))
        ks = [rng.randint(0, 2) for _ in range(3)]
        if sum(ks) > tc.hi:
            continue
        a, b, c = (rand_vec(rng, tc.n(k)) for k in ks)
        ab = cup_vec(tc, a, ks[0], b, ks[1])
        bc = cup_vec(tc, b, ks[1], c, ks[2])
        assert equal(cup_vec(tc, ab, ks[0] + ks[1], c, ks[2]), cup_vec(tc, a, ks[0], bc, ks[1] + ks[2]))


def test_graded_commutativity_in_cohomology():
    rng = random.Random(8)
    for n in (circle_model(4), cech_nerve(random_cover(rng), 4), cyclic_model(2, 4)):
        tc = tcof(n)
        gens = {k: cohomology(tc, k).generators for k in (1, 2)}
        for ka, kb in ((1, 1), (1, 2)):
            if ka + kb > tc.valid_max:
                continue
            H = cohomology(tc, ka + kb)
            for a in gens[ka]:
                for b in gens[kb]:
                    x = cup_vec(tc, a, ka, b, kb) - (-1) ** (ka * kb) * cup_vec(tc, b, kb, a, ka)
                    assert H.is_zero(x)


def test_circle_square_is_exact():
    tc = tcof(circle_model(3))
    (a,) = cohomology(tc, 1).generators
    assert cohomology(tc, 2).free_rank == 0
    assert cohomology(tc, 2).is_zero(cup_vec(tc, a, 1, a, 1))


def test_total_cochain_wrapper():
    tc = tcof(z2_model(3))
    a = TotalCochain(tc, 1, la.qvec([1]))
    assert a.d().vec[0] == 2
    assert cup(a, a).degree == 2
    with pytest.raises(ValueError):
        cup(a, TotalCochain(tcof(z2_model(3)), 1, la.qvec([1])))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_cyclic_against_bar_oracle(m):
    tc = tcof(cyclic_model(m, 4))
    ours = [(cohomology(tc, k, False).free_rank, tuple(sorted(cohomology(tc, k, False).torsion)))
            for k in range(4)]
    assert ours == bar_cohomology(m, 3)


def test_refinement_is_isomorphism():
    f = label_map(circle_model(3), plain_circle_model(3), lambda r, lab: ((0,) * (r + 1), None))
    assert f.validate().ok
    fine, coarse = tcof(f.src), tcof(f.dst)
    P = pullback_map(f, fine, coarse)
    assert P.check() is None
    for k in (0, 1):
        M = induced_map(P, k)
        assert M.shape == (1, 1) and abs(M[0, 0]) == 1
    assert cohomology(fine, 2).order_label == cohomology(coarse, 2).order_label == "0"


def test_pullback_is_chain_map_and_respects_cup():
    rng = random.Random(9)
    f = label_map(cyclic_model(4, 3), cyclic_model(2, 3),
                  lambda r, lab: (lab if r == 0 else tuple(x % 2 for x in lab), None))
    assert f.validate().ok
    s, d = tcof(f.src), tcof(f.dst)
    P = pullback_map(f, s, d)
    assert P.check() is None
    for ka, kb in ((1, 1), (0, 2), (1, 2)):
        a, b = rand_vec(rng, d.n(ka)), rand_vec(rng, d.n(kb))
        lhs = P.f(ka + kb) @ cup_vec(d, a, ka, b, kb)
        rhs = cup_vec(s, P.f(ka) @ a, ka, P.f(kb) @ b, kb)
        assert equal(lhs, rhs)
    # inflation along Z/4 -> Z/2 hits the element of order 2 in H^2(Z/4)
    M = induced_map(P, 2)
    assert M.shape == (1, 1) and M[0, 0] % 4 == 2
