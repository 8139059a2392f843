import random

import numpy as np
import pytest

from oracles import integer_cohomology, invariant_form, random_integer_complex, uct_qz
from grpd import linalg as la
from grpd.cochains import a_double_complex, column_filtration, total_complex
from grpd.complexes import (ChainMap, CutoffError, FiltrationError, FreeComplex, MixedGroup,
                            bete_filtration, cohomology, filtration_pieces, graded, induced_map,
                            mapping_cone, qz_cohomology, span_filtration, truncate)
from grpd.models import circle_model, z2_model


def tcof(n):
    return total_complex(a_double_complex(n))


def Z(dims, diffs):
    return FreeComplex(dict(dims), {k: la.imat(m, np.shape(m)) for k, m in diffs.items()}, "Z")


def H(c, k):
    h = cohomology(c, k)
    return h.free_rank, tuple(h.torsion)


def point_complex(n=1):
    return Z({0: n}, {})


def test_zero_differentials_give_free_modules():
    c = Z({0: 2, 1: 3}, {0: np.zeros((3, 2), dtype=object)})
    assert H(c, 0) == (2, ()) and H(c, 1) == (3, ())


def test_z2_and_circle_cohomology():
    tc = tcof(z2_model(5))
    assert [cohomology(tc, k).order_label for k in range(5)] == ["Z", "0", "Z/2", "0", "Z/2"]
    tc = tcof(circle_model(3))
    assert [cohomology(tc, k).order_label for k in range(2)] == ["Z", "Z"]


def test_cutoff_window_enforced():
    tc = tcof(circle_model(3))
    with pytest.raises(CutoffError):
        cohomology(tc, 3)
    with pytest.raises(CutoffError):
        qz_cohomology(tc, 2)


def test_random_complexes_match_sympy():
    rng = random.Random(1)
    for _ in range(20):
        dims, diffs, expected = random_integer_complex(rng)
        c = Z(dims, diffs)
        assert c.is_complex()
        for k in range(4):
            free, tors = expected[k]
            assert H(c, k) == (free, invariant_form(tors))
            f2, t2 = integer_cohomology(dims, diffs, k)
            assert (f2, invariant_form(t2)) == (free, invariant_form(tors))
            assert cohomology(c.over_Q(), k).free_rank == expected[k][0]


def test_generators_are_cocycles_and_classes_detect_boundaries():
    rng = random.Random(2)
    for _ in range(10):
        dims, diffs, expected = random_integer_complex(rng)
        c = Z(dims, diffs)
        for k in range(1, 3):
            h = cohomology(c, k)
            for g in h.generators:
                assert not any(c.d(k) @ g)
            for j, d in enumerate(h.torsion):
                assert not h.is_zero(h.generators[j])
                assert h.is_zero(d * h.generators[j])
            b = c.d(k - 1) @ la.qvec([rng.randint(-3, 3) for _ in range(c.n(k - 1))])
            assert h.is_zero(b)


def test_qz_matches_universal_coefficients():
    rng = random.Random(4)
    for _ in range(20):
        dims, diffs, expected = random_integer_complex(rng)
        expected[4] = (0, ())
        c = Z(dims, diffs)
        for k in range(3):
            g = qz_cohomology(c, k)
            b, t = uct_qz(expected, k)
            assert (g.q_rank, g.qz_rank, g.z_rank) == (0, b, 0)
            assert g.torsion == invariant_form(t)


def test_qz_examples():
    tc = tcof(circle_model(3))
    assert qz_cohomology(tc, 0).label() == "(Q/Z)"
    assert qz_cohomology(tc, 1).invariants() == (0, 1, (), 0)
    assert qz_cohomology(tcof(z2_model(3)), 1).label() == "Z/2"
    acyclic = Z({0: 1, 1: 1}, {0: [[1]]})
    assert qz_cohomology(acyclic, 0).is_zero()
    with pytest.raises(ValueError):
        qz_cohomology(acyclic.over_Q(), 0)


def test_cone_of_identity_is_acyclic():
    rng = random.Random(5)
    dims, diffs, _ = random_integer_complex(rng)
    c = Z(dims, diffs)
    ident = ChainMap(c, c, {k: la.eye(c.n(k), "Z") for k in dims})
    cone, inc, proj = mapping_cone(ident)
    assert cone.is_complex()
    for k in range(cone.lo, cone.hi + 1):
        assert H(cone, k) == (0, ())


def test_cone_of_zero_source_is_shift():
    B = Z({0: 1, 1: 1}, {0: [[3]]})
    zero = Z({0: 0, 1: 0}, {})
    cone, _, _ = mapping_cone(ChainMap(zero, B, {}))
    assert H(cone, 1) == H(B, 0) and H(cone, 2) == H(B, 1) == (0, (3,))


def test_cone_of_multiplication_by_two():
    A = point_complex()
    cone, inc, proj = mapping_cone(ChainMap(A, A, {0: la.imat([[2]])}))
    assert H(cone, 0) == (0, ()) and H(cone, 1) == (0, (2,))
    assert inc.check() is None and proj.check() is None


def test_cone_rejects_non_chain_map():
    A = Z({0: 1, 1: 1}, {0: [[1]]})
    with pytest.raises(ValueError):
        mapping_cone(ChainMap(A, A, {0: la.imat([[1]]), 1: la.imat([[2]])}))


def test_truncations():
    tc = tcof(circle_model(3))
    same = truncate(tc, "ge", 0)
    assert same.dims == tc.dims and all((same.d(k) == tc.d(k)).all() for k in range(tc.hi))
    both = truncate(truncate(tc, "ge", 2), "lt", 2)
    assert all(both.n(k) == 0 for k in both.dims)


def test_truncated_filtered_piece_has_no_top_cohomology():
    # H^{2r-n}(sigma_{<2r-n} F^r) = 0 for the bete filtration
    tc = tcof(circle_model(4))
    for r, n in ((1, 0), (1, 1), (2, 2)):
        sub, *_ = filtration_pieces(tc, bete_filtration(), r)
        t = truncate(sub, "lt", 2 * r - n)
        assert H(t, 2 * r - n) == (0, ())


def test_filtration_pieces_bete():
    tc = tcof(circle_model(3))
    sub, quo, inc, proj = filtration_pieces(tc, bete_filtration(), 0)
    assert sub.dims == tc.dims and all(v == 0 for v in quo.dims.values())
    sub, quo, inc, proj = filtration_pieces(tc, bete_filtration(), 2)
    t = truncate(tc, "ge", 2)
    assert sub.dims == t.dims
    assert inc.check() is None and proj.check() is None


def test_column_filtration_quotient_is_level_zero():
    n = circle_model(3)
    tc = tcof(n)
    sub, quo, inc, proj = filtration_pieces(tc, column_filtration(), 1)
    dc = tc.double
    assert [quo.n(k) for k in range(3)] == [dc.dim(0, 0), dc.dim(0, 1), 0]
    assert (quo.d(0) == dc.ddprime(0, 0)).all()
    for k in range(tc.hi + 1):
        assert sub.n(k) + quo.n(k) == tc.n(k)


def test_span_filtration_rational_and_unstable():
    c = Z({0: 2, 1: 1}, {0: [[1, -1]]})
    good = span_filtration("diag", {(1, 0): la.qmat([[1], [1]]), (1, 1): la.zeros(1, 0)})
    sub, quo, inc, proj = filtration_pieces(c, good, 1)
    assert sub.n(0) == 1 and quo.n(0) == 1 and quo.n(1) == 1
    assert inc.check() is None and proj.check() is None
    bad = span_filtration("bad", {(1, 0): la.qmat([[1], [0]]), (1, 1): la.zeros(1, 0)})
    with pytest.raises(FiltrationError):
        filtration_pieces(c, bad, 1)


def test_induced_map_identity_and_zero():
    tc = tcof(circle_model(3))
    ident = ChainMap(tc, tc, {k: la.eye(tc.n(k), "Z") for k in tc.dims})
    zero = ChainMap(tc, tc, {})
    for k in (0, 1):
        assert (induced_map(ident, k) == la.eye(1, "Z")).all()
        assert not induced_map(zero, k).any()


def test_mixed_group_labels():
    g = graded((1, 2), ((2, 3), 1))
    assert g.label() == "Q + (Q/Z)^2 + Z/6 + Z"
    assert not g.extension_resolved
    assert graded((0, 1), ((), 0)).extension_resolved
    assert MixedGroup().is_zero() and MixedGroup().label() == "0"
    assert g.to_json()["torsion"] == [6]
