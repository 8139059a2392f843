"""Random desk-scale inputs shared by the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from grpd import linalg as la
from grpd.groupoid import cyclic_group, disjoint_union, pair_groupoid, symmetric_group
from grpd.nerve import Cover, cech_nerve, nerve
from grpd.complexes import span_filtration
from grpd.simplicial import from_complex


def random_complex(rng: random.Random):
    """Facets of a random complex on at most 5 vertices (edges and triangles)."""
    n = rng.randint(2, 5)
    verts = list(range(n))
    facets = set()
    for a, b in itertools.combinations(verts, 2):
        if rng.random() < 0.5:
            facets.add((a, b))
    for t in itertools.combinations(verts, 3):
        if rng.random() < 0.15:
            facets.add(t)
    for v in verts:
        if not any(v in f for f in facets):
            facets.add((v,))
    return verts, sorted(facets)


def _closure(facets):
    out = set()
    for f in facets:
        for m in range(1, len(f) + 1):
            out.update(itertools.combinations(f, m))
    return out


def random_cover(rng: random.Random) -> Cover:
    verts, facets = random_complex(rng)
    base = from_complex(facets, vertices=verts, D=2)
    k = rng.randint(1, 3)
    groups = [[] for _ in range(k)]
    for f in facets:
        groups[rng.randrange(k)].append(f)
        if rng.random() < 0.3:
            groups[rng.randrange(k)].append(f)
    pieces = [_closure(g) for g in groups if g]
    return Cover(base, pieces, name="random")


def random_groupoid(rng: random.Random):
    choice = rng.randrange(4)
    if choice == 0:
        return cyclic_group(rng.randint(1, 4))
    if choice == 1:
        return pair_groupoid(range(rng.randint(1, 3)))
    if choice == 2:
        return disjoint_union(cyclic_group(rng.randint(1, 3)), pair_groupoid(range(2)))
    return symmetric_group(3) if rng.random() < 0.2 else cyclic_group(2)


def random_nerve(rng: random.Random, R: int = 3):
    if rng.random() < 0.5:
        return nerve(random_groupoid(rng), R)
    return cech_nerve(random_cover(rng), R)


def rand_vec(rng: random.Random, n: int, integral: bool = False):
    if integral:
        return la.qvec([rng.randint(-3, 3) for _ in range(n)])
    return la.qvec([Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)])


def equal(a, b) -> bool:
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


def random_filtration(rng, c):
    """A differential-stable span family: random vectors closed under d."""
    spans = {}
    prev = None
    for k in range(c.lo, c.hi + 1):
        cols = []
        if prev is not None and prev.shape[1] and c.n(k):
            img = la.qmat(c.d(k - 1), c.d(k - 1).shape) @ prev
            cols += [img[:, j] for j in range(img.shape[1])]
        for _ in range(rng.randint(0, c.n(k))):
            cols.append(la.qvec([rng.randint(-2, 2) for _ in range(c.n(k))]))
        S = la.qmat(cols, (len(cols), c.n(k))).T if cols else la.zeros(c.n(k), 0)
        spans[(1, k)] = S
        prev = S
    return span_filtration("random", spans)


def naturality_holds(src, dst, fn, k, rng) -> bool:
    """Pull a random multiplicative bundle back along a nerve map and compare ξ.

    ``fn`` is a label function, None for the identity or "collapse".
    """
    from grpd.bundles import (MultiplicativeBundle, char_class_xi, is_multiplicative,
                              pullback_multiplicative, random_bundle, validate_bundle)
    from grpd.cochains import a_double_complex, pullback_map, total_complex
    from grpd.nerve import collapse_map, identity_map, label_map
    if fn is None:
        f = identity_map(src)
    elif fn == "collapse":
        f = collapse_map(src)
    else:
        f = label_map(src, dst, fn)
    if not f.validate().ok:
        return False
    stc = total_complex(a_double_complex(f.src))
    dtc = total_complex(a_double_complex(f.dst))
    d = random_bundle(dtc, rng)
    mb = MultiplicativeBundle(d, {k: rand_vec(rng, dtc.n(2 * k - 1))})
    pmb = pullback_multiplicative(f, mb, stc)
    if not (validate_bundle(pmb.bundle).ok and is_multiplicative(pmb)[0]):
        return False
    X, Xp = char_class_xi(mb, k), char_class_xi(pmb, k)
    P = pullback_map(f, stc, dtc)
    pf = lambda m, v: la.qmat(P.f(m), P.f(m).shape) @ v  # noqa: E731
    return (Xp.is_cocycle and equal(pf(2 * k, X.parts[0]), Xp.parts[0])
            and equal(pf(2 * k, X.parts[1]), Xp.parts[1])
            and equal(pf(2 * k - 1, X.parts[2]), Xp.parts[2]))
