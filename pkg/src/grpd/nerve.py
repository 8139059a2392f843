"""Truncated nerve diagrams X_0, ..., X_R of finite groupoids.

Each X_r is a finite simplicial set; the nerve faces eps_i: X_r -> X_{r-1}
and degeneracies eta_i: X_r -> X_{r+1} are simplicial maps. Every builder
here produces X_r as a disjoint union of labelled pieces, with keys
``(label, simplex)``, so that r-degeneracy is a property of the label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .groupoid import (FiniteGroupoid, GroupoidError, ValidationReport,
                       unit_groupoid, validate_groupoid)
from .simplicial import (SimplicialMap, SimplicialSetModel, disjoint_union, point,
                         sub_model)

__all__ = [
    "NerveDiagram",
    "NerveMap",
    "Cover",
    "CoverError",
    "ActionError",
    "nerve",
    "cech_nerve",
    "action_nerve",
    "validate_cover",
    "label_map",
    "collapse_map",
    "identity_map",
]


class CoverError(ValueError):
    pass


class ActionError(ValueError):
    pass


@dataclass
class NerveDiagram:
    """Levels ``X[0..R]`` with ``eps[r][i]`` (r >= 1) and ``etas[r][i]`` (r < R).

    ``rdeg[r]`` holds the keys of X_r lying in the image of some eta.
    """

    R: int
    X: list[SimplicialSetModel]
    eps: list[list[SimplicialMap]]
    etas: list[list[SimplicialMap]]
    name: str = ""
    labels: list[list] = field(default=None)
    rdeg: list[set] = field(default=None)

    def __post_init__(self):
        if self.rdeg is None:
            self.rdeg = [set() for _ in range(self.R + 1)]
            for r in range(self.R):
                for e in self.etas[r]:
                    for m in e.maps:
                        self.rdeg[r + 1].update(m.values())

    @property
    def D(self) -> int:
        return min(x.D for x in self.X)

    def level_sizes(self) -> list[int]:
        """Number of vertices of each X_r."""
        return [len(x.levels[0]) for x in self.X]

    def nondegenerate_counts(self) -> list[int]:
        """Vertices of X_r outside the image of the eta maps."""
        return [sum(1 for v in x.levels[0] if v not in self.rdeg[r])
                for r, x in enumerate(self.X)]

    def truncate(self, R: int) -> "NerveDiagram":
        if R > self.R:
            raise ValueError("cannot raise the cutoff by truncation")
        return NerveDiagram(R, self.X[:R + 1], self.eps[:R + 1], self.etas[:R],
                            self.name, None if self.labels is None else self.labels[:R + 1])

    def validate(self) -> ValidationReport:
        """Simplicial identities in both directions, checked on every key."""
        rep = ValidationReport()
        for r, x in enumerate(self.X):
            x.validate(rep)
        for r in range(1, self.R + 1):
            for i, e in enumerate(self.eps[r]):
                e.validate(rep, f"eps_{i} on X_{r}")
        for r in range(self.R):
            for i, e in enumerate(self.etas[r]):
                e.validate(rep, f"eta_{i} on X_{r}")
        if not rep.ok:
            return rep
        E, H = self.eps, self.etas
        for r in range(self.R + 1):
            X = self.X[r]
            for n in range(X.D + 1):
                for y in X.levels[n]:
                    if r >= 2:
                        for j in range(r + 1):
                            for i in range(j):
                                a = E[r - 1][i].maps[n][E[r][j].maps[n][y]]
                                b = E[r - 1][j - 1].maps[n][E[r][i].maps[n][y]]
                                if a != b:
                                    rep.add(f"eps_{i} eps_{j} on X_{r}", (y,))
                    if r < self.R:
                        for i in range(r + 1):
                            z = H[r][i].maps[n][y]
                            for j in range(r + 2):
                                w = E[r + 1][j].maps[n][z]
                                if j in (i, i + 1):
                                    ok = w == y
                                elif j < i:
                                    ok = w == H[r - 1][i - 1].maps[n][E[r][j].maps[n][y]]
                                else:
                                    ok = w == H[r - 1][i].maps[n][E[r][j - 1].maps[n][y]]
                                if not ok:
                                    rep.add(f"eps_{j} eta_{i} on X_{r}", (y,))
                            if r + 1 < self.R:
                                for j in range(i, r + 1):
                                    a = H[r + 1][i].maps[n][H[r][j].maps[n][y]]
                                    b = H[r + 1][j + 1].maps[n][H[r][i].maps[n][y]]
                                    if a != b:
                                        rep.add(f"eta_{i} eta_{j} on X_{r}", (y,))
        return rep

    def summary(self) -> dict:
        return {"name": self.name, "cutoff": self.R,
                "level_sizes": self.level_sizes(),
                "nondegenerate": self.nondegenerate_counts(),
                "internal_dim": max(x.dim for x in self.X)}


def _assemble(R, parts, face_fn, degen_fn, name) -> NerveDiagram:
    """Build a diagram from labelled pieces.

    ``parts[r]`` lists ``(label, model)``; ``face_fn(r, i, label)`` and
    ``degen_fn(r, i, label)`` return ``(label', internal)`` where
    ``internal`` is a list of level dicts or None for the identity on keys.
    """
    D = max((m.D for p in parts for _, m in p), default=0)
    X = [disjoint_union(p, D) for p in parts]

    def build(src_r, dst_r, fn, i):
        maps = [{} for _ in range(D + 1)]
        for lab, m in parts[src_r]:
            lab2, internal = fn(src_r, i, lab)
            for n in range(D + 1):
                mp = maps[n]
                if internal is None:
                    for x in m.levels[n]:
                        mp[(lab, x)] = (lab2, x)
                else:
                    f = internal[n]
                    for x in m.levels[n]:
                        mp[(lab, x)] = (lab2, f[x])
        return SimplicialMap(X[src_r], X[dst_r], maps)

    eps = [[]] + [[build(r, r - 1, face_fn, i) for i in range(r + 1)] for r in range(1, R + 1)]
    etas = [[build(r, r + 1, degen_fn, i) for i in range(r + 1)] for r in range(R)]
    labels = [[lab for lab, _ in p] for p in parts]
    return NerveDiagram(R, X, eps, etas, name=name, labels=labels)


def nerve(g: FiniteGroupoid, R: int, D: int = 1) -> NerveDiagram:
    """Nerve of a finite groupoid up to level R.

    X_r is the discrete set of composable r-tuples (g_1, ..., g_r), X_0 the
    objects. eps_0 drops g_1, eps_r drops g_r, middle faces compose, and
    eta_i inserts an identity in position i.
    """
    rep = validate_groupoid(g)
    if not rep.ok:
        raise GroupoidError(rep)
    if R < 0:
        raise ValueError("cutoff must be >= 0")
    pt = point(D)
    tuples = [list(g.objects)]
    for r in range(1, R + 1):
        prev = tuples[-1]
        if r == 1:
            nxt = [(a,) for a in g.arrows]
        else:
            nxt = [t + (a,) for t in prev for a in g.arrows if g.target[t[-1]] == g.source[a]]
        tuples.append(nxt)
    parts = [[(t, pt) for t in ts] for ts in tuples]

    def face(r, i, t):
        if r == 1:
            return (g.target[t[0]] if i == 0 else g.source[t[0]]), None
        if i == 0:
            return t[1:], None
        if i == r:
            return t[:-1], None
        return t[:i - 1] + (g.compose(t[i - 1], t[i]),) + t[i + 1:], None

    def degen(r, i, t):
        if r == 0:
            return (g.identities[t],), None
        obj = g.source[t[0]] if i == 0 else g.target[t[i - 1]]
        return t[:i] + (g.identities[obj],) + t[i:], None

    return _assemble(R, parts, face, degen, name=f"nerve({g.name})")


@dataclass
class Cover:
    """A base model and a list of pieces, each a set of base keys."""

    base: SimplicialSetModel
    pieces: list[set]
    name: str = ""


def _degeneracy_closure(base: SimplicialSetModel, keys: set) -> set:
    out = set(keys)
    for n in range(base.D):
        for x in base.levels[n]:
            if x in out:
                for d in base.degens[n]:
                    out.add(d[x])
    return out


def validate_cover(c: Cover) -> ValidationReport:
    rep = ValidationReport()
    b = c.base
    allkeys = set().union(*[set(l) for l in b.levels])
    for k, p in enumerate(c.pieces):
        for n in range(1, b.D + 1):
            for x in b.levels[n]:
                if x in p:
                    for i in range(n + 1):
                        if b.faces[n][i][x] not in p:
                            rep.add(f"piece {k} is face-closed", (x, b.faces[n][i][x]))
        stray = [x for x in p if x not in allkeys]
        if stray:
            rep.add(f"piece {k} lies in the base", tuple(stray[:1]))
    covered = set().union(*c.pieces) if c.pieces else set()
    for n in range(b.D + 1):
        for x in b.nondeg[n]:
            if x not in covered:
                rep.add("pieces cover the base", (x,))
    return rep


def cech_nerve(c: Cover, R: int) -> NerveDiagram:
    """Nerve of the Cech groupoid of a cover.

    X_r is the disjoint union over index tuples (i_0, ..., i_r) of the
    intersections of the pieces; eps_j deletes index j, eta_j repeats it.
    Empty intersections are omitted.
    """
    rep = validate_cover(c)
    if not rep.ok:
        raise CoverError("; ".join(rep.messages()))
    base = c.base
    pieces = [_degeneracy_closure(base, p) for p in c.pieces]
    m = len(pieces)
    parts = []
    cache = {}
    for r in range(R + 1):
        lev = []
        for idx in product(range(m), repeat=r + 1):
            key = frozenset(idx)
            if key not in cache:
                inter = set.intersection(*[pieces[i] for i in key])
                cache[key] = sub_model(base, inter) if inter else None
            if cache[key] is not None:
                lev.append((idx, cache[key]))
        parts.append(lev)

    def face(r, j, idx):
        return idx[:j] + idx[j + 1:], None

    def degen(r, j, idx):
        return idx[:j + 1] + idx[j:], None

    return _assemble(R, parts, face, degen, name=f"cech({c.name})")


def action_nerve(group: FiniteGroupoid, space: SimplicialSetModel, action: dict,
                 R: int) -> NerveDiagram:
    """Nerve of the transformation groupoid of a group acting on a space.

    ``action[g]`` is a SimplicialMap (or list of level dicts) of the space,
    with ``action[compose(g, h)] = action[h] after action[g]``. X_r is
    G^r x space with keys ``((g_1, ..., g_r), x)``: the arrow (g, x) runs
    from x to g.x, and eps_0 moves the base point along g_1.
    """
    rep = validate_groupoid(group)
    if not rep.ok:
        raise GroupoidError(rep)
    if not group.is_group:
        raise ActionError("action_nerve needs a one-object groupoid")
    acts = {}
    for g in group.arrows:
        a = action[g]
        a = a if isinstance(a, SimplicialMap) else SimplicialMap(space, space, list(a))
        r2 = a.validate(tag=f"action of {g!r}")
        if not r2.ok:
            raise ActionError("; ".join(r2.messages()))
        acts[g] = a.maps
    e = group.identities[group.objects[0]]
    for n in range(space.D + 1):
        for x in space.levels[n]:
            if acts[e][n][x] != x:
                raise ActionError(f"identity acts nontrivially on {x!r}")
            for g in group.arrows:
                for h in group.arrows:
                    if acts[group.compose(g, h)][n][x] != acts[h][n][acts[g][n][x]]:
                        raise ActionError(f"action is not a homomorphism at {(g, h, x)!r}")
    parts = [[(t, space) for t in product(group.arrows, repeat=r)] for r in range(R + 1)]

    def face(r, i, t):
        if i == 0:
            return t[1:], acts[t[0]]
        if i == r:
            return t[:-1], None
        return t[:i - 1] + (group.compose(t[i - 1], t[i]),) + t[i + 1:], None

    def degen(r, i, t):
        return t[:i] + (e,) + t[i:], None

    return _assemble(R, parts, face, degen, name=f"action({group.name})")


@dataclass
class NerveMap:
    """Levelwise simplicial maps ``maps[r]: X_r -> Y_r``."""

    src: NerveDiagram
    dst: NerveDiagram
    maps: list[SimplicialMap]

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        for r, f in enumerate(self.maps):
            f.validate(rep, f"level {r}")
        if not rep.ok:
            return rep
        s, t = self.src, self.dst
        for r in range(s.R + 1):
            X = s.X[r]
            for n in range(X.D + 1):
                for y in X.levels[n]:
                    fy = self.maps[r].maps[n][y]
                    if r >= 1:
                        for i in range(r + 1):
                            if self.maps[r - 1].maps[n][s.eps[r][i].maps[n][y]] != t.eps[r][i].maps[n][fy]:
                                rep.add(f"map commutes with eps_{i} on X_{r}", (y,))
                    if r < s.R:
                        for i in range(r + 1):
                            if self.maps[r + 1].maps[n][s.etas[r][i].maps[n][y]] != t.etas[r][i].maps[n][fy]:
                                rep.add(f"map commutes with eta_{i} on X_{r}", (y,))
        return rep


def label_map(src: NerveDiagram, dst: NerveDiagram, fn) -> NerveMap:
    """Map given on labels: ``fn(r, label) -> (label', internal)``.

    ``internal`` is None (identity on inner keys) or a list of level dicts.
    """
    R = min(src.R, dst.R)
    maps = []
    for r in range(R + 1):
        X = src.X[r]
        lv = []
        cache = {}
        for n in range(X.D + 1):
            m = {}
            for key in X.levels[n]:
                lab, x = key
                if lab not in cache:
                    cache[lab] = fn(r, lab)
                lab2, internal = cache[lab]
                m[key] = (lab2, x if internal is None else internal[n][x])
            lv.append(m)
        maps.append(SimplicialMap(X, dst.X[r], lv))
    return NerveMap(src.truncate(R) if R < src.R else src, dst, maps)


def identity_map(n: NerveDiagram) -> NerveMap:
    return NerveMap(n, n, [SimplicialMap(x, x, [{k: k for k in lev} for lev in x.levels])
                           for x in n.X])


def collapse_map(src: NerveDiagram, dst: NerveDiagram | None = None) -> NerveMap:
    """Map to the nerve of the one-object unit groupoid."""
    if dst is None:
        dst = nerve(unit_groupoid(["*"]), src.R, D=src.D)
    maps = []
    for r in range(src.R + 1):
        X, Y = src.X[r], dst.X[r]
        maps.append(SimplicialMap(X, Y, [{k: Y.levels[n][0] for k in X.levels[n]}
                                         for n in range(X.D + 1)]))
    return NerveMap(src, dst, maps)
