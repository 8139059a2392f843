"""Finite simplicial sets stored as explicit face and degeneracy tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

from .groupoid import ValidationReport

__all__ = [
    "SimplicialSetModel",
    "SimplicialMap",
    "from_complex",
    "point",
    "discrete",
    "disjoint_union",
    "sub_model",
    "vertex_map",
    "triangulated_circle",
]


@dataclass
class SimplicialSetModel:
    """Levels 0..D of a simplicial set.

    ``faces[n][i]`` sends level n to level n-1 and ``degens[n][i]`` sends
    level n to level n+1 (defined for n < D). Keys are arbitrary hashables.
    """

    levels: list[list]
    faces: list[list[dict]]
    degens: list[list[dict]]
    nondeg: list[list] = field(default=None)
    name: str = ""

    def __post_init__(self):
        if self.nondeg is None:
            degenerate = [set() for _ in self.levels]
            for n, dl in enumerate(self.degens):
                for d in dl:
                    degenerate[n + 1].update(d.values())
            self.nondeg = [[x for x in lev if x not in degenerate[n]]
                           for n, lev in enumerate(self.levels)]
        self._nd = [set(l) for l in self.nondeg]

    @property
    def D(self) -> int:
        return len(self.levels) - 1

    @property
    def dim(self) -> int:
        d = -1
        for n, l in enumerate(self.nondeg):
            if l:
                d = n
        return d

    def is_nondegenerate(self, n: int, x) -> bool:
        return x in self._nd[n]

    def face(self, n: int, i: int, x):
        return self.faces[n][i][x]

    def front(self, x, n: int, q: int):
        """Front q-face of an n-simplex (keeps vertices 0..q)."""
        for m in range(n, q, -1):
            x = self.faces[m][m][x]
        return x

    def back(self, x, n: int, s: int):
        """Back s-face of an n-simplex (keeps vertices n-s..n)."""
        for m in range(n, s, -1):
            x = self.faces[m][0][x]
        return x

    def sizes(self) -> list[int]:
        return [len(l) for l in self.levels]

    def validate(self, report: ValidationReport | None = None) -> ValidationReport:
        """Exhaustive check of the simplicial identities."""
        rep = report or ValidationReport()
        D = self.D
        F, S = self.faces, self.degens
        for n in range(2, D + 1):
            for x in self.levels[n]:
                for j in range(n + 1):
                    for i in range(j):
                        if F[n - 1][i][F[n][j][x]] != F[n - 1][j - 1][F[n][i][x]]:
                            rep.add(f"d_{i} d_{j} = d_{j-1} d_{i} ({self.name})", (x,))
        for n in range(D):
            for x in self.levels[n]:
                for i in range(n + 1):
                    y = S[n][i][x]
                    for j in range(n + 2):
                        z = F[n + 1][j][y]
                        if j in (i, i + 1):
                            ok = z == x
                        elif j < i:
                            ok = z == S[n - 1][i - 1][F[n][j][x]]
                        else:
                            ok = z == S[n - 1][i][F[n][j - 1][x]]
                        if not ok:
                            rep.add(f"d_{j} s_{i} relation ({self.name})", (x,))
                    if n + 1 < D:
                        for j in range(i, n + 1):
                            if S[n + 1][i][S[n][j][x]] != S[n + 1][j + 1][S[n][i][x]]:
                                rep.add(f"s_{i} s_{j} = s_{j+1} s_{i} ({self.name})", (x,))
        return rep


@dataclass
class SimplicialMap:
    """Levelwise maps between two models, ``maps[n]`` a dict on level n."""

    src: SimplicialSetModel
    dst: SimplicialSetModel
    maps: list[dict]

    def __call__(self, n: int, x):
        return self.maps[n][x]

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``other`` after ``self``."""
        return SimplicialMap(self.src, other.dst,
                             [{x: other.maps[n][y] for x, y in m.items()}
                              for n, m in enumerate(self.maps)])

    def validate(self, report: ValidationReport | None = None, tag: str = "") -> ValidationReport:
        rep = report or ValidationReport()
        s, t = self.src, self.dst
        for n in range(s.D + 1):
            for x in s.levels[n]:
                if self.maps[n].get(x) not in t._levelset(n):
                    rep.add(f"map lands in target {tag}", (x,))
        if not rep.ok:
            return rep
        for n in range(1, s.D + 1):
            for x in s.levels[n]:
                for i in range(n + 1):
                    if self.maps[n - 1][s.faces[n][i][x]] != t.faces[n][i][self.maps[n][x]]:
                        rep.add(f"map commutes with d_{i} {tag}", (x,))
        for n in range(s.D):
            for x in s.levels[n]:
                for i in range(n + 1):
                    if self.maps[n + 1][s.degens[n][i][x]] != t.degens[n][i][self.maps[n][x]]:
                        rep.add(f"map commutes with s_{i} {tag}", (x,))
        return rep


def _levelset(self, n):
    cache = self.__dict__.setdefault("_ls", {})
    if n not in cache:
        cache[n] = set(self.levels[n])
    return cache[n]


SimplicialSetModel._levelset = _levelset


def _closure(facets) -> set[tuple]:
    out = set()
    for f in facets:
        f = tuple(f)
        for m in range(1, len(f) + 1):
            out.update(combinations(f, m))
    return out


def from_complex(facets, vertices=None, D: int | None = None, name: str = "") -> SimplicialSetModel:
    """Simplicial set of an ordered simplicial complex.

    n-simplices are weakly increasing vertex tuples (in the order given by
    ``vertices``) spanning a simplex; faces delete an entry, degeneracies
    repeat one. ``D`` defaults to dim + 1.
    """
    facets = [tuple(f) for f in facets]
    if vertices is None:
        vertices = sorted({v for f in facets for v in f})
    pos = {v: i for i, v in enumerate(vertices)}
    facets = [tuple(sorted(f, key=pos.__getitem__)) for f in facets]
    simp = _closure(facets)
    dim = max((len(s) - 1 for s in simp), default=-1)
    if D is None:
        D = dim + 1
    levels = []
    for n in range(D + 1):
        lev = []
        for s in sorted(simp, key=lambda s: (len(s), [pos[v] for v in s])):
            if len(s) <= n + 1:
                for t in combinations_with_replacement(s, n + 1):
                    if len(set(t)) == len(s):
                        lev.append(t)
        levels.append(lev)
    faces = [[]] + [[{x: x[:i] + x[i + 1:] for x in levels[n]} for i in range(n + 1)]
                    for n in range(1, D + 1)]
    degens = [[{x: x[:i + 1] + x[i:] for x in levels[n]} for i in range(n + 1)]
              for n in range(D)]
    nondeg = [[x for x in lev if len(set(x)) == len(x)] for lev in levels]
    return SimplicialSetModel(levels, faces, degens, nondeg, name=name)


def point(D: int = 1) -> SimplicialSetModel:
    return from_complex([("*",)], D=D, name="point")


def discrete(points, D: int = 1) -> SimplicialSetModel:
    return from_complex([(p,) for p in points], vertices=list(points), D=D, name="discrete")


def triangulated_circle(D: int = 2) -> SimplicialSetModel:
    """Boundary of a triangle: vertices 0, 1, 2 and edges 01, 12, 02."""
    return from_complex([(0, 1), (1, 2), (0, 2)], vertices=[0, 1, 2], D=D, name="circle")


def disjoint_union(parts: list[tuple], D: int | None = None) -> SimplicialSetModel:
    """Union of ``(label, model)`` pairs; keys become ``(label, key)``."""
    if D is None:
        D = max((m.D for _, m in parts), default=0)
    levels = [[] for _ in range(D + 1)]
    nondeg = [[] for _ in range(D + 1)]
    faces = [[]] + [[{} for _ in range(n + 1)] for n in range(1, D + 1)]
    degens = [[{} for _ in range(n + 1)] for n in range(D)]
    for lab, m in parts:
        if m.D < D:
            raise ValueError("component has too few levels")
        for n in range(D + 1):
            levels[n].extend((lab, x) for x in m.levels[n])
            nondeg[n].extend((lab, x) for x in m.nondeg[n])
            if n:
                for i in range(n + 1):
                    f = m.faces[n][i]
                    faces[n][i].update({(lab, x): (lab, y) for x, y in f.items()})
            if n < D:
                for i in range(n + 1):
                    d = m.degens[n][i]
                    degens[n][i].update({(lab, x): (lab, y) for x, y in d.items()})
    return SimplicialSetModel(levels, faces, degens, nondeg)


def sub_model(base: SimplicialSetModel, keep: set, name: str = "") -> SimplicialSetModel:
    """Sub-simplicial set on the keys in ``keep`` (must be closed)."""
    D = base.D
    levels = [[x for x in base.levels[n] if x in keep] for n in range(D + 1)]
    faces = [[]] + [[{x: base.faces[n][i][x] for x in levels[n]} for i in range(n + 1)]
                    for n in range(1, D + 1)]
    degens = [[{x: base.degens[n][i][x] for x in levels[n]} for i in range(n + 1)]
              for n in range(D)]
    nondeg = [[x for x in base.nondeg[n] if x in keep] for n in range(D + 1)]
    return SimplicialSetModel(levels, faces, degens, nondeg, name=name)


def vertex_map(src: SimplicialSetModel, dst: SimplicialSetModel, f) -> SimplicialMap:
    """Extend a vertex map between complex-built models (tuple keys).

    Raises ValueError if some simplex is not sent to a simplex in order.
    """
    get = f.__getitem__ if isinstance(f, dict) else f
    maps = []
    for n in range(src.D + 1):
        dl = dst._levelset(n)
        m = {}
        for x in src.levels[n]:
            y = tuple(get(v) for v in x)
            if y not in dl:
                raise ValueError(f"vertex map is not an ordered simplicial map at {x!r}")
            m[x] = y
        maps.append(m)
    return SimplicialMap(src, dst, maps)
