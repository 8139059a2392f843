"""The double complex A^{r,s} of a nerve diagram and its total complex.

A^{r,s} has as basis the s-simplices of X_r that are nondegenerate both
internally and in the nerve direction. delta' = sum_i (-1)^i eps_i^* and
delta'' is the internal coboundary; the total differential on A^{r,s} is
D = delta' + (-1)^r delta''. Cochains are coordinate vectors in the total
basis, so "forms" and "cochains" share one model: the rational and integral
complexes have identical matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg as la
from .complexes import ChainMap, Filtration, FreeComplex
from .nerve import NerveDiagram, NerveMap

__all__ = [
    "CoefficientSpec",
    "DoubleComplex",
    "TotalCochain",
    "a_double_complex",
    "total_complex",
    "cup",
    "pullback_map",
    "column_filtration",
]


@dataclass(frozen=True)
class CoefficientSpec:
    ring: str = "Integers"  # Integers | Rationals | RationalsModOne
    lattice: str = "Integers"  # Zero | Integers | Rationals

    def __post_init__(self):
        if self.ring not in ("Integers", "Rationals", "RationalsModOne"):
            raise ValueError(f"unknown ring {self.ring}")
        if self.lattice not in ("Zero", "Integers", "Rationals"):
            raise ValueError(f"unknown lattice {self.lattice}")
        if self.ring == "RationalsModOne" and self.lattice != "Integers":
            raise ValueError("rationals mod one needs the integer lattice")

    @property
    def short(self) -> str:
        return {"Integers": "Z", "Rationals": "Q", "RationalsModOne": "Q/Z"}[self.ring]


class DoubleComplex:
    """Bases and both differentials of A^{r,s}, 0 <= r <= R, 0 <= s <= S."""

    def __init__(self, n: NerveDiagram, coeff: CoefficientSpec | None = None):
        self.nerve = n
        self.coeff = coeff or CoefficientSpec()
        self.R = n.R
        self.S = max(0, min(x.D for x in n.X) - 1)
        self.basis: dict = {}
        self.index: dict = {}
        for r in range(self.R + 1):
            deg = n.rdeg[r]
            X = n.X[r]
            for s in range(self.S + 2):
                if s > X.D:
                    b = []
                else:
                    b = [x for x in X.nondeg[s] if x not in deg]
                self.basis[(r, s)] = b
                self.index[(r, s)] = {x: i for i, x in enumerate(b)}
        self._dp: dict = {}
        self._dpp: dict = {}

    def dim(self, r: int, s: int) -> int:
        return len(self.basis.get((r, s), ()))

    def lookup(self, r: int, s: int, key) -> int:
        """Position of ``key`` in A^{r,s}, or -1 if it is degenerate."""
        return self.index.get((r, s), {}).get(key, -1)

    def dprime(self, r: int, s: int) -> np.ndarray:
        """delta': A^{r,s} -> A^{r+1,s}."""
        if (r, s) not in self._dp:
            rows, cols = self.dim(r + 1, s), self.dim(r, s)
            m = la.zeros(rows, cols, "Z")
            if r + 1 <= self.R:
                for a, y in enumerate(self.basis[(r + 1, s)]):
                    for i, e in enumerate(self.nerve.eps[r + 1]):
                        j = self.lookup(r, s, e.maps[s][y])
                        if j >= 0:
                            m[a, j] += -1 if i % 2 else 1
            self._dp[(r, s)] = m
        return self._dp[(r, s)]

    def ddprime(self, r: int, s: int) -> np.ndarray:
        """delta'': A^{r,s} -> A^{r,s+1}."""
        if (r, s) not in self._dpp:
            rows, cols = self.dim(r, s + 1), self.dim(r, s)
            m = la.zeros(rows, cols, "Z")
            X = self.nerve.X[r]
            for a, y in enumerate(self.basis.get((r, s + 1), [])):
                for i in range(s + 2):
                    j = self.lookup(r, s, X.faces[s + 1][i][y])
                    if j >= 0:
                        m[a, j] += -1 if i % 2 else 1
            self._dpp[(r, s)] = m
        return self._dpp[(r, s)]

    def check(self) -> dict:
        """Exact checks of delta'^2 = 0, delta''^2 = 0 and commutation."""
        out = {"dp2": True, "dpp2": True, "commute": True}
        for r in range(self.R + 1):
            for s in range(self.S + 1):
                if r + 2 <= self.R and np.any(self.dprime(r + 1, s) @ self.dprime(r, s) != 0):
                    out["dp2"] = False
                if np.any(self.ddprime(r, s + 1) @ self.ddprime(r, s) != 0):
                    out["dpp2"] = False
                if r + 1 <= self.R:
                    a = self.dprime(r, s + 1) @ self.ddprime(r, s)
                    b = self.ddprime(r + 1, s) @ self.dprime(r, s)
                    if np.any(a != b):
                        out["commute"] = False
        return out


def a_double_complex(n: NerveDiagram, coeff: CoefficientSpec | None = None) -> DoubleComplex:
    return DoubleComplex(n, coeff)


def total_complex(dc: DoubleComplex, ring: str | None = None) -> FreeComplex:
    """Totalization with D = delta' + (-1)^r delta'' on A^{r,s}.

    Degrees run 0..R+S; cohomology is exact for degrees <= R-1 and the
    complex records that window in ``valid_max``.
    """
    ring = ring or ("Q" if dc.coeff.ring == "Rationals" else "Z")
    top = dc.R + dc.S
    blocks = {}
    dims = {}
    for k in range(top + 1):
        off = 0
        bl = []
        for r in range(0, min(k, dc.R) + 1):
            s = k - r
            if s > dc.S:
                continue
            n = dc.dim(r, s)
            bl.append((r, s, off, n))
            off += n
        blocks[k] = bl
        dims[k] = off
    diffs = {}
    for k in range(top):
        m = la.zeros(dims[k + 1], dims[k], "Z")
        tgt = {(r, s): (o, n) for r, s, o, n in blocks[k + 1]}
        for r, s, o, n in blocks[k]:
            if not n:
                continue
            if (r + 1, s) in tgt:
                o2, n2 = tgt[(r + 1, s)]
                if n2:
                    m[o2:o2 + n2, o:o + n] += dc.dprime(r, s)
            if (r, s + 1) in tgt:
                o2, n2 = tgt[(r, s + 1)]
                if n2:
                    m[o2:o2 + n2, o:o + n] += (-1) ** r * dc.ddprime(r, s)
        diffs[k] = m if ring == "Z" else la.qmat(m, m.shape)
    tc = FreeComplex(dims, diffs, ring, valid_max=dc.R - 1, blocks=blocks,
                     name=f"Tot({dc.nerve.name})")
    tc.double = dc
    return tc


def block(tc: FreeComplex, k: int, r: int):
    for rr, s, o, n in tc.blocks.get(k, []):
        if rr == r:
            return s, o, n
    return None


@dataclass
class TotalCochain:
    """A coordinate vector of total degree ``degree`` in ``complex``."""

    complex: FreeComplex
    degree: int
    vec: np.ndarray

    def component(self, r: int) -> np.ndarray:
        b = block(self.complex, self.degree, r)
        if b is None:
            return np.array([], dtype=object)
        s, o, n = b
        return self.vec[o:o + n]

    def __add__(self, other):
        return TotalCochain(self.complex, self.degree, self.vec + other.vec)

    def __sub__(self, other):
        return TotalCochain(self.complex, self.degree, self.vec - other.vec)

    def __neg__(self):
        return TotalCochain(self.complex, self.degree, -self.vec)

    def scale(self, q):
        return TotalCochain(self.complex, self.degree, self.vec * Fraction(q))

    def d(self) -> "TotalCochain":
        m = self.complex.d(self.degree)
        return TotalCochain(self.complex, self.degree + 1, m @ self.vec if len(self.vec) else
                            la.qvec([0] * m.shape[0]))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.vec)


class CupTable:
    """Precomputed front/back index pairs for the Cech-Alexander-Whitney cup."""

    def __init__(self, tc: FreeComplex):
        self.tc = tc
        self.dc: DoubleComplex = tc.double
        self._cache = {}

    def pairs(self, p: int, q: int, pp: int, qq: int):
        key = (p, q, pp, qq)
        if key in self._cache:
            return self._cache[key]
        dc = self.dc
        n = dc.nerve
        r, s = p + pp, q + qq
        out = []
        if r <= dc.R and s <= dc.S:
            for a, y in enumerate(dc.basis[(r, s)]):
                f = y
                for m in range(r, p, -1):  # keep the first p arrows
                    f = n.eps[m][m].maps[s][f]
                b = y
                for m in range(r, pp, -1):  # drop the first p arrows
                    b = n.eps[m][0].maps[s][b]
                Xp, Xpp = n.X[p], n.X[pp]
                f = Xp.front(f, s, q)
                b = Xpp.back(b, s, qq)
                i = dc.lookup(p, q, f)
                j = dc.lookup(pp, qq, b)
                if i >= 0 and j >= 0:
                    out.append((a, i, j))
        self._cache[key] = out
        return out


def _cup_table(tc: FreeComplex) -> CupTable:
    t = getattr(tc, "_cup", None)
    if t is None:
        t = CupTable(tc)
        tc._cup = t
    return t


def cup_vec(tc: FreeComplex, a, ka: int, b, kb: int) -> np.ndarray:
    """Cup product of coordinate vectors of degrees ka, kb.

    For a in A^{p,q} and b in A^{p',q'} the A^{p+p',q+q'} component is
    (-1)^{q p'} a(front) b(back): front keeps the first p arrows and the
    first q internal vertices, back the last p' arrows and last q' vertices.
    """
    k = ka + kb
    out = np.empty(tc.n(k), dtype=object)
    out.fill(Fraction(0))
    if not len(out):
        return out
    table = _cup_table(tc)
    tgt = {(r, s): o for r, s, o, n in tc.blocks.get(k, [])}
    for p, q, oa, na in tc.blocks.get(ka, []):
        if not na:
            continue
        ablk = a[oa:oa + na]
        if all(x == 0 for x in ablk):
            continue
        for pp, qq, ob, nb in tc.blocks.get(kb, []):
            if not nb or (p + pp, q + qq) not in tgt:
                continue
            bblk = b[ob:ob + nb]
            sign = -1 if (q * pp) % 2 else 1
            o = tgt[(p + pp, q + qq)]
            for t, i, j in table.pairs(p, q, pp, qq):
                x = ablk[i]
                if x:
                    y = bblk[j]
                    if y:
                        out[o + t] += sign * x * y
    return out


def cup(a: TotalCochain, b: TotalCochain) -> TotalCochain:
    if a.complex is not b.complex:
        raise ValueError("cochains live on different complexes")
    return TotalCochain(a.complex, a.degree + b.degree,
                        cup_vec(a.complex, a.vec, a.degree, b.vec, b.degree))


def pullback_map(f: NerveMap, src_tc: FreeComplex, dst_tc: FreeComplex) -> ChainMap:
    """Cochain map f^*: Tot(dst) -> Tot(src) induced by a nerve map."""
    sdc, ddc = src_tc.double, dst_tc.double
    mats = {}
    for k in range(src_tc.lo, src_tc.hi + 1):
        m = la.zeros(src_tc.n(k), dst_tc.n(k), "Z")
        dblocks = {(r, s): o for r, s, o, n in dst_tc.blocks.get(k, [])}
        for r, s, o, n in src_tc.blocks.get(k, []):
            if (r, s) not in dblocks or r > f.dst.R:
                continue
            o2 = dblocks[(r, s)]
            mp = f.maps[r].maps[s]
            for a, y in enumerate(sdc.basis[(r, s)]):
                j = ddc.lookup(r, s, mp[y])
                if j >= 0:
                    m[o + a, o2 + j] = 1
        mats[k] = m
    return ChainMap(dst_tc, src_tc, mats)


def column_filtration() -> Filtration:
    """F^r = sum over p >= r of A^{p,*}; coordinate subsets of the total basis."""

    def coords(c, r, k):
        out = []
        for p, s, o, n in c.blocks.get(k, []):
            if p >= r:
                out.extend(range(o, o + n))
        return out

    return Filtration("column", coord_fn=coords)
