"""Cochain complexes of free Z- or Q-modules with exact arithmetic.

A complex lives in degrees ``lo..hi`` with ``dims[k]`` basis vectors in
degree k and differential ``d(k)`` of shape ``(dims[k+1], dims[k])``.
Cones use the convention cone(f)^n = A^n + B^{n-1}, d(a, b) = (da, f(a) - db).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la

__all__ = [
    "CutoffError",
    "FiltrationError",
    "FreeComplex",
    "ChainMap",
    "CohomologyGroup",
    "MixedGroup",
    "Filtration",
    "cohomology",
    "cohomology_invariants",
    "mapping_cone",
    "truncate",
    "filtration_pieces",
    "induced_map",
    "qz_cohomology",
    "bete_filtration",
    "coordinate_filtration",
    "span_filtration",
    "zero_complex",
]


class CutoffError(ValueError):
    """Requested degree lies outside the window where results are exact."""


class FiltrationError(ValueError):
    pass


def _mat(m, rows, cols):
    if m is None:
        return la.zeros(rows, cols, "Z")
    return m


@dataclass
class FreeComplex:
    dims: dict
    diffs: dict
    ring: str = "Z"
    valid_max: int | None = None
    blocks: dict = field(default_factory=dict)
    name: str = ""

    @property
    def lo(self) -> int:
        return min(self.dims) if self.dims else 0

    @property
    def hi(self) -> int:
        return max(self.dims) if self.dims else -1

    def n(self, k: int) -> int:
        return self.dims.get(k, 0)

    def d(self, k: int) -> np.ndarray:
        m = self.diffs.get(k)
        if m is None:
            z = la.zeros(self.n(k + 1), self.n(k), self.ring)
            return z
        return m

    def check_degree(self, k: int) -> None:
        if self.valid_max is not None and k > self.valid_max:
            raise CutoffError(f"degree {k} exceeds the exact window (<= {self.valid_max}); "
                              "raise the cutoff")

    def is_complex(self) -> bool:
        for k in range(self.lo, self.hi):
            p = self.d(k + 1) @ self.d(k) if self.n(k) and self.n(k + 2) else None
            if p is not None and any(x != 0 for x in p.flat):
                return False
        return True

    def over_Q(self) -> "FreeComplex":
        return FreeComplex(dict(self.dims), {k: la.qmat(m, m.shape) for k, m in self.diffs.items()},
                           "Q", self.valid_max, dict(self.blocks), self.name)

    def to_json(self) -> dict:
        return {"ring": self.ring, "dims": {str(k): v for k, v in sorted(self.dims.items())},
                "differentials": {str(k): [[str(x) for x in row] for row in m]
                                  for k, m in sorted(self.diffs.items())}}


def zero_complex(ring: str = "Z") -> FreeComplex:
    return FreeComplex({}, {}, ring)


@dataclass
class ChainMap:
    src: FreeComplex
    dst: FreeComplex
    mats: dict

    def f(self, k: int) -> np.ndarray:
        m = self.mats.get(k)
        if m is None:
            return la.zeros(self.dst.n(k), self.src.n(k), self.dst.ring)
        return m

    def check(self) -> tuple[int, int] | None:
        """First (degree, column) where d f != f d, or None."""
        lo = min(self.src.lo, self.dst.lo)
        hi = max(self.src.hi, self.dst.hi)
        for k in range(lo, hi + 1):
            if self.src.n(k) == 0 or self.dst.n(k + 1) == 0:
                continue
            a = self.dst.d(k) @ self.f(k)
            b = self.f(k + 1) @ self.src.d(k)
            diff = np.nonzero(np.array([[x != y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)],
                                       dtype=bool))
            if len(diff[0]):
                return k, int(diff[1][0])
        return None


# ---------------------------------------------------------------- cohomology


@dataclass
class CohomologyGroup:
    """H^k with generator cocycles.

    Over Z: ``torsion`` lists divisors > 1 and the first ``len(torsion)``
    generators are the torsion generators, the rest free. Over Q only
    ``free_rank`` and ``generators`` are used.
    """

    degree: int
    ring: str
    free_rank: int
    torsion: tuple
    generators: list = field(default_factory=list)
    _kernel: np.ndarray | None = None
    _U: np.ndarray | None = None
    _divs: list | None = None
    _boundary: np.ndarray | None = None

    @property
    def order_label(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append(("Q" if self.ring == "Q" else "Z") +
                         (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def coords(self, c) -> tuple[tuple, tuple]:
        """(torsion coordinates mod divisors, free coordinates) of a cocycle."""
        c = la.qvec(c)
        if self.ring == "Q":
            basis = np.concatenate([self._boundary, la.qmat(self.generators, (len(self.generators), len(c))).T]
                                   if self.generators else [self._boundary], axis=1)
            x = la.solve(basis, c)
            if x is None:
                raise ValueError("not a cocycle")
            return (), tuple(x[self._boundary.shape[1]:])
        x = la.solve(la.qmat(self._kernel, self._kernel.shape), c)
        if x is None:
            raise ValueError("not a cocycle")
        y = self._U @ x
        t = len(self.torsion)
        nt = len(self._divs) - t
        tors = tuple(int(y[nt + i]) % self.torsion[i] for i in range(t))
        free = tuple(int(v) for v in y[len(self._divs):])
        return tors, free

    def is_zero(self, c) -> bool:
        t, f = self.coords(c)
        return all(v == 0 for v in t) and all(v == 0 for v in f)

    def to_json(self) -> dict:
        return {"degree": self.degree, "free_rank": self.free_rank,
                "torsion": list(self.torsion), "label": self.order_label}


def _rank_any(m: np.ndarray, ring: str) -> int:
    if m.size == 0:
        return 0
    if ring == "Z":
        return len(la.elementary_divisors(m))
    return la.rank(m)


def cohomology_invariants(c: FreeComplex, k: int) -> tuple[int, tuple]:
    """(free rank, torsion divisors) of H^k without generators (sparse)."""
    c.check_degree(k)
    n = c.n(k)
    dk, dk1 = c.d(k), c.d(k - 1)
    if c.ring == "Q":
        return n - _rank_any(dk, "Q") - _rank_any(dk1, "Q"), ()
    divs = la.elementary_divisors(dk1) if dk1.size else []
    rk = len(la.elementary_divisors(dk)) if dk.size else 0
    return n - rk - len(divs), tuple(d for d in divs if d > 1)


def cohomology(c: FreeComplex, k: int, generators: bool = True) -> CohomologyGroup:
    """H^k of ``c``; with ``generators`` the dense Smith route is used."""
    c.check_degree(k)
    if not generators:
        f, t = cohomology_invariants(c, k)
        return CohomologyGroup(k, c.ring, f, t)
    n = c.n(k)
    A, B = c.d(k), c.d(k - 1)
    if c.ring == "Q":
        K = la.nullspace(la.qmat(A, A.shape)) if A.shape[0] else la.eye(n)
        Bq = la.qmat(B, B.shape)
        Bb = la.column_basis(Bq) if B.shape[1] else la.zeros(n, 0)
        gens = []
        cur = Bb
        for j in range(K.shape[1]):
            cand = np.concatenate([cur, K[:, j:j + 1]], axis=1)
            if la.rank(cand) > cur.shape[1]:
                cur = cand
                gens.append(K[:, j].copy())
        return CohomologyGroup(k, "Q", len(gens), (), gens, _boundary=Bb)
    K = la.integer_kernel(A) if A.shape[0] else la.eye(n, "Z")
    z = K.shape[1]
    if B.shape[1] and z:
        X = la.solve(la.qmat(K, K.shape), la.qmat(B, B.shape))
        X = la.imat(X, X.shape)
    else:
        X = la.zeros(z, 0, "Z")
    s = la.smith(X) if X.shape[1] else la.SmithForm(X, la.eye(z, "Z"), la.eye(0, "Z"),
                                                     la.eye(z, "Z"), la.eye(0, "Z"))
    divs = s.divisors
    G = K @ s.Uinv
    tors_idx = [i for i, d in enumerate(divs) if d > 1]
    free_idx = list(range(len(divs), z))
    gens = [G[:, i] for i in tors_idx] + [G[:, i] for i in free_idx]
    return CohomologyGroup(k, "Z", len(free_idx), tuple(divs[i] for i in tors_idx), gens,
                           _kernel=K, _U=s.U, _divs=divs)


def induced_map(f: ChainMap, k: int, Hs: CohomologyGroup | None = None,
                Ht: CohomologyGroup | None = None) -> np.ndarray:
    """Matrix of H^k(f) in generator bases (columns: source generators).

    Over Z the rows are target torsion coordinates (mod divisors) then
    free coordinates.
    """
    Hs = Hs or cohomology(f.src, k)
    Ht = Ht or cohomology(f.dst, k)
    cols = []
    for g in Hs.generators:
        t, fr = Ht.coords(f.f(k) @ g)
        cols.append(list(t) + list(fr))
    rows = len(Ht.torsion) + Ht.free_rank
    out = np.empty((rows, len(cols)), dtype=object)
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            out[i, j] = v
    return out


# ---------------------------------------------------------------- constructions


def mapping_cone(f: ChainMap) -> tuple[FreeComplex, ChainMap, ChainMap]:
    """Cone of ``f: A -> B`` with the inclusion of B[-1] and projection to A.

    B[-1] carries the differential -d_B, so (0, b) -> (0, b) is a chain map.
    """
    bad = f.check()
    if bad is not None:
        raise ValueError(f"not a chain map: square fails in degree {bad[0]} at column {bad[1]}")
    A, B = f.src, f.dst
    ring = "Q" if "Q" in (A.ring, B.ring) else "Z"
    lo = min(A.lo, B.lo + 1)
    hi = max(A.hi, B.hi + 1)
    dims, diffs, shift_dims, shift_diffs = {}, {}, {}, {}
    for k in range(lo, hi + 1):
        dims[k] = A.n(k) + B.n(k - 1)
        shift_dims[k] = B.n(k - 1)
    for k in range(lo, hi):
        na, nb = A.n(k), B.n(k - 1)
        ma, mb = A.n(k + 1), B.n(k)
        m = la.zeros(ma + mb, na + nb, ring)
        m[:ma, :na] = A.d(k)
        m[ma:, :na] = f.f(k)
        m[ma:, na:] = -B.d(k - 1)
        diffs[k] = m
        shift_diffs[k] = -B.d(k - 1)
    vm = [x for x in (A.valid_max, None if B.valid_max is None else B.valid_max + 1) if x is not None]
    cone = FreeComplex(dims, diffs, ring, min(vm) if vm else None, name="cone")
    shifted = FreeComplex(shift_dims, shift_diffs, B.ring, None if B.valid_max is None else B.valid_max + 1)
    inc = {}
    proj = {}
    for k in range(lo, hi + 1):
        na, nb = A.n(k), B.n(k - 1)
        i = la.zeros(na + nb, nb, ring)
        for j in range(nb):
            i[na + j, j] = 1
        inc[k] = i
        p = la.zeros(na, na + nb, ring)
        for j in range(na):
            p[j, j] = 1
        proj[k] = p
    return cone, ChainMap(shifted, cone, inc), ChainMap(cone, A, proj)


def truncate(c: FreeComplex, mode: str, p: int) -> FreeComplex:
    """``mode='ge'`` keeps degrees >= p (subcomplex), ``'lt'`` keeps < p (quotient)."""
    keep = (lambda k: k >= p) if mode == "ge" else (lambda k: k < p)
    dims = {k: (v if keep(k) else 0) for k, v in c.dims.items()}
    diffs = {}
    for k, m in c.diffs.items():
        if keep(k) and keep(k + 1):
            diffs[k] = m
    return FreeComplex(dims, diffs, c.ring, c.valid_max, dict(c.blocks), c.name)


# ---------------------------------------------------------------- filtrations


@dataclass
class Filtration:
    """``span(r, k)`` returns a matrix whose columns span F^r C^k.

    ``coords(r, k)`` may instead give a list of basis coordinates, in which
    case pieces stay integral.
    """

    name: str
    span_fn: object = None
    coord_fn: object = None

    def coords(self, c: FreeComplex, r: int, k: int):
        return None if self.coord_fn is None else self.coord_fn(c, r, k)

    def span(self, c: FreeComplex, r: int, k: int) -> np.ndarray:
        idx = self.coords(c, r, k)
        n = c.n(k)
        if idx is not None:
            m = la.zeros(n, len(idx), c.ring)
            for j, i in enumerate(idx):
                m[i, j] = 1
            return m
        return self.span_fn(c, r, k)


def bete_filtration() -> Filtration:
    """F^r C^k = C^k for k >= r, zero below."""
    return Filtration("bete", coord_fn=lambda c, r, k: list(range(c.n(k))) if k >= r else [])


def coordinate_filtration(name: str, fn) -> Filtration:
    return Filtration(name, coord_fn=fn)


def span_filtration(name: str, spans: dict) -> Filtration:
    """Explicit spans ``spans[(r, k)]``; missing r means the largest r below."""

    def fn(c, r, k):
        rs = sorted(rr for (rr, kk) in spans if kk == k and rr <= r)
        if not rs:
            return la.eye(c.n(k), c.ring)
        return spans[(rs[-1], k)]

    return Filtration(name, span_fn=fn)


def _check_stable(c: FreeComplex, spans: dict) -> None:
    for k, S in spans.items():
        if S.shape[1] == 0 or c.n(k + 1) == 0:
            continue
        img = c.d(k) @ S
        T = spans.get(k + 1)
        for j in range(img.shape[1]):
            v = img[:, j]
            if all(x == 0 for x in v):
                continue
            if T is None or T.shape[1] == 0 or la.solve(la.qmat(T, T.shape), v) is None:
                raise FiltrationError(f"F is not differential-stable: d of column {j} in degree {k} leaves F")


def filtration_pieces(c: FreeComplex, F: Filtration, r: int):
    """Return ``(sub, quotient, inclusion, projection)`` for F^r.

    Coordinate filtrations keep integral bases. General spans are treated
    over Q; the quotient basis is a complement of standard vectors.
    """
    degs = range(c.lo, c.hi + 1)
    coordinate = all(F.coords(c, r, k) is not None for k in degs)
    if coordinate:
        idx = {k: list(F.coords(c, r, k)) for k in degs}
        ring = c.ring
        spans = {k: F.span(c, r, k) for k in degs}
        _check_stable(c, spans)
        comp = {k: [i for i in range(c.n(k)) if i not in set(idx[k])] for k in degs}
        sub_d = {k: c.d(k)[np.ix_(idx[k + 1], idx[k])] if c.n(k + 1) else la.zeros(0, len(idx[k]), ring)
                 for k in degs if k + 1 in idx}
        quo_d = {k: c.d(k)[np.ix_(comp[k + 1], comp[k])] if c.n(k + 1) else la.zeros(0, len(comp[k]), ring)
                 for k in degs if k + 1 in comp}
        for k in list(sub_d):
            sub_d[k] = sub_d[k].reshape(len(idx[k + 1]), len(idx[k]))
            quo_d[k] = quo_d[k].reshape(len(comp[k + 1]), len(comp[k]))
        sub = FreeComplex({k: len(idx[k]) for k in degs}, sub_d, ring, c.valid_max, name="F")
        quo = FreeComplex({k: len(comp[k]) for k in degs}, quo_d, ring, c.valid_max, name="C/F")
        inc = ChainMap(sub, c, spans)
        proj = {}
        for k in degs:
            p = la.zeros(len(comp[k]), c.n(k), ring)
            for j, i in enumerate(comp[k]):
                p[j, i] = 1
            proj[k] = p
        return sub, quo, inc, ChainMap(c, quo, proj)
    spans = {k: la.column_basis(la.qmat(F.span(c, r, k), F.span(c, r, k).shape)) for k in degs}
    _check_stable(c, spans)
    P, Q = {}, {}
    for k in degs:
        S = spans[k]
        n = c.n(k)
        _, piv = la.rref(S.T) if S.shape[1] else (None, [])
        comp = [i for i in range(n) if i not in set(piv)]
        E = la.zeros(n, len(comp))
        for j, i in enumerate(comp):
            E[i, j] = Fraction(1)
        full = np.concatenate([S, E], axis=1)
        inv = la.solve(full, la.eye(n)) if n else la.zeros(0, 0)
        P[k] = inv[S.shape[1]:, :].reshape(len(comp), n)
        Q[k] = E
    sub_d, quo_d = {}, {}
    for k in degs:
        if k + 1 not in spans:
            continue
        dq = la.qmat(c.d(k), c.d(k).shape)
        S0, S1 = spans[k], spans[k + 1]
        if S0.shape[1] and S1.shape[1]:
            sub_d[k] = la.solve(S1, dq @ S0)
        else:
            sub_d[k] = la.zeros(S1.shape[1], S0.shape[1])
        quo_d[k] = (P[k + 1] @ dq @ Q[k]).reshape(P[k + 1].shape[0], Q[k].shape[1])
    sub = FreeComplex({k: spans[k].shape[1] for k in degs}, sub_d, "Q", c.valid_max, name="F")
    quo = FreeComplex({k: Q[k].shape[1] for k in degs}, quo_d, "Q", c.valid_max, name="C/F")
    return sub, quo, ChainMap(sub, c, spans), ChainMap(c, quo, P)


# ---------------------------------------------------------------- mixed groups


@dataclass
class MixedGroup:
    """An abelian group Q^q + (Q/Z)^qz + torsion + Z^z.

    Reported as associated-graded data of an exact sequence; the flag
    ``extension_resolved`` is true only when one graded piece vanishes.
    """

    q_rank: int = 0
    qz_rank: int = 0
    torsion: tuple = ()
    z_rank: int = 0
    extension_resolved: bool = True
    generators: list = field(default_factory=list)

    def invariants(self) -> tuple:
        return (self.q_rank, self.qz_rank, tuple(la.invariant_factors(self.torsion)), self.z_rank)

    def __add__(self, other: "MixedGroup") -> "MixedGroup":
        return MixedGroup(self.q_rank + other.q_rank, self.qz_rank + other.qz_rank,
                          la.invariant_factors(self.torsion + other.torsion),
                          self.z_rank + other.z_rank, False)

    def is_zero(self) -> bool:
        return not (self.q_rank or self.qz_rank or self.torsion or self.z_rank)

    def label(self) -> str:
        parts = []
        if self.q_rank:
            parts.append("Q" + (f"^{self.q_rank}" if self.q_rank > 1 else ""))
        if self.qz_rank:
            parts.append("(Q/Z)" + (f"^{self.qz_rank}" if self.qz_rank > 1 else ""))
        parts += [f"Z/{d}" for d in la.invariant_factors(self.torsion)]
        if self.z_rank:
            parts.append("Z" + (f"^{self.z_rank}" if self.z_rank > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"q_rank": self.q_rank, "qz_rank": self.qz_rank,
                "torsion": list(la.invariant_factors(self.torsion)), "z_rank": self.z_rank,
                "extension_resolved": self.extension_resolved,
                "generators": self.generators, "label": self.label()}


def graded(divisible: tuple[int, int], reduced: tuple[tuple, int], generators=None) -> MixedGroup:
    """Assemble from the divisible sub (q, qz) and the reduced quotient (torsion, z)."""
    q, qz = divisible
    tors, z = reduced
    sub_zero = q == 0 and qz == 0
    quo_zero = not tors and z == 0
    return MixedGroup(q, qz, tuple(la.invariant_factors(tors)), z, sub_zero or quo_zero,
                      generators or [])


def qz_cohomology(c: FreeComplex, k: int) -> MixedGroup:
    """H^k(c; Q/Z) from the Bockstein sequence of 0 -> Z -> Q -> Q/Z -> 0.

    The cokernel of H^k(Z) -> H^k(Q) gives the divisible piece and the
    kernel of H^{k+1}(Z) -> H^{k+1}(Q) the torsion piece.
    """
    if c.ring != "Z":
        raise ValueError("qz_cohomology needs an integer complex")
    for row in c.diffs.values():
        for x in row.flat:
            if Fraction(x).denominator != 1:
                raise ValueError("qz_cohomology needs an integer complex")
    c.check_degree(k + 1)
    HZ = cohomology(c, k)
    HQ = cohomology(c.over_Q(), k)
    lattice = [HQ.coords(g)[1] for g in HZ.generators[len(HZ.torsion):]]
    q, qz = la.quotient_invariants(HQ.free_rank, lattice, [])
    HZ1 = cohomology(c, k + 1)
    HQ1 = cohomology(c.over_Q(), k + 1)
    tors = []
    gens = []
    for g in HQ.generators:
        gens.append({"kind": "Q/Z", "lift": [str(x) for x in g]})
    for i, d in enumerate(HZ1.torsion):
        g = HZ1.generators[i]
        # the rational image of a torsion class vanishes; d * g = d(y) gives y/d
        if not HQ1.is_zero(g):
            continue
        y = la.solve_integer(la.qmat(c.d(k), c.d(k).shape), la.qvec(g) * d)
        tors.append(d)
        gens.append({"kind": f"Z/{d}", "lift": [str(Fraction(x) / d) for x in y]})
    return graded((q, qz), (tuple(tors), 0), gens)
