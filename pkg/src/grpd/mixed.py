"""Complexes whose degree-m term is Z^a + Q^b.

The differential is block lower triangular: the integral part may map into
both parts, the rational part only into the rational part. Cohomology comes
from the short exact sequence 0 -> M_Q -> M -> M_Z -> 0. The divisible piece
is H^m(M_Q) modulo the connecting image of H^{m-1}(M_Z); the reduced piece is
the kernel of the connecting map on H^m(M_Z). Divisible groups are
injective, so these two pieces determine the group up to isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .complexes import CohomologyGroup, FreeComplex, MixedGroup, cohomology, graded

__all__ = ["MixedComplex", "MixedCohomology", "mixed_cohomology", "check_exact", "ExactnessReport"]


@dataclass
class MixedComplex:
    """A FreeComplex whose first ``zdims[m]`` coordinates are integral."""

    cx: FreeComplex
    zdims: dict

    @classmethod
    def integral(cls, c: FreeComplex) -> "MixedComplex":
        return cls(c, {k: c.n(k) for k in c.dims})

    @classmethod
    def rational(cls, c: FreeComplex) -> "MixedComplex":
        return cls(c, {k: 0 for k in c.dims})

    def a(self, m: int) -> int:
        return self.zdims.get(m, 0)

    def b(self, m: int) -> int:
        return self.cx.n(m) - self.a(m)

    def blocks(self, m: int):
        """(Dzz, Dqz, Dqq) of the differential out of degree m."""
        d = self.cx.d(m)
        a, a1 = self.a(m), self.a(m + 1)
        return d[:a1, :a], d[a1:, :a], d[a1:, a:]

    def check(self) -> bool:
        for m in self.cx.dims:
            d = self.cx.d(m)
            a, a1 = self.a(m), self.a(m + 1)
            if any(x != 0 for x in d[:a1, a:].flat):
                return False
            if any(Fraction(x).denominator != 1 for x in d[:, :a].flat):
                return False
        return True

    def z_part(self) -> FreeComplex:
        dims = {k: self.a(k) for k in self.cx.dims}
        diffs = {k: la.imat(self.blocks(k)[0], self.blocks(k)[0].shape) for k in self.cx.dims
                 if k + 1 in self.cx.dims}
        return FreeComplex(dims, diffs, "Z", self.cx.valid_max)

    def q_part(self) -> FreeComplex:
        dims = {k: self.b(k) for k in self.cx.dims}
        diffs = {k: la.qmat(self.blocks(k)[2], self.blocks(k)[2].shape) for k in self.cx.dims
                 if k + 1 in self.cx.dims}
        return FreeComplex(dims, diffs, "Q", self.cx.valid_max)

    def cocycle_generators(self, m: int) -> tuple[list, list]:
        """(lattice, space) generators of the cocycles in degree m."""
        d = la.qmat(self.cx.d(m), self.cx.d(m).shape)
        a = self.a(m)
        return la.mixed_kernel(d[:, :a], d[:, a:])

    def coboundary_solve(self, m: int, v):
        """Mixed preimage of ``v`` under the differential into degree m, or None."""
        if self.cx.n(m - 1) == 0:
            return None if any(x != 0 for x in v) else (la.qvec([]), la.qvec([]))
        d = la.qmat(self.cx.d(m - 1), self.cx.d(m - 1).shape)
        a = self.a(m - 1)
        return la.solve_mixed(d[:, :a], d[:, a:], v)

    def is_coboundary(self, m: int, v) -> bool:
        return self.coboundary_solve(m, v) is not None

    def is_cocycle(self, m: int, v) -> bool:
        return all(x == 0 for x in self.cx.d(m) @ la.qvec(v)) if self.cx.n(m + 1) else True


@dataclass
class MixedCohomology:
    degree: int
    group: MixedGroup
    space_gens: list = field(default_factory=list)  # Q-families (full vectors)
    lattice: list = field(default_factory=list)  # connecting image, H(M_Q) coordinates
    reduced_gens: list = field(default_factory=list)  # (order or 0, full vector)
    HZ: CohomologyGroup | None = None
    HQ: CohomologyGroup | None = None
    kernel_basis: np.ndarray | None = None  # free coords of reduced free gens

    def reduced_coords(self, mc: MixedComplex, v) -> tuple[tuple, tuple]:
        """Coordinates of a cocycle in the reduced quotient.

        Torsion coordinates are taken mod their orders; free coordinates are
        in the basis of ``kernel_basis``.
        """
        a = mc.a(self.degree)
        z = la.qvec(v)[:a]
        if self.HZ is None or a == 0:
            return (), ()
        tors, free = self.HZ.coords(z)
        if self.kernel_basis is not None and self.kernel_basis.shape[1]:
            y = la.solve(la.qmat(self.kernel_basis, self.kernel_basis.shape), la.qvec(free))
            if y is None:
                raise ValueError("class does not lie in the reduced quotient")
            free = tuple(int(x) for x in y)
        else:
            free = ()
        return tors, free


def mixed_cohomology(mc: MixedComplex, m: int) -> MixedCohomology:
    """H^m of a mixed complex with its graded pieces and generators."""
    mc.cx.check_degree(m)
    mz, mq = mc.z_part(), mc.q_part()
    a, b = mc.a(m), mc.b(m)
    n1 = mc.cx.n(m + 1)
    HQ = cohomology(mq, m)
    c = HQ.free_rank
    # connecting image of H^{m-1}(M_Z)
    lattice = []
    if mc.a(m - 1):
        HZm1 = cohomology(mz, m - 1)
        _, dqz_prev, _ = mc.blocks(m - 1)
        for g in HZm1.generators[len(HZm1.torsion):]:
            lattice.append(HQ.coords(la.qmat(dqz_prev, dqz_prev.shape) @ la.qvec(g))[1])
    q, qz = la.quotient_invariants(c, lattice, [])
    space_gens = []
    for g in HQ.generators:
        v = np.concatenate([la.qvec([0] * a), la.qvec(g)])
        space_gens.append(v)
    tors, z = (), 0
    reduced = []
    HZ = None
    kb = None
    if a:
        HZ = cohomology(mz, m)
        _, dqz, dqq = mc.blocks(m)
        dqz = la.qmat(dqz, dqz.shape)
        dqq = la.qmat(dqq, dqq.shape)
        nt = len(HZ.torsion)
        free = HZ.generators[nt:]
        if n1 - mc.a(m + 1):
            N = la.left_nullspace(dqq) if b else la.eye(n1 - mc.a(m + 1))
        else:
            N = la.zeros(0, 0)
        if free and N.shape[0]:
            W = la.qmat(free, (len(free), a)).T
            delta = N @ (dqz @ W)
            kb = la.integer_kernel(delta)
        else:
            kb = la.eye(len(free), "Z")
        tors = HZ.torsion
        z = kb.shape[1]

        def lift(w):
            rhs = -(dqz @ la.qvec(w))
            if b:
                y = la.solve(dqq, rhs) if dqq.shape[0] else la.qvec([0] * b)
            else:
                y = la.qvec([])
            if y is None:
                raise AssertionError("connecting map does not vanish on a kernel class")
            return np.concatenate([la.qvec(w), y])

        for i, d in enumerate(tors):
            reduced.append((d, lift(HZ.generators[i])))
        for j in range(z):
            w = sum((kb[i, j] * la.qvec(free[i]) for i in range(len(free))), la.qvec([0] * a))
            reduced.append((0, lift(w)))
    grp = graded((q, qz), (tuple(tors), z))
    grp.generators = ([{"kind": "Q", "vector": [str(x) for x in g]} for g in space_gens] +
                      [{"kind": f"Z/{d}" if d else "Z", "vector": [str(x) for x in v]}
                       for d, v in reduced])
    return MixedCohomology(m, grp, space_gens, lattice, reduced, HZ, HQ, kb)


# ---------------------------------------------------------------- exactness


@dataclass
class ExactnessReport:
    node: str
    composite_zero: bool
    kernel_in_image: bool
    witness: object = None

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.kernel_in_image

    def to_json(self) -> dict:
        return {"node": self.node, "exact": self.exact, "composite_zero": self.composite_zero,
                "kernel_in_image": self.kernel_in_image,
                "witness": None if self.witness is None else [str(x) for x in self.witness]}


def check_exact(A: MixedComplex, ma: int, alpha, N: MixedComplex, mn: int, beta,
                C: MixedComplex, mc_: int, node: str = "") -> ExactnessReport:
    """Exactness of H^ma(A) -alpha-> H^mn(N) -beta-> H^mc(C) at the middle.

    ``alpha`` and ``beta`` are chain-level matrices. Works over the mixed
    coefficients exactly: rational families are checked rationally and
    lattice generators with integral side conditions.
    """
    alpha = la.qmat(alpha, alpha.shape)
    beta = la.qmat(beta, beta.shape)
    latA, spA = A.cocycle_generators(ma)
    zero = True
    wit = None
    for g in latA + spA:
        if not C.is_coboundary(mc_, beta @ (alpha @ g)):
            zero, wit = False, g
            break
    # kernel of beta at cocycle level
    dN = la.qmat(N.cx.d(mn), N.cx.d(mn).shape)
    nn, an = N.cx.n(mn), N.a(mn)
    ncp = C.cx.n(mc_ - 1)
    dC = la.qmat(C.cx.d(mc_ - 1), C.cx.d(mc_ - 1).shape) if ncp else la.zeros(C.cx.n(mc_), 0)
    acp = C.a(mc_ - 1) if ncp else 0
    rows_top = np.concatenate([dN, la.zeros(dN.shape[0], ncp)], axis=1)
    rows_bot = np.concatenate([beta, -dC], axis=1)
    full = np.concatenate([rows_top, rows_bot], axis=0)
    zcols = list(range(an)) + [nn + j for j in range(acp)]
    qcols = [j for j in range(nn + ncp) if j not in set(zcols)]
    lat, sp = la.mixed_kernel(full[:, zcols], full[:, qcols])

    def unscatter(v):
        out = la.qvec([0] * (nn + ncp))
        for pos, j in enumerate(zcols + qcols):
            out[j] = v[pos]
        return out[:nn]

    lat = [unscatter(v) for v in lat]
    sp = [unscatter(v) for v in sp]
    # image: alpha(cocycles of A) + coboundaries of N
    imgs_lat = [alpha @ g for g in latA]
    imgs_sp = [alpha @ g for g in spA]
    npv = N.cx.n(mn - 1)
    dNp = la.qmat(N.cx.d(mn - 1), N.cx.d(mn - 1).shape) if npv else la.zeros(nn, 0)
    anp = N.a(mn - 1) if npv else 0
    Lz = [dNp[:, j] for j in range(anp)] + imgs_lat
    Lq = [dNp[:, j] for j in range(anp, npv)] + imgs_sp
    az = la.qmat(Lz, (len(Lz), nn)).T if Lz else la.zeros(nn, 0)
    aq = la.qmat(Lq, (len(Lq), nn)).T if Lq else la.zeros(nn, 0)
    inside = True
    for v in sp:
        if any(x != 0 for x in v) and (aq.shape[1] == 0 or la.solve(aq, v) is None):
            inside, wit = False, v
            break
    if inside:
        for v in lat:
            if la.solve_mixed(az, aq, v) is None:
                inside, wit = False, v
                break
    return ExactnessReport(node, zero, inside, wit)
