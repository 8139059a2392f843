"""Line bundles with connection on nerve diagrams and their characteristic classes.

A bundle is a differential cocycle (c, h, ω) on the total complex with
Dc = 0 and Dh = ω - c. Gauge transformations act by
(c, h) -> (c + Db, h - b + Dλ), which preserves Dh = ω - c. Characteristic
forms are the powers ω^k (Φ = c_1^k); the transgression cochain
v = Σ ω^i ∪ h ∪ c^{k-1-i} satisfies Dv = ω^k - c^k exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .cochains import block, cup_vec, pullback_map
from .complexes import (Filtration, FreeComplex, bete_filtration, cohomology,
                        filtration_pieces)
from .forms import PolySimplexForm, simplex_integrate
from .groupoid import ValidationReport
from .nerve import NerveMap
from .secondary import SecondaryQuery, b_cone, bk_cone, mh_group

__all__ = [
    "DifferentialCocycle",
    "Gauge",
    "ConnectionFamily",
    "MultiplicativeBundle",
    "BundleError",
    "make_bundle",
    "trivial_bundle",
    "validate_bundle",
    "bundle_invariants",
    "holonomy",
    "fundamental_cycle",
    "edge_cochain",
    "flat_circle_bundle",
    "random_bundle",
    "random_family",
    "theta_transgression",
    "stokes_check",
    "is_multiplicative",
    "iso_multiplicative",
    "transgression_cochain",
    "char_class_xi",
    "pullback_bundle",
    "pullback_multiplicative",
    "cup_power",
]


class BundleError(ValueError):
    pass


def _zero(n: int) -> np.ndarray:
    return la.qvec([0] * n)


def _D(tc: FreeComplex, k: int, v) -> np.ndarray:
    if tc.n(k + 1) == 0:
        return _zero(0)
    if tc.n(k) == 0:
        return _zero(tc.n(k + 1))
    return la.qmat(tc.d(k), tc.d(k).shape) @ la.qvec(v)


def _eq(u, v) -> bool:
    return len(u) == len(v) and all(x == y for x, y in zip(u, v))


def basis_label(tc: FreeComplex, k: int, idx: int):
    """(r, s, key) of the idx-th basis cochain of total degree k."""
    for r, s, o, n in tc.blocks.get(k, []):
        if o <= idx < o + n:
            return r, s, tc.double.basis[(r, s)][idx - o]
    return None


# ---------------------------------------------------------------- data


@dataclass
class DifferentialCocycle:
    tc: FreeComplex
    c: np.ndarray
    h: np.ndarray
    omega: np.ndarray
    declared_connection: bool | None = None

    @property
    def is_connection(self) -> bool:
        """All components of ω with r > 0 vanish."""
        for r, s, o, n in self.tc.blocks.get(2, []):
            if r > 0 and any(x != 0 for x in self.omega[o:o + n]):
                return False
        return True

    def to_json(self) -> dict:
        def sparse(v):
            return [[i, str(x)] for i, x in enumerate(v) if x != 0]
        return {"c": sparse(self.c), "h": sparse(self.h), "omega": sparse(self.omega),
                "connection": self.is_connection}


@dataclass
class Gauge:
    b: np.ndarray  # integral degree-1 cochain
    lam: np.ndarray  # rational degree-0 cochain

    def apply(self, d: DifferentialCocycle) -> DifferentialCocycle:
        tc = d.tc
        return DifferentialCocycle(tc, d.c + _D(tc, 1, self.b),
                                   d.h - la.qvec(self.b) + _D(tc, 0, self.lam), d.omega.copy())

    def relates(self, d: DifferentialCocycle, d2: DifferentialCocycle) -> bool:
        """Underlying bundles match: c' = c + Db."""
        return _eq(d2.c, d.c + _D(d.tc, 1, self.b))

    def pull_connection(self, d2: DifferentialCocycle) -> np.ndarray:
        """The connection of d2 transported back to the bundle c."""
        return d2.h + la.qvec(self.b) - _D(d2.tc, 0, self.lam)

    @classmethod
    def identity(cls, tc: FreeComplex) -> "Gauge":
        return cls(_zero(tc.n(1)), _zero(tc.n(0)))


def make_bundle(tc: FreeComplex, c, h) -> DifferentialCocycle:
    """The cocycle with curvature ω = Dh + c."""
    c, h = la.qvec(c), la.qvec(h)
    return DifferentialCocycle(tc, c, h, _D(tc, 1, h) + c)


def trivial_bundle(tc: FreeComplex) -> DifferentialCocycle:
    return DifferentialCocycle(tc, _zero(tc.n(2)), _zero(tc.n(1)), _zero(tc.n(2)))


def validate_bundle(d: DifferentialCocycle) -> ValidationReport:
    rep = ValidationReport()
    tc = d.tc
    for name, v, k in (("c", d.c, 2), ("h", d.h, 1), ("omega", d.omega, 2)):
        if len(v) != tc.n(k):
            rep.add(f"{name} has the wrong length", (len(v), tc.n(k)))
    if not rep.ok:
        return rep
    for i, x in enumerate(d.c):
        if Fraction(x).denominator != 1:
            rep.add("c is integral", (basis_label(tc, 2, i), x))
    for i, x in enumerate(_D(tc, 2, d.c)):
        if x != 0:
            rep.add("Dc = 0", (basis_label(tc, 3, i), x))
    for i, x in enumerate(_D(tc, 1, d.h) - (d.omega - d.c)):
        if x != 0:
            rep.add("Dh = omega - c", (basis_label(tc, 2, i), x))
    for i, x in enumerate(_D(tc, 2, d.omega)):
        if x != 0:
            rep.add("D omega = 0", (basis_label(tc, 3, i), x))
    if d.declared_connection is True and not d.is_connection:
        rep.add("connection flag", ("omega has components with r > 0",))
    return rep


def _require_valid(d: DifferentialCocycle) -> None:
    rep = validate_bundle(d)
    if not rep.ok:
        raise BundleError("; ".join(rep.messages()))


# ---------------------------------------------------------------- invariants


def _homology_complex(tc: FreeComplex, top: int) -> FreeComplex:
    """Chains in degrees 0..top as a cochain complex in degrees -top..0."""
    dims = {-k: tc.n(k) for k in range(top + 1)}
    diffs = {}
    for k in range(1, top + 1):
        d = tc.d(k - 1)
        diffs[-k] = la.imat(d.T, (tc.n(k - 1), tc.n(k))) if tc.n(k) and tc.n(k - 1) else \
            la.zeros(tc.n(k - 1), tc.n(k), "Z")
    return FreeComplex(dims, diffs, "Z")


def integral_cycles(tc: FreeComplex, k: int) -> np.ndarray:
    """Columns spanning the integral k-cycles."""
    if k == 0 or tc.n(k - 1) == 0:
        return la.eye(tc.n(k), "Z")
    return la.integer_kernel(la.qmat(tc.d(k - 1), tc.d(k - 1).shape).T)


def edge_cochain(tc: FreeComplex, label, simplex) -> np.ndarray:
    """Indicator of the internal edge ``simplex`` on the level-0 piece ``label``."""
    v = _zero(tc.n(1))
    b = block(tc, 1, 0)
    if b is None:
        raise KeyError("no internal edges")
    s, o, n = b
    for i, key in enumerate(tc.double.basis[(0, 1)]):
        if key == (label, tuple(simplex)):
            v[o + i] = 1
            return v
    raise KeyError(f"edge {simplex} not on piece {label}")


def fundamental_cycle(tc: FreeComplex, orient=None) -> np.ndarray:
    """Generator of H_1 = Z, signed to pair positively with ``orient``."""
    H = cohomology(_homology_complex(tc, 2), -1)
    if H.free_rank != 1:
        raise BundleError(f"H_1 has free rank {H.free_rank}, expected 1")
    z = la.qvec(H.generators[len(H.torsion)])
    if orient is not None:
        p = sum(a * b for a, b in zip(la.qvec(orient), z))
        if p == 0:
            raise BundleError("orientation cochain pairs to zero with the cycle")
        if p < 0:
            z = -z
    return z


def holonomy(d: DifferentialCocycle, z) -> Fraction:
    """h(z) mod 1 for an integral 1-cycle z."""
    z = la.qvec(z)
    if any(Fraction(x).denominator != 1 for x in z):
        raise BundleError("holonomy needs an integral cycle")
    if any(x != 0 for x in _D_T(d.tc, 0, z)):
        raise BundleError("z is not a cycle")
    return Fraction(sum(a * b for a, b in zip(d.h, z))) % 1


def _D_T(tc, k, z):
    if tc.n(k) == 0:
        return _zero(0)
    return la.qmat(tc.d(k), tc.d(k).shape).T @ la.qvec(z)


@dataclass
class BundleInvariants:
    chern: tuple  # (torsion coords, free coords) in H^2(Z)
    curvature: tuple  # coords in H^2(Q)
    holonomies: list  # h(z) mod 1 on a basis of integral 1-cycles
    flat: bool

    def to_json(self) -> dict:
        return {"chern_class": {"torsion": [int(x) for x in self.chern[0]],
                                "free": [int(x) for x in self.chern[1]]},
                "curvature_class": [str(x) for x in self.curvature],
                "holonomy_on_cycle_basis": [str(x) for x in self.holonomies],
                "flat": self.flat}


def bundle_invariants(d: DifferentialCocycle) -> BundleInvariants:
    _require_valid(d)
    tc = d.tc
    tc.check_degree(2)
    HZ = cohomology(tc, 2)
    HQ = cohomology(tc.over_Q(), 2)
    chern = HZ.coords(d.c)
    curv = HQ.coords(d.omega)[1]
    Z = integral_cycles(tc, 1)
    hol = [holonomy(d, Z[:, j]) for j in range(Z.shape[1])]
    return BundleInvariants(chern, tuple(curv), hol, all(x == 0 for x in d.omega))


# ---------------------------------------------------------------- random data


def _rand_q(rng: random.Random, num: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def _rand_vec(rng, n, integral=False, density=1.0):
    out = _zero(n)
    for i in range(n):
        if rng.random() < density:
            out[i] = Fraction(rng.randint(-3, 3)) if integral else _rand_q(rng)
    return out


def random_bundle(tc: FreeComplex, rng: random.Random, flat: bool = False) -> DifferentialCocycle:
    """A valid cocycle: c is an integral cocycle built from coboundaries and
    integral classes, h arbitrary (or ω = 0 when ``flat``)."""
    b = _rand_vec(rng, tc.n(1), integral=True)
    c = -_D(tc, 1, b)
    HZ = cohomology(tc, 2) if tc.n(2) else None
    if HZ is not None:
        for g in HZ.generators:
            c = c + la.qvec(g) * rng.randint(-2, 2)
    if flat:
        # need Dh = -c; only possible when c is a coboundary over Q
        sol = la.solve(la.qmat(tc.d(1), tc.d(1).shape), -c) if tc.n(1) else None
        if sol is None:
            c = -_D(tc, 1, b)
            sol = b
        h = la.qvec(sol) + _D(tc, 0, _rand_vec(rng, tc.n(0)))
        # flat directions: rational cocycles
        HQ1 = cohomology(tc.over_Q(), 1)
        for g in HQ1.generators:
            h = h + la.qvec(g) * _rand_q(rng)
        return DifferentialCocycle(tc, c, h, _zero(tc.n(2)))
    h = _rand_vec(rng, tc.n(1))
    return make_bundle(tc, c, h)


def flat_circle_bundle(tc: FreeComplex, value: Fraction, rng: random.Random | None = None,
                       edge=((0,), (0, 1))) -> tuple[DifferentialCocycle, np.ndarray]:
    """Flat bundle on a circle model whose holonomy around the loop is ``value``.

    The loop is oriented so that it crosses ``edge`` (label, simplex)
    positively; for the three-arc model this is the loop 0 -> 1 -> 2 -> 0.
    Returns (bundle, fundamental cycle).
    """
    rng = rng or random.Random(0)
    e = edge_cochain(tc, *edge)
    z = fundamental_cycle(tc, e)
    b = _rand_vec(rng, tc.n(1), integral=True)
    lam = _rand_vec(rng, tc.n(0))
    blk = block(tc, 1, 0)
    h = _zero(tc.n(1))
    if blk is not None:
        s, o, n = blk
        for i in range(n):
            h[o + i] = _rand_q(rng)
    # edge-only cochains are closed on this model; fix the loop sum
    if any(x != 0 for x in _D(tc, 1, h)):
        raise BundleError("edge cochains are not closed on this model")
    pe = sum(a * x for a, x in zip(e, z))
    h = h + e * ((Fraction(value) - sum(a * x for a, x in zip(h, z))) / pe)
    h = h + b + _D(tc, 0, lam)
    c = -_D(tc, 1, b)
    return DifferentialCocycle(tc, c, h, _zero(tc.n(2))), z


# ---------------------------------------------------------------- transgression


@dataclass
class ConnectionFamily:
    tc: FreeComplex
    c: np.ndarray
    hs: list

    @property
    def q(self) -> int:
        return len(self.hs) - 1

    @property
    def omegas(self) -> list:
        return [_D(self.tc, 1, h) + self.c for h in self.hs]

    def drop(self, i: int) -> "ConnectionFamily":
        return ConnectionFamily(self.tc, self.c, self.hs[:i] + self.hs[i + 1:])

    def member(self, j: int) -> DifferentialCocycle:
        return make_bundle(self.tc, self.c, self.hs[j])

    @classmethod
    def of(cls, bundles: list) -> "ConnectionFamily":
        c = bundles[0].c
        for b in bundles[1:]:
            if not _eq(b.c, c):
                raise BundleError("family members live on different bundles")
        return cls(bundles[0].tc, c, [b.h for b in bundles])


def random_family(tc: FreeComplex, q: int, rng: random.Random) -> ConnectionFamily:
    base = random_bundle(tc, rng)
    return ConnectionFamily(tc, base.c, [base.h] + [_rand_vec(rng, tc.n(1)) for _ in range(q)])


def curvature_form(fam: ConnectionFamily) -> PolySimplexForm:
    """F_s = Σ ds_j ⊗ h_j + Σ s_j ⊗ ω_j on Δ^q."""
    q, tc = fam.q, fam.tc
    F = PolySimplexForm(q, tc)
    for j, (h, w) in enumerate(zip(fam.hs, fam.omegas)):
        if q:
            F = F + PolySimplexForm.ds(q, tc, j, h, 1)
        F = F + PolySimplexForm.s(q, tc, j, w, 2)
    return F


def theta_transgression(k: int, fam: ConnectionFamily) -> np.ndarray:
    """Θ_q = ∫_{Δ^q} F_s^k, a cochain of degree 2k - q."""
    if k < 1:
        raise ValueError("k >= 1")
    fam.tc.check_degree(2 * k)
    q = fam.q
    deg = 2 * k - q
    if deg < 0:
        return _zero(0)
    out = simplex_integrate(curvature_form(fam).power(k))
    return out.get(deg, _zero(fam.tc.n(deg)))


def cup_power(tc: FreeComplex, v, deg: int, k: int) -> np.ndarray:
    out = la.qvec(v)
    d = deg
    for _ in range(k - 1):
        out = cup_vec(tc, out, d, v, deg)
        d += deg
    return out


@dataclass
class StokesReport:
    k: int
    q: int
    lhs: np.ndarray
    rhs: np.ndarray
    q1_lhs: np.ndarray | None = None
    q1_rhs: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        good = _eq(self.lhs, self.rhs)
        if self.q1_lhs is not None:
            good = good and _eq(self.q1_lhs, self.q1_rhs)
        return good

    def to_json(self) -> dict:
        return {"k": self.k, "q": self.q, "holds": self.ok,
                "convention": "D Theta_q = (-1)^(q+1) sum_i (-1)^i Theta_(q-1)(omit i)",
                "lhs": [str(x) for x in self.lhs], "rhs": [str(x) for x in self.rhs]}


def stokes_check(k: int, fam: ConnectionFamily) -> StokesReport:
    """D Θ_q = (-1)^{q+1} Σ_i (-1)^i Θ_{q-1}(θ_0..θ̂_i..θ_q).

    With the orientation ds_1 ∧ ... ∧ ds_q this gives DΘ_1 = Φ(θ_1) - Φ(θ_0).
    """
    q = fam.q
    if q < 1:
        raise ValueError("q >= 1")
    tc = fam.tc
    deg = 2 * k - q
    if deg < 0:
        z = _zero(0)
        return StokesReport(k, q, z, z)
    th = theta_transgression(k, fam)
    lhs = _D(tc, deg, th) if len(th) else _zero(tc.n(deg + 1))
    rhs = _zero(tc.n(deg + 1))
    for i in range(q + 1):
        t = theta_transgression(k, fam.drop(i))
        if len(t):
            rhs = rhs + t * (-1 if i % 2 else 1)
    if q % 2 == 0:
        rhs = -rhs
    rep = StokesReport(k, q, lhs, rhs)
    if q == 1:
        w0, w1 = fam.omegas
        rep.q1_lhs = lhs
        rep.q1_rhs = cup_power(tc, w1, 2, k) - cup_power(tc, w0, 2, k)
    return rep


# ---------------------------------------------------------------- multiplicative bundles


def _F_span(tc: FreeComplex, F: Filtration, r: int, m: int) -> np.ndarray:
    cache = tc.__dict__.setdefault("_fspans", {})
    key = (F.name, id(F), r)
    if key not in cache:
        O = tc.over_Q()
        sub, quo, inc, proj = filtration_pieces(O, F, r)
        cache[key] = (F, {k: inc.f(k) for k in sub.dims})
    S = cache[key][1].get(m)
    return S if S is not None else la.zeros(tc.n(m), 0)


def f_coordinates(tc, F, r, m, v):
    """Coordinates of v in the spanning set of F^r in degree m, or None."""
    S = _F_span(tc, F, r, m)
    v = la.qvec(v)
    if S.shape[1] == 0:
        return la.qvec([]) if all(x == 0 for x in v) else None
    return la.solve(la.qmat(S, S.shape), v)


@dataclass
class MultiplicativeBundle:
    bundle: DifferentialCocycle
    omega_hat: dict  # r -> cochain of degree 2r - 1
    F: Filtration = field(default_factory=bete_filtration)
    certificates: dict = field(default_factory=dict)

    @property
    def tc(self) -> FreeComplex:
        return self.bundle.tc

    def defect(self, r: int) -> np.ndarray:
        """Φ_r(θ) - Dω̂_r = ω^r - Dω̂_r."""
        tc = self.tc
        return cup_power(tc, self.bundle.omega, 2, r) - _D(tc, 2 * r - 1, self.omega_hat[r])


def is_multiplicative(mb: MultiplicativeBundle) -> tuple[bool, int | None]:
    """Checks ω^r - Dω̂_r ∈ F^r for every stored r; fills ``certificates``."""
    mb.certificates = {}
    for r in sorted(mb.omega_hat):
        mb.tc.check_degree(2 * r)
        x = f_coordinates(mb.tc, mb.F, r, 2 * r, mb.defect(r))
        if x is None:
            return False, r
        mb.certificates[r] = x
    return True, None


@dataclass
class IsoDecision:
    isomorphic: bool
    witnesses: dict  # r -> (F coordinates, ρ)
    failing: int | None = None

    def to_json(self) -> dict:
        return {"isomorphic": self.isomorphic, "failing_index": self.failing,
                "witnesses": {str(r): {"sigma": [str(x) for x in s], "rho": [str(x) for x in p]}
                              for r, (s, p) in sorted(self.witnesses.items())}}


def iso_multiplicative(mb: MultiplicativeBundle, mb2: MultiplicativeBundle,
                       g: Gauge) -> IsoDecision:
    """Decides ω̂'_r - ω̂_r - Θ_1(Φ_r; θ, g^*θ') ∈ F^r + D(C) for each r."""
    d, d2 = mb.bundle, mb2.bundle
    tc = d.tc
    if not g.relates(d, d2):
        raise BundleError("gauge does not relate the underlying bundles")
    if sorted(mb.omega_hat) != sorted(mb2.omega_hat):
        raise BundleError("multiplicative bundles carry different indices")
    fam = ConnectionFamily(tc, d.c, [d.h, g.pull_connection(d2)])
    wits = {}
    for r in sorted(mb.omega_hat):
        m = 2 * r - 1
        delta = la.qvec(mb2.omega_hat[r]) - la.qvec(mb.omega_hat[r]) - theta_transgression(r, fam)
        S = _F_span(tc, mb.F, r, m)
        S = la.qmat(S, S.shape)
        Dm = la.qmat(tc.d(m - 1), tc.d(m - 1).shape) if tc.n(m - 1) else la.zeros(tc.n(m), 0)
        A = np.concatenate([S, Dm], axis=1)
        if A.shape[1] == 0:
            x = la.qvec([]) if all(v == 0 for v in delta) else None
        else:
            x = la.solve(A, delta)
        if x is None:
            return IsoDecision(False, wits, r)
        wits[r] = (x[:S.shape[1]], x[S.shape[1]:])
    return IsoDecision(True, wits)


# ---------------------------------------------------------------- the class ξ


def transgression_cochain(d: DifferentialCocycle, k: int) -> np.ndarray:
    """v = Σ_{i<k} ω^i ∪ h ∪ c^{k-1-i}, with Dv = ω^k - c^k."""
    tc = d.tc
    out = _zero(tc.n(2 * k - 1))
    for i in range(k):
        t, deg = d.h, 1
        for _ in range(i):
            t = cup_vec(tc, d.omega, 2, t, deg)
            deg += 2
        for _ in range(k - 1 - i):
            t = cup_vec(tc, t, deg, d.c, 2)
            deg += 2
        out = out + t
    return out


@dataclass
class XiClass:
    k: int
    query: SecondaryQuery
    cocycle: np.ndarray  # in the cone B, degree 2k
    parts: tuple  # (c^k, ω^k - Dω̂, ω̂ - v) as cochains
    is_cocycle: bool
    mh_reduced: tuple  # reduced coordinates in MH
    mh_zero: bool
    hat_pair: tuple  # (a, b~) with b~ read mod Z
    hat_zero: bool

    def character(self, z) -> Fraction:
        """b~(z) mod 1 on an integral (2k-1)-cycle."""
        return Fraction(sum(a * b for a, b in zip(self.hat_pair[1], la.qvec(z)))) % 1

    def characters(self) -> list:
        """Character values on a basis of integral (2k-1)-cycles."""
        tc = self.query.tc
        m = 2 * self.k - 1
        if tc.valid_max is not None and m + 1 > tc.valid_max:
            return []
        Z = integral_cycles(tc, m)
        return [self.character(Z[:, j]) for j in range(Z.shape[1])]

    def to_json(self) -> dict:
        return {"k": self.k, "r": self.query.r, "n": self.query.n, "cocycle": self.is_cocycle,
                "mh": {"reduced_coordinates": [[int(x) for x in self.mh_reduced[0]],
                                               [int(x) for x in self.mh_reduced[1]]],
                       "zero": self.mh_zero},
                "hat": {"zero": self.hat_zero,
                        "character_on_cycle_basis": [str(x) for x in self.characters()]},
                "xi": [[i, str(x)] for i, x in enumerate(self.cocycle) if x != 0]}


def _query(mb: MultiplicativeBundle, k: int, r: int | None) -> SecondaryQuery:
    r = k if r is None else r
    return SecondaryQuery(mb.tc, "Z", mb.F, r=r, n=2 * r - 2 * k)


def xi_cocycle(mb: MultiplicativeBundle, k: int, r: int | None = None):
    """(cone, ξ, parts) for index k in the cone B of F^r (default r = k)."""
    if k not in mb.omega_hat:
        raise BundleError(f"no ω̂ stored for index {k}")
    q = _query(mb, k, r)
    tc = mb.tc
    d = mb.bundle
    ck = cup_power(tc, d.c, 2, k)
    om = mb.defect(k)
    x = la.qvec(mb.omega_hat[k]) - transgression_cochain(d, k)
    B = b_cone(q)
    S = B.spans[2 * k]
    coords = la.solve(la.qmat(S, S.shape), om) if S.shape[1] else (
        la.qvec([]) if all(v == 0 for v in om) else None)
    if coords is None:
        raise BundleError(f"not multiplicative at index {q.r}: defect leaves F^{q.r}")
    xi = B.join(2 * k, ck, coords, x)
    return q, B, xi, (ck, om, x)


def char_class_xi(mb: MultiplicativeBundle, k: int, r: int | None = None) -> XiClass:
    q, B, xi, parts = xi_cocycle(mb, k, r)
    m = 2 * k
    cyc = B.mc.is_cocycle(m, xi)
    H = mh_group(q).cohomology
    red = H.reduced_coords(B.mc, xi)
    mh_zero = B.mc.is_coboundary(m, xi)
    a, bt = parts[1], -parts[2]
    Bk = bk_cone(q)
    hat_zero = Bk.mc.is_coboundary(m, xi) if Bk.ng.get(m, 0) == B.ng.get(m, 0) else None
    return XiClass(k, q, xi, parts, cyc, red, mh_zero, (a, bt), hat_zero)


def same_mh_class(x1: XiClass, x2: XiClass) -> bool:
    B = b_cone(x1.query)
    return B.mc.is_coboundary(2 * x1.k, x1.cocycle - x2.cocycle)


def same_hat_class(x1: XiClass, x2: XiClass) -> bool:
    Bk = bk_cone(x1.query)
    return Bk.mc.is_coboundary(2 * x1.k, x1.cocycle - x2.cocycle)


# ---------------------------------------------------------------- pullback


def pullback_bundle(f: NerveMap, d: DifferentialCocycle, src_tc: FreeComplex) -> DifferentialCocycle:
    rep = f.validate()
    if not rep.ok:
        raise BundleError("; ".join(rep.messages()))
    P = pullback_map(f, src_tc, d.tc)
    return DifferentialCocycle(src_tc, la.qmat(P.f(2), P.f(2).shape) @ d.c,
                               la.qmat(P.f(1), P.f(1).shape) @ d.h,
                               la.qmat(P.f(2), P.f(2).shape) @ d.omega)


def pullback_multiplicative(f: NerveMap, mb: MultiplicativeBundle,
                            src_tc: FreeComplex) -> MultiplicativeBundle:
    P = pullback_map(f, src_tc, mb.tc)
    oh = {r: la.qmat(P.f(2 * r - 1), P.f(2 * r - 1).shape) @ la.qvec(v)
          for r, v in mb.omega_hat.items()}
    return MultiplicativeBundle(pullback_bundle(f, mb.bundle, src_tc), oh, mb.F)
