"""Polynomial forms on the standard simplex with total-cochain coefficients.

A term is ``coef * s^e ds_J (x) a`` where s^e is a monomial in s_1..s_q,
J is an increasing subset of {1..q} and ``a`` a total cochain of degree
``deg``. s_0 is always eliminated through s_0 = 1 - sum s_i. The total
differential is d(f ds_J (x) a) = d_s f ds_J (x) a + (-1)^|J| f ds_J (x) Da.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from . import linalg as la
from .cochains import cup_vec
from .complexes import FreeComplex

__all__ = ["PolySimplexForm", "simplex_integrate", "monomial_integral"]


def monomial_integral(exps: tuple) -> Fraction:
    """∫ over Δ^q of s_1^a_1 ... s_q^a_q ds_1...ds_q = prod a_i! / (q + sum a_i)!."""
    q = len(exps)
    num = 1
    for a in exps:
        num *= factorial(a)
    return Fraction(num, factorial(q + sum(exps)))


def _wedge_sign(J: tuple, K: tuple):
    """Sign and merged index set of ds_J ∧ ds_K (None when they overlap)."""
    if set(J) & set(K):
        return 0, None
    inv = sum(1 for j in J for k in K if j > k)
    return (-1 if inv % 2 else 1), tuple(sorted(J + K))


class PolySimplexForm:
    def __init__(self, q: int, tc: FreeComplex, terms: dict | None = None):
        self.q = q
        self.tc = tc
        self.terms: dict = {}
        for key, v in (terms or {}).items():
            self._add(key, v)

    # --- construction
    def _add(self, key, vec):
        if all(x == 0 for x in vec):
            return
        if key in self.terms:
            s = self.terms[key] + vec
            if all(x == 0 for x in s):
                del self.terms[key]
            else:
                self.terms[key] = s
        else:
            self.terms[key] = la.qvec(vec)

    @classmethod
    def cochain(cls, q: int, tc: FreeComplex, vec, deg: int) -> "PolySimplexForm":
        return cls(q, tc, {((), (0,) * q, deg): la.qvec(vec)})

    @classmethod
    def s(cls, q: int, tc: FreeComplex, i: int, vec, deg: int) -> "PolySimplexForm":
        """s_i (x) a; s_0 is expanded as 1 - sum s_j."""
        out = cls(q, tc)
        v = la.qvec(vec)
        if i == 0:
            out._add(((), (0,) * q, deg), v)
            for j in range(1, q + 1):
                e = tuple(1 if t == j - 1 else 0 for t in range(q))
                out._add(((), e, deg), -v)
        else:
            e = tuple(1 if t == i - 1 else 0 for t in range(q))
            out._add(((), e, deg), v)
        return out

    @classmethod
    def ds(cls, q: int, tc: FreeComplex, i: int, vec, deg: int) -> "PolySimplexForm":
        """ds_i (x) a; ds_0 = -sum ds_j."""
        out = cls(q, tc)
        v = la.qvec(vec)
        z = (0,) * q
        if i == 0:
            for j in range(1, q + 1):
                out._add(((j,), z, deg), -v)
        else:
            out._add(((i,), z, deg), v)
        return out

    # --- algebra
    def __add__(self, other: "PolySimplexForm") -> "PolySimplexForm":
        out = PolySimplexForm(self.q, self.tc, self.terms)
        for k, v in other.terms.items():
            out._add(k, v)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "PolySimplexForm":
        c = Fraction(c)
        return PolySimplexForm(self.q, self.tc, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "PolySimplexForm") -> "PolySimplexForm":
        """(f ds_J (x) a)(g ds_K (x) b) = (-1)^{|a||K|} f g ds_J ds_K (x) a ∪ b."""
        out = PolySimplexForm(self.q, self.tc)
        for (J, e, da), a in self.terms.items():
            for (K, f, db), b in other.terms.items():
                sgn, L = _wedge_sign(J, K)
                if not sgn:
                    continue
                if da + db > self.tc.hi:
                    continue
                if (da * len(K)) % 2:
                    sgn = -sgn
                e2 = tuple(x + y for x, y in zip(e, f))
                prod = cup_vec(self.tc, a, da, b, db)
                out._add((L, e2, da + db), prod * sgn)
        return out

    def power(self, k: int) -> "PolySimplexForm":
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def d(self) -> "PolySimplexForm":
        out = PolySimplexForm(self.q, self.tc)
        for (J, e, deg), a in self.terms.items():
            for i in range(1, self.q + 1):
                if e[i - 1] == 0:
                    continue
                sgn, L = _wedge_sign((i,), J)
                if not sgn:
                    continue
                e2 = tuple(x - 1 if t == i - 1 else x for t, x in enumerate(e))
                out._add((L, e2, deg), a * (sgn * e[i - 1]))
            if self.tc.n(deg + 1):
                Da = self.tc.d(deg) @ a
                out._add((J, e, deg + 1), Da * (-1 if len(J) % 2 else 1))
        return out

    def restrict_face(self, i: int) -> "PolySimplexForm":
        """Pull back along the i-th face Δ^{q-1} -> Δ^q (vertex i omitted).

        Face i sets s_i = 0 and renumbers; face 0 sets s_0 = 0, realized as
        s_1 = 1 - (t_1 + ... + t_{q-1}) with t_j = s_{j+1}.
        """
        q = self.q
        out = PolySimplexForm(q - 1, self.tc)
        for (J, e, deg), a in self.terms.items():
            for J2, e2, c in _face_terms(q, i, J, e):
                out._add((J2, e2, deg), a * c)
        return out

    def degree_part(self, deg: int) -> "PolySimplexForm":
        return PolySimplexForm(self.q, self.tc, {k: v for k, v in self.terms.items() if k[2] == deg})

    def is_zero(self) -> bool:
        return not self.terms


def _poly_mul(p: dict, r: dict) -> dict:
    out = {}
    for e, c in p.items():
        for f, d in r.items():
            g = tuple(x + y for x, y in zip(e, f))
            out[g] = out.get(g, 0) + c * d
    return {k: v for k, v in out.items() if v}


def _face_terms(q: int, i: int, J: tuple, e: tuple):
    """Pull back s^e ds_J along face i; yields (J', e', coefficient)."""
    m = q - 1
    unit = lambda j: tuple(1 if t == j else 0 for t in range(m))  # noqa: E731
    zero = (0,) * m
    # images of s_1..s_q as polynomials in t_1..t_m and ds_j as 1-forms
    svals, dsvals = [], []
    for j in range(1, q + 1):
        if i == 0:
            if j == 1:
                p = {zero: 1}
                for t in range(m):
                    p[unit(t)] = -1
                svals.append(p)
                dsvals.append({(t + 1,): -1 for t in range(m)})
            else:
                svals.append({unit(j - 2): 1})
                dsvals.append({(j - 1,): 1})
        else:
            if j < i:
                svals.append({unit(j - 1): 1})
                dsvals.append({(j,): 1})
            elif j == i:
                svals.append({})
                dsvals.append({})
            else:
                svals.append({unit(j - 2): 1})
                dsvals.append({(j - 1,): 1})
    poly = {zero: 1}
    for j, a in enumerate(e):
        for _ in range(a):
            poly = _poly_mul(poly, svals[j])
    forms = {(): 1}
    for j in J:
        new = {}
        for K, c in forms.items():
            for (t,), d in dsvals[j - 1].items():
                sgn, L = _wedge_sign(K, (t,))
                if sgn:
                    new[L] = new.get(L, 0) + c * d * sgn
        forms = {k: v for k, v in new.items() if v}
    for K, c in forms.items():
        for g, d in poly.items():
            yield K, g, Fraction(c * d)


def simplex_integrate(f: PolySimplexForm) -> dict:
    """Fiber integral over Δ^q: keeps the ds_1...ds_q terms.

    Returns {degree: cochain vector} (usually a single degree).
    """
    full = tuple(range(1, f.q + 1))
    out: dict = {}
    for (J, e, deg), a in f.terms.items():
        if J != full:
            continue
        c = monomial_integral(e)
        out[deg] = out.get(deg, la.qvec([0] * len(a))) + a * c
    return out
