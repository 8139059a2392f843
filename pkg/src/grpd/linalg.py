"""Exact linear algebra over the integers and the rationals.

Matrices are numpy arrays of ``dtype=object`` holding Python ``int`` or
``fractions.Fraction`` entries, so shapes like ``(0, n)`` survive and no
floating point is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
import heapq
from math import gcd, lcm

import numpy as np

__all__ = [
    "qmat",
    "imat",
    "zeros",
    "eye",
    "qvec",
    "rref",
    "rank",
    "nullspace",
    "left_nullspace",
    "solve",
    "column_basis",
    "SmithForm",
    "smith",
    "smith_normal_form",
    "elementary_divisors",
    "integer_kernel",
    "solve_integer",
    "solve_mixed",
    "mixed_kernel",
    "quotient_invariants",
    "subgroup_contains",
    "invariant_factors",
    "abelian_invariants",
    "to_int_rows",
]


def qmat(a, shape=None) -> np.ndarray:
    """Object array of Fractions; ``shape`` is needed for empty input."""
    m = np.array(a, dtype=object)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim == 1 and shape is None:
        m = m.reshape(1, -1) if m.size else m.reshape(0, 0)
    out = np.empty(m.shape, dtype=object)
    for idx, v in np.ndenumerate(m):
        out[idx] = Fraction(v)
    return out


def imat(a, shape=None) -> np.ndarray:
    m = np.array(a, dtype=object)
    if shape is not None:
        m = m.reshape(shape)
    out = np.empty(m.shape, dtype=object)
    for idx, v in np.ndenumerate(m):
        f = Fraction(v)
        if f.denominator != 1:
            raise ValueError(f"non-integer entry {v!r}")
        out[idx] = int(f)
    return out


def zeros(m: int, n: int, ring: str = "Q") -> np.ndarray:
    z = np.empty((m, n), dtype=object)
    z.fill(Fraction(0) if ring == "Q" else 0)
    return z


def eye(n: int, ring: str = "Q") -> np.ndarray:
    e = zeros(n, n, ring)
    one = Fraction(1) if ring == "Q" else 1
    for i in range(n):
        e[i, i] = one
    return e


def qvec(v) -> np.ndarray:
    out = np.empty(len(v), dtype=object)
    for i, x in enumerate(v):
        out[i] = Fraction(x)
    return out


def to_int_rows(a: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in a]


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    m = qmat(a, a.shape)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> np.ndarray:
    """Columns spanning the rational kernel of ``a``."""
    rows, cols = a.shape
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = Fraction(1)
        for i, p in enumerate(pivots):
            basis[p, j] = -r[i, f]
    return basis


def left_nullspace(a: np.ndarray) -> np.ndarray:
    """Rows ``n`` with ``n @ a == 0``."""
    return nullspace(a.T).T


def column_basis(a: np.ndarray) -> np.ndarray:
    """Independent columns of ``a`` spanning its column space."""
    if a.shape[1] == 0:
        return zeros(a.shape[0], 0)
    _, pivots = rref(a)
    return qmat(a[:, pivots], (a.shape[0], len(pivots)))


def solve(a: np.ndarray, b) -> np.ndarray | None:
    """One rational solution of ``a @ x == b`` or None.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    b = np.asarray(b, dtype=object)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    rows, cols = a.shape
    aug = np.concatenate([qmat(a, a.shape), qmat(b, b.shape)], axis=1)
    r, pivots = rref(aug)
    if any(p >= cols for p in pivots):
        return None
    x = zeros(cols, b.shape[1])
    for i, p in enumerate(pivots):
        x[p] = r[i, cols:]
    return x[:, 0] if vector else x


@dataclass
class SmithForm:
    """``U @ M @ V == D`` with U, V unimodular; inverses kept alongside."""

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray

    @property
    def divisors(self) -> list[int]:
        n = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(n) if self.D[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.divisors)


def smith(m: np.ndarray) -> SmithForm:
    """Smith normal form with both transforms and their inverses."""
    rows, cols = m.shape
    A = [[int(x) for x in row] for row in m]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    Ui = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]
    Vi = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_add(i, j, k):  # row_i += k * row_j
        if k == 0:
            return
        Ai, Aj = A[i], A[j]
        for c in range(cols):
            if Aj[c]:
                Ai[c] += k * Aj[c]
        Ui_, Uj = U[i], U[j]
        for c in range(rows):
            if Uj[c]:
                Ui_[c] += k * Uj[c]
        for row in Ui:
            if row[i]:
                row[j] -= k * row[i]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def col_add(i, j, k):  # col_i += k * col_j
        if k == 0:
            return
        for row in A:
            if row[j]:
                row[i] += k * row[j]
        for row in V:
            if row[j]:
                row[i] += k * row[j]
        Vj, Vi_ = Vi[j], Vi[i]
        for c in range(cols):
            if Vi_[c]:
                Vj[c] -= k * Vi_[c]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // p
                    row_add(i, t, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // p
                    col_add(j, t, -q)
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remainder onto the pivot and repeat
                best = (abs(A[t][t]), t, t)
                for i in range(t + 1, rows):
                    if A[i][t] and abs(A[i][t]) < best[0]:
                        best = (abs(A[i][t]), i, t)
                for j in range(t + 1, cols):
                    if A[t][j] and abs(A[t][j]) < best[0]:
                        best = (abs(A[t][j]), t, j)
                _, i, j = best
                row_swap(t, i)
                col_swap(t, j)
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            row_neg(t)
        t += 1

    def arr(x, r, c):
        out = np.empty((r, c), dtype=object)
        for a in range(r):
            for b in range(c):
                out[a, b] = x[a][b]
        return out

    return SmithForm(arr(A, rows, cols), arr(U, rows, rows), arr(V, cols, cols),
                     arr(Ui, rows, rows), arr(Vi, cols, cols))


def smith_normal_form(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(D, U, V)`` with ``U @ m @ V == D`` and d_1 | d_2 | ...

    >>> D, U, V = smith_normal_form([[2, 4], [6, 8]])
    >>> [D[0, 0], D[1, 1]]
    [2, 4]
    """
    a = imat(m) if not isinstance(m, np.ndarray) else m
    s = smith(a)
    return s.D, s.U, s.V


def elementary_divisors(m, shape: tuple[int, int] | None = None) -> list[int]:
    """Nonzero invariant factors of an integer matrix.

    Sparse elimination on unit pivots first (Markowitz choice), then a dense
    Smith form on whatever core is left. ``m`` may be a dense array or a dict
    ``{(i, j): value}`` together with ``shape``.
    """
    rows: dict[int, dict[int, int]] = {}
    if isinstance(m, dict):
        for (i, j), v in m.items():
            if v:
                rows.setdefault(i, {})[j] = int(v)
    else:
        for i in range(m.shape[0]):
            r = {j: int(v) for j, v in enumerate(m[i]) if v != 0}
            if r:
                rows[i] = r
    colrows: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            colrows.setdefault(j, set()).add(i)

    units = 0
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        ln, pi = heapq.heappop(heap)
        prow = rows.get(pi)
        if prow is None or len(prow) != ln:
            continue
        cand = [j for j, v in prow.items() if v == 1 or v == -1]
        if not cand:
            continue  # re-queued if a later update touches this row
        pj = min(cand, key=lambda j: len(colrows[j]))
        del rows[pi]
        pv = prow[pj]
        for j in prow:
            colrows[j].discard(pi)
        for i in list(colrows[pj]):
            r = rows[i]
            f = r[pj] * pv  # pv = +-1 so r[pj] / pv == r[pj] * pv
            for j, v in prow.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    if j not in r:
                        colrows[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    colrows[j].discard(i)
            if r:
                heapq.heappush(heap, (len(r), i))
            else:
                del rows[i]
        # the rest of the pivot row is cleared by column operations, which
        # leave the remaining rows alone since column pj is now zero there
        del colrows[pj]
        units += 1

    if not rows:
        return [1] * units
    ridx = sorted(rows)
    cidx = sorted({j for r in rows.values() for j in r})
    core = np.empty((len(ridx), len(cidx)), dtype=object)
    core.fill(0)
    cpos = {j: k for k, j in enumerate(cidx)}
    for a, i in enumerate(ridx):
        for j, v in rows[i].items():
            core[a, cpos[j]] = v
    return [1] * units + smith(core).divisors


def _row_denominator_clear(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    for i in range(a.shape[0]):
        den = reduce(lcm, (Fraction(x).denominator for x in a[i]), 1)
        for j in range(a.shape[1]):
            out[i, j] = int(Fraction(a[i, j]) * den)
    return out


def integer_kernel(a: np.ndarray) -> np.ndarray:
    """Columns forming a Z-basis of ``{x in Z^n : a @ x == 0}``."""
    n = a.shape[1]
    if a.shape[0] == 0:
        return eye(n, "Z")
    s = smith(_row_denominator_clear(a))
    return s.V[:, s.rank:]


def solve_integer(c: np.ndarray, e) -> np.ndarray | None:
    """Integer solution of ``c @ x == e`` (``c`` rational, ``e`` rational)."""
    e = [Fraction(x) for x in e]
    m, n = c.shape
    if m == 0:
        return np.array([0] * n, dtype=object)
    cc = np.empty(c.shape, dtype=object)
    ee = []
    for i in range(m):
        den = reduce(lcm, (Fraction(x).denominator for x in c[i]), 1)
        cc[i] = [int(Fraction(x) * den) for x in c[i]]
        ee.append(e[i] * den)
    s = smith(cc)
    f = [sum((s.U[i, j] * ee[j] for j in range(m)), Fraction(0)) for i in range(m)]
    w = [0] * n
    for i in range(m):
        d = s.D[i, i] if i < n else 0
        if d:
            q = f[i] / d
            if q.denominator != 1:
                return None
            w[i] = int(q)
        elif f[i] != 0:
            return None
    x = np.empty(n, dtype=object)
    for j in range(n):
        x[j] = sum((s.V[j, k] * w[k] for k in range(n)), 0)
    return x


def solve_mixed(az: np.ndarray, aq: np.ndarray, b) -> tuple[np.ndarray, np.ndarray] | None:
    """Solve ``az @ x + aq @ y == b`` with x integral and y rational."""
    b = qvec(b)
    m = len(b)
    az = az if az.size or az.shape[0] == m else zeros(m, az.shape[1])
    aq = aq if aq.size or aq.shape[0] == m else zeros(m, aq.shape[1])
    if aq.shape[1]:
        n = left_nullspace(aq)
    else:
        n = eye(m)
    x = solve_integer(n @ az if az.shape[1] else zeros(n.shape[0], 0), n @ b if m else b)
    if x is None:
        return None
    rest = b - (az @ x if az.shape[1] else zeros(m, 1)[:, 0])
    if aq.shape[1] == 0:
        if any(v != 0 for v in rest):
            return None
        return x, qvec([])
    y = solve(aq, rest)
    if y is None:
        return None
    return x, y


def mixed_kernel(az: np.ndarray, aq: np.ndarray) -> tuple[list, list]:
    """Generators of ``{(x, y) : az @ x + aq @ y == 0, x integral}``.

    Returns ``(lattice, space)``: the group is the direct sum of the Z-span of
    ``lattice`` and the Q-span of ``space``; every vector in ``space`` has zero
    integral coordinates.
    """
    p = az.shape[1]
    full = np.concatenate([qmat(az, az.shape), qmat(aq, aq.shape)], axis=1)
    w = nullspace(full)
    d = w.shape[1]
    if d == 0:
        return [], []
    proj = w[:p, :]
    sp = nullspace(proj) if p else eye(d)
    space = [w @ sp[:, j] for j in range(sp.shape[1])]
    if p == 0:
        return [], space
    ann = left_nullspace(proj)
    xs = integer_kernel(ann) if ann.shape[0] else eye(p, "Z")
    lattice = []
    for j in range(xs.shape[1]):
        bvec = solve(proj, xs[:, j])
        lattice.append(w @ bvec)
    return lattice, space


def quotient_invariants(dim: int, lattice: list, space: list) -> tuple[int, int]:
    """``(q_rank, qz_rank)`` of ``Q^dim / (Z-span(lattice) + Q-span(space))``."""
    if dim == 0:
        return 0, 0
    v = rank(qmat(space, (len(space), dim)).T) if space else 0
    allv = list(space) + list(lattice)
    w = rank(qmat(allv, (len(allv), dim)).T) if allv else 0
    return dim - w, w - v


def subgroup_contains(lattice: list, space: list, vec, dim: int) -> bool:
    """Is ``vec`` in Z-span(lattice) + Q-span(space) inside Q^dim?"""
    az = qmat(lattice, (len(lattice), dim)).T if lattice else zeros(dim, 0)
    aq = qmat(space, (len(space), dim)).T if space else zeros(dim, 0)
    return solve_mixed(az, aq, vec) is not None


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(orders) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of a direct sum of cyclic groups."""
    powers: dict[int, list[int]] = {}
    for o in orders:
        for p, e in _factor(int(o)).items():
            powers.setdefault(p, []).append(p ** e)
    if not powers:
        return ()
    for v in powers.values():
        v.sort(reverse=True)
    n = max(len(v) for v in powers.values())
    out = []
    for k in range(n):
        d = 1
        for v in powers.values():
            if k < len(v):
                d *= v[k]
        out.append(d)
    return tuple(sorted(out))


def abelian_invariants(relations: np.ndarray, ngens: int) -> tuple[int, tuple[int, ...]]:
    """Free rank and torsion of ``Z^ngens / column span(relations)``."""
    if relations.shape[1] == 0 or ngens == 0:
        return ngens, ()
    divs = smith(imat(relations, relations.shape)).divisors
    return ngens - len(divs), tuple(d for d in divs if d > 1)


def gcd_all(values) -> int:
    return reduce(gcd, (int(v) for v in values), 0)
