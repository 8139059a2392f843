"""JSON readers and writers for models, bundles and gauges.

Every model file carries a ``kind``:

* ``groupoid``: ``objects``, ``arrows`` ([{id, source, target}]) and
  ``composition`` triples [g, h, g then h]. Identities and inverses are
  derived from the table.
* ``space``: either ``vertices`` + ``facets`` (an ordered simplicial
  complex) or explicit ``levels``, ``faces`` and ``degeneracies`` tables.
* ``cover``: a ``space`` and ``pieces`` (lists of simplices, each a vertex
  list, or ids for explicit spaces).
* ``action``: a one-object ``group``, a complex-form ``space`` and per
  arrow vertex maps in ``action``.
* ``builtin``: ``name`` from the built-in model table.

All ids are strings. Cochains are sparse lists of [index, "p/q"].
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg as la
from .groupoid import FiniteGroupoid, GroupoidError, validate_groupoid
from .models import BUILTINS, builtin
from .nerve import Cover, NerveDiagram, action_nerve, cech_nerve, nerve
from .simplicial import SimplicialSetModel, from_complex, vertex_map

__all__ = [
    "ParseError",
    "load_json",
    "groupoid_from_json",
    "groupoid_to_json",
    "space_from_json",
    "cover_from_json",
    "model_from_json",
    "sparse_to_vec",
    "vec_to_sparse",
]


class ParseError(ValueError):
    pass


def load_json(path) -> dict:
    """Read a JSON file; syntax errors carry line and column."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"{where}: missing field {key!r}")
    return d[key]


def groupoid_from_json(d: dict) -> FiniteGroupoid:
    objs = tuple(str(x) for x in _need(d, "objects", "groupoid"))
    arrows, src, tgt = [], {}, {}
    for a in _need(d, "arrows", "groupoid"):
        i = str(_need(a, "id", "arrow"))
        arrows.append(i)
        src[i] = str(_need(a, "source", f"arrow {i}"))
        tgt[i] = str(_need(a, "target", f"arrow {i}"))
    comp = {}
    for t in _need(d, "composition", "groupoid"):
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError(f"groupoid: composition entry {t!r} is not a triple")
        comp[(str(t[0]), str(t[1]))] = str(t[2])
    ids = {}
    for x in objs:
        for e in arrows:
            if src[e] == x and tgt[e] == x and all(
                    comp.get((e, g)) == g for g in arrows if src[g] == x) and all(
                    comp.get((g, e)) == g for g in arrows if tgt[g] == x):
                ids[x] = e
                break
    inv = {}
    for g in arrows:
        for h in arrows:
            if ids.get(src[g]) is not None and comp.get((g, h)) == ids[src[g]] \
                    and comp.get((h, g)) == ids.get(tgt[g]):
                inv[g] = h
                break
    g = FiniteGroupoid(objs, tuple(arrows), src, tgt, comp, ids, inv, name=d.get("name", ""))
    rep = validate_groupoid(g)
    if not rep.ok:
        raise GroupoidError(rep)
    return g


def groupoid_to_json(g: FiniteGroupoid) -> dict:
    return {"kind": "groupoid", "name": g.name, "objects": [str(x) for x in g.objects],
            "arrows": [{"id": str(a), "source": str(g.source[a]), "target": str(g.target[a])}
                       for a in g.arrows],
            "composition": [[str(a), str(b), str(c)]
                            for (a, b), c in sorted(g.composition.items(), key=str)]}


def space_from_json(d: dict) -> SimplicialSetModel:
    if "facets" in d:
        verts = [str(v) for v in d.get("vertices", [])] or None
        facets = [[str(v) for v in f] for f in d["facets"]]
        return from_complex(facets, verts, d.get("D"), name=d.get("name", ""))
    levels = [[str(x) for x in lev] for lev in _need(d, "levels", "space")]
    faces = [[]]
    for n, fl in enumerate(_need(d, "faces", "space")[1:], start=1):
        if len(fl) != n + 1:
            raise ParseError(f"space: level {n} needs {n + 1} face tables")
        faces.append([{str(k): str(v) for k, v in f.items()} for f in fl])
    degens = []
    for n, dl in enumerate(_need(d, "degeneracies", "space")):
        degens.append([{str(k): str(v) for k, v in f.items()} for f in dl])
    m = SimplicialSetModel(levels, faces, degens, name=d.get("name", ""))
    rep = m.validate()
    if not rep.ok:
        raise GroupoidError(rep)
    return m


def _piece_keys(space: SimplicialSetModel, piece, complex_form: bool, order) -> set:
    out = set()
    for s in piece:
        if complex_form:
            key = tuple(sorted((str(v) for v in s), key=order))
        else:
            key = str(s)
        out.add(key)
    return out


def cover_from_json(d: dict) -> Cover:
    sd = _need(d, "space", "cover")
    base = space_from_json(sd)
    cf = "facets" in sd
    if cf:
        verts = [str(v) for v in sd.get("vertices", [])] or sorted(
            {str(v) for f in sd["facets"] for v in f})
        pos = {v: i for i, v in enumerate(verts)}
        order = pos.__getitem__
    else:
        order = None
    pieces = [_piece_keys(base, p, cf, order) for p in _need(d, "pieces", "cover")]
    return Cover(base, pieces, name=d.get("name", "cover"))


def model_from_json(d: dict, R: int) -> NerveDiagram:
    kind = _need(d, "kind", "model")
    if kind == "builtin":
        name = _need(d, "name", "builtin")
        if name not in BUILTINS:
            raise ParseError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}")
        return builtin(name, R)
    if kind == "groupoid":
        return nerve(groupoid_from_json(d), R)
    if kind == "space":
        sp = space_from_json(d)
        allkeys = set().union(*[set(l) for l in sp.levels])
        return cech_nerve(Cover(sp, [allkeys], name=sp.name), R)
    if kind == "cover":
        return cech_nerve(cover_from_json(d), R)
    if kind == "action":
        g = groupoid_from_json(_need(d, "group", "action"))
        sp = space_from_json(_need(d, "space", "action"))
        maps = _need(d, "action", "action")
        act = {}
        for a in g.arrows:
            mp = {str(k): str(v) for k, v in _need(maps, a, "action").items()}
            act[a] = vertex_map(sp, sp, mp)
        return action_nerve(g, sp, act, R)
    raise ParseError(f"unknown model kind {kind!r}")


def sparse_to_vec(entries, n: int, where: str = "cochain") -> np.ndarray:
    v = la.qvec([0] * n)
    for e in entries or []:
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"{where}: entry {e!r} is not [index, value]")
        i = int(e[0])
        if not 0 <= i < n:
            raise ParseError(f"{where}: index {i} outside 0..{n - 1}")
        try:
            v[i] = Fraction(str(e[1]))
        except ValueError:
            raise ParseError(f"{where}: value {e[1]!r} is not a rational") from None
    return v


def vec_to_sparse(v) -> list:
    return [[i, str(x)] for i, x in enumerate(v) if x != 0]
