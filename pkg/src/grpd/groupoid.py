"""Finite groupoids.

Arrows are composed "first g, then h": the pair (g, h) is composable when
``target(g) == source(h)`` and ``compose(g, h)`` runs from ``source(g)`` to
``target(h)``. This is the orientation of the fiber product
G_1 x_{t, G_0, s} G_1 and is used everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

__all__ = [
    "FiniteGroupoid",
    "ValidationReport",
    "GroupoidError",
    "validate_groupoid",
    "cyclic_group",
    "symmetric_group",
    "group_from_table",
    "unit_groupoid",
    "pair_groupoid",
    "empty_groupoid",
    "inertia",
    "disjoint_union",
]


class GroupoidError(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__("invalid groupoid: " + "; ".join(report.messages()))
        self.report = report


@dataclass
class ValidationReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness: tuple) -> None:
        self.violations.append((axiom, witness))

    def messages(self) -> list[str]:
        return [f"{a} fails at {w!r}" for a, w in self.violations]

    def to_json(self) -> dict:
        return {"valid": self.ok,
                "violations": [{"axiom": a, "witness": [str(x) for x in w]}
                               for a, w in self.violations]}


@dataclass(frozen=True)
class FiniteGroupoid:
    """Objects, arrows with source/target, and the structure tables.

    ``composition`` maps composable pairs ``(g, h)`` to ``g`` then ``h``.
    Finite models are always proper, so ``proper`` is recorded as True.
    """

    objects: tuple
    arrows: tuple
    source: dict
    target: dict
    composition: dict
    identities: dict
    inverses: dict
    name: str = ""
    proper: bool = True

    def compose(self, g, h):
        return self.composition[(g, h)]

    def composable(self, g, h) -> bool:
        return self.target[g] == self.source[h]

    def hom(self, x, y) -> list:
        return [g for g in self.arrows if self.source[g] == x and self.target[g] == y]

    @property
    def is_group(self) -> bool:
        return len(self.objects) == 1

    def identity_arrows(self) -> set:
        return set(self.identities.values())


def validate_groupoid(g: FiniteGroupoid) -> ValidationReport:
    """Check every groupoid axiom and collect witnesses; never raises."""
    rep = ValidationReport()
    objs = set(g.objects)
    for a in g.arrows:
        if g.source.get(a) not in objs:
            rep.add("source is an object", (a,))
        if g.target.get(a) not in objs:
            rep.add("target is an object", (a,))
    if not rep.ok:
        return rep
    for a, b in product(g.arrows, repeat=2):
        if g.composable(a, b):
            c = g.composition.get((a, b))
            if c is None:
                rep.add("composition defined on composable pair", (a, b))
            elif g.source.get(c) != g.source[a] or g.target.get(c) != g.target[b]:
                rep.add("composite has the right endpoints", (a, b))
        elif (a, b) in g.composition:
            rep.add("composition only on composable pairs", (a, b))
    if not rep.ok:
        return rep
    for a, b, c in product(g.arrows, repeat=3):
        if g.composable(a, b) and g.composable(b, c):
            if g.compose(g.compose(a, b), c) != g.compose(a, g.compose(b, c)):
                rep.add("associativity", (a, b, c))
    for x in g.objects:
        e = g.identities.get(x)
        if e is None or g.source.get(e) != x or g.target.get(e) != x:
            rep.add("identity is a loop at its object", (x,))
    if len(rep.violations):
        return rep
    for a in g.arrows:
        es, et = g.identities[g.source[a]], g.identities[g.target[a]]
        if g.compose(es, a) != a or g.compose(a, et) != a:
            rep.add("identity law", (a,))
        inv = g.inverses.get(a)
        if inv is None or g.source.get(inv) != g.target[a] or g.target.get(inv) != g.source[a]:
            rep.add("inverse has swapped endpoints", (a,))
            continue
        if g.compose(a, inv) != es or g.compose(inv, a) != et:
            rep.add("inverse law g*g^-1 = id", (a,))
    return rep


def _check(g: FiniteGroupoid) -> FiniteGroupoid:
    rep = validate_groupoid(g)
    if not rep.ok:
        raise GroupoidError(rep)
    return g


def group_from_table(elements, mul, name: str = "", identity=None) -> FiniteGroupoid:
    """One-object groupoid of a finite group given by ``mul(a, b) = a then b``."""
    elements = tuple(elements)
    comp = {(a, b): mul(a, b) for a in elements for b in elements}
    if identity is None:
        identity = next(e for e in elements if all(comp[(e, a)] == a for a in elements))
    inv = {a: next(b for b in elements if comp[(a, b)] == identity) for a in elements}
    obj = "*"
    return FiniteGroupoid(
        objects=(obj,), arrows=elements,
        source={a: obj for a in elements}, target={a: obj for a in elements},
        composition=comp, identities={obj: identity}, inverses=inv, name=name)


def cyclic_group(m: int) -> FiniteGroupoid:
    """Z/m as a one-object groupoid, arrows 0..m-1."""
    return group_from_table(range(m), lambda a, b: (a + b) % m, name=f"Z/{m}", identity=0)


def symmetric_group(n: int) -> FiniteGroupoid:
    """S_n with permutations as tuples; ``a then b`` is ``b o a``."""
    els = tuple(permutations(range(n)))
    return group_from_table(els, lambda a, b: tuple(b[a[i]] for i in range(n)),
                            name=f"S_{n}", identity=tuple(range(n)))


def unit_groupoid(objects) -> FiniteGroupoid:
    objects = tuple(objects)
    ids = {x: ("id", x) for x in objects}
    arrows = tuple(ids.values())
    return FiniteGroupoid(
        objects=objects, arrows=arrows,
        source={ids[x]: x for x in objects}, target={ids[x]: x for x in objects},
        composition={(ids[x], ids[x]): ids[x] for x in objects},
        identities=ids, inverses={a: a for a in arrows}, name="unit")


def pair_groupoid(objects) -> FiniteGroupoid:
    """All ordered pairs (x, y) as arrows x -> y."""
    objects = tuple(objects)
    arrows = tuple((x, y) for x in objects for y in objects)
    comp = {((x, y), (y2, z)): (x, z) for (x, y) in arrows for (y2, z) in arrows if y == y2}
    return FiniteGroupoid(
        objects=objects, arrows=arrows,
        source={a: a[0] for a in arrows}, target={a: a[1] for a in arrows},
        composition=comp, identities={x: (x, x) for x in objects},
        inverses={(x, y): (y, x) for (x, y) in arrows}, name="pair")


def empty_groupoid() -> FiniteGroupoid:
    return FiniteGroupoid((), (), {}, {}, {}, {}, {}, name="empty")


def disjoint_union(*gs: FiniteGroupoid) -> FiniteGroupoid:
    objs, arrs, s, t, comp, ids, inv = [], [], {}, {}, {}, {}, {}
    for n, g in enumerate(gs):
        objs += [(n, x) for x in g.objects]
        arrs += [(n, a) for a in g.arrows]
        for a in g.arrows:
            s[(n, a)] = (n, g.source[a])
            t[(n, a)] = (n, g.target[a])
            inv[(n, a)] = (n, g.inverses[a])
        for (a, b), c in g.composition.items():
            comp[((n, a), (n, b))] = (n, c)
        for x, e in g.identities.items():
            ids[(n, x)] = (n, e)
    return FiniteGroupoid(tuple(objs), tuple(arrs), s, t, comp, ids, inv, name="union")


def inertia(g: FiniteGroupoid) -> FiniteGroupoid:
    """Loops of ``g`` acted on by conjugation.

    An arrow ``(gamma, h)`` goes from the loop ``gamma`` at ``s(h)`` to
    ``h^-1 gamma h`` at ``t(h)`` (composition order "first, then").
    """
    _check(g)
    loops = tuple(a for a in g.arrows if g.source[a] == g.target[a])
    arrows, s, t = [], {}, {}
    for gam in loops:
        for h in g.arrows:
            if g.source[h] == g.source[gam]:
                a = (gam, h)
                arrows.append(a)
                s[a] = gam
                t[a] = g.compose(g.compose(g.inverses[h], gam), h)
    comp = {}
    for a in arrows:
        for b in arrows:
            if t[a] == s[b]:
                comp[(a, b)] = (a[0], g.compose(a[1], b[1]))
    ids = {gam: (gam, g.identities[g.source[gam]]) for gam in loops}
    inv = {a: (t[a], g.inverses[a[1]]) for a in arrows}
    return FiniteGroupoid(loops, tuple(arrows), s, t, comp, ids, inv,
                          name=f"inertia({g.name})")
