"""Built-in desk-scale models."""

from __future__ import annotations

from .groupoid import cyclic_group, unit_groupoid
from .nerve import Cover, NerveDiagram, cech_nerve, nerve
from .simplicial import triangulated_circle

__all__ = [
    "circle_cover",
    "circle_model",
    "plain_circle_model",
    "point_model",
    "cyclic_model",
    "z2_model",
    "empty_model",
    "BUILTINS",
    "builtin",
]


def circle_cover() -> Cover:
    """Triangulated circle covered by its three closed edges."""
    base = triangulated_circle()
    arcs = [{(0,), (1,), (0, 1)}, {(1,), (2,), (1, 2)}, {(0,), (2,), (0, 2)}]
    return Cover(base, arcs, name="circle/3 arcs")


def circle_model(R: int = 3) -> NerveDiagram:
    """Cech nerve of the three-arc cover of the circle: the circle model."""
    return cech_nerve(circle_cover(), R)


def plain_circle_model(R: int = 3) -> NerveDiagram:
    """The circle as the unit groupoid of itself (one-piece cover)."""
    base = triangulated_circle()
    allkeys = set().union(*[set(l) for l in base.levels])
    return cech_nerve(Cover(base, [allkeys], name="circle"), R)


def point_model(R: int = 3) -> NerveDiagram:
    return nerve(unit_groupoid(["*"]), R)


def cyclic_model(m: int, R: int = 3) -> NerveDiagram:
    """Nerve of [*/Z_m]."""
    return nerve(cyclic_group(m), R)


def z2_model(R: int = 3) -> NerveDiagram:
    return cyclic_model(2, R)


def empty_model(R: int = 3) -> NerveDiagram:
    from .groupoid import empty_groupoid
    return nerve(empty_groupoid(), R)


BUILTINS = {
    "point": point_model,
    "circle": circle_model,
    "plain-circle": plain_circle_model,
    "z2": z2_model,
    "z3": lambda R=3: cyclic_model(3, R),
    "empty": empty_model,
}


def builtin(name: str, R: int = 3) -> NerveDiagram:
    if name not in BUILTINS:
        raise KeyError(f"unknown model {name!r}; choose from {sorted(BUILTINS)}")
    return BUILTINS[name](R)
