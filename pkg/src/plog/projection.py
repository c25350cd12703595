"""Projections of Ignatiev segments onto finite J-lines.

For a J-line ``T`` we build an ordinal ``iota``, a map from ``Ig_iota``
(points with ``x0 <= iota``) onto the worlds of ``T`` sending ``delta_iota``
alone to the root, and for every world a closed formula defining its preimage.
The construction is recursive on the shape:

* one world: ``iota = 0``, defined by ``[0]F``;
* one 1-plane: project the inner shape with indices lowered by one, take
  ``iota = w^inner``, and shift the inner formulas up;
* several 1-planes: stack the projections of the planes as an ordered sum
  ``a_0 + 1 + a_1 + ... + 1 + a_l``, the plane holding the root on top.

Every result is checked with the cell engine before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .formula import (
    BOT,
    TOP,
    And,
    Box,
    Dia,
    Formula,
    Not,
    box_normalize,
    conj,
    disj,
    m_plus,
    render_formula,
    shift,
    substitute_closed,
    variables,
)
from .ignatiev import (
    IgPoint,
    axis_defining_formula,
    closed_truthset,
    delta_point,
    equals,
    intersect,
    member,
    segment,
    singleton,
    union,
)
from .jline import JLineShape, materialize, root_world, world_name, world_path
from .kripke import eval_at
from .ordinal import ZERO, Ordinal, ord_add, ord_omega_pow, ord_render, ord_sub_left, ord_succ


class ProjectionError(AssertionError):
    def __init__(self, message: str, world: Optional[str] = None):
        super().__init__(message if world is None else f"{message} (world {world})")
        self.world = world


@dataclass(frozen=True)
class ProjectionSpec:
    iota: Ordinal
    shape: JLineShape
    defs: Mapping[str, Formula]
    case: str  # "singleton" | "shift" | "sum"
    # shift: a single inner spec; sum: one spec per plane, bottom first
    parts: tuple["ProjectionSpec", ...] = ()
    # sum: first coordinate at which each part starts, and its child index
    offsets: tuple[Ordinal, ...] = ()
    child_index: tuple[int, ...] = ()
    # formulas that define each world within a plane without mentioning [0]
    core: Mapping[str, Formula] = field(default_factory=dict)

    @property
    def root(self) -> str:
        return root_world(self.shape)


def _singleton(shape: JLineShape) -> ProjectionSpec:
    w = root_world(shape)
    return ProjectionSpec(ZERO, shape, {w: Box(0, BOT)}, "singleton", core={w: TOP})


def _build(shape: JLineShape) -> ProjectionSpec:
    if shape.size() == 1:
        return _singleton(shape)
    if len(shape.children) == 1:
        inner = _build(shape.children[0])
        iota = ord_omega_pow(inner.iota)
        cap = Box(0, Not(axis_defining_formula(iota)))
        defs, core = {}, {}
        for w, d in inner.defs.items():
            name = world_name((0,) + world_path(w))
            core[name] = shift(d)
            defs[name] = And(core[name], cap)
        return ProjectionSpec(iota, shape, defs, "shift", (inner,), core=core)
    # bottom of the sum is the plane farthest from the root
    order = list(range(len(shape.children)))[::-1]
    parts = [_build(JLineShape((shape.children[j],))) for j in order]
    offsets, sums = [], []
    total: Optional[Ordinal] = None
    for p in parts:
        start = ZERO if total is None else ord_succ(total)
        offsets.append(start)
        total = ord_add(start, p.iota)
        sums.append(total)
    defs = {}
    for i, (j, p) in enumerate(zip(order, parts)):
        above = TOP if i == 0 else Dia(0, axis_defining_formula(sums[i - 1]))
        below = Not(Dia(0, axis_defining_formula(sums[i])))
        for w, c in p.core.items():
            name = world_name((j,) + world_path(w)[1:])
            defs[name] = conj(g for g in (c, above, below) if g != TOP)
    return ProjectionSpec(total, shape, defs, "sum", tuple(parts), tuple(offsets), tuple(order))


def verify_projection(ps: ProjectionSpec) -> None:
    """Preimages partition ``Ig_iota``; the root's preimage is ``{delta_iota}``."""
    worlds = sorted(ps.defs, key=world_path)
    expected = {world_name(p) for p in ps.shape.paths()}
    if set(worlds) != expected:
        raise ProjectionError("defined worlds differ from the shape's worlds")
    sets = {w: closed_truthset(ps.defs[w]) for w in worlds}
    seg = segment(ps.iota)
    covered = None
    for i, w in enumerate(worlds):
        if sets[w].is_empty():
            raise ProjectionError("empty preimage", w)
        for v in worlds[i + 1:]:
            if not intersect(sets[w], sets[v]).is_empty():
                raise ProjectionError(f"preimage overlaps that of {v}", w)
        covered = sets[w] if covered is None else union(covered, sets[w])
    if not equals(covered, seg):
        raise ProjectionError(f"preimages do not cover Ig_{ord_render(ps.iota)}")
    if not equals(sets[ps.root], singleton(delta_point(ps.iota))):
        raise ProjectionError("root preimage is not the single axis point", ps.root)


def build_projection(shape: JLineShape) -> ProjectionSpec:
    shape.validate()
    if shape.depth < 1:
        raise ValueError("shape needs at least one modality")
    ps = _build(shape)
    verify_projection(ps)
    return ps


def project_point(ps: ProjectionSpec, p: IgPoint) -> str:
    if ps.iota < p.coord(0):
        raise ValueError(f"{p} lies outside Ig_{ord_render(ps.iota)}")
    if ps.case == "singleton":
        return ps.root
    if ps.case == "shift":
        inner = project_point(ps.parts[0], IgPoint(p.coords[1:]))
        return world_name((0,) + world_path(inner))
    x0 = p.coord(0)
    for i, part in enumerate(ps.parts):
        end = ord_add(ps.offsets[i], part.iota)
        if not end < x0:
            y = IgPoint((ord_sub_left(ps.offsets[i], x0),) + p.coords[1:])
            w = project_point(part, y)
            return world_name((ps.child_index[i],) + world_path(w)[1:])
    raise AssertionError("point not covered by any plane")


def closed_substitution_witness(shape: JLineShape, val: Mapping[str, frozenset], f: Formula) -> Formula:
    """Replace each variable by the disjunction of the defining formulas of
    the worlds where it holds; the result holds at ``delta_iota``."""
    n = shape.depth
    frame = materialize(shape)
    root = root_world(shape)
    guarded = conj([box_normalize(f), m_plus(box_normalize(f), n)])
    if not eval_at(frame, val, root, guarded):
        raise ValueError("the root must satisfy the formula together with its monotonicity guards")
    ps = build_projection(shape)
    subst = {
        v: disj(ps.defs[w] for w in sorted(val.get(v, ()), key=world_path))
        for v in sorted(variables(f))
    }
    star = substitute_closed(f, subst)
    if not member(delta_point(ps.iota), closed_truthset(star)):
        raise ProjectionError("substituted formula fails at the axis point")
    return star


def projection_to_json(ps: ProjectionSpec) -> dict:
    return {
        "iota": ord_render(ps.iota),
        "defs": {w: render_formula(ps.defs[w]) for w in sorted(ps.defs, key=world_path)},
        "case_tree": _case_tree(ps),
    }


def _case_tree(ps: ProjectionSpec) -> dict:
    node: dict = {"case": ps.case, "iota": ord_render(ps.iota)}
    if ps.case == "shift":
        node["inner"] = _case_tree(ps.parts[0])
    elif ps.case == "sum":
        node["parts"] = [
            {"child": j, "offset": ord_render(o), **_case_tree(p)}
            for j, o, p in zip(ps.child_index, ps.offsets, ps.parts)
        ]
    return node
