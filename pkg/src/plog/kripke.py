"""Finite multimodal Kripke frames: evaluation and structural checks.

``(u, v) in frame.rel[k]`` means ``v`` is ``k``-accessible from ``u``, and
``<k>g`` holds at ``u`` iff ``g`` holds at some such ``v``.  Frames are not
assumed to have any structure; every property is a check returning a
:class:`FrameReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Optional

from .formula import And, Box, Dia, Formula, Imp, Not, Or, Top, Var, modal_signature, ordered_subformulas

World = str
Valuation = Mapping[str, frozenset]


@dataclass(frozen=True)
class FiniteFrame:
    n: int
    worlds: tuple[World, ...]
    rel: tuple[frozenset[tuple[World, World]], ...]
    _succ: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "worlds", tuple(sorted(set(self.worlds))))
        rel = tuple(frozenset((str(u), str(v)) for u, v in r) for r in self.rel)
        rel = rel + (frozenset(),) * (self.n - len(rel))
        object.__setattr__(self, "rel", rel)
        if self.n < 0 or len(rel) != self.n:
            raise ValueError(f"expected {self.n} relations, got {len(self.rel)}")
        ws = set(self.worlds)
        for k, r in enumerate(rel):
            for u, v in r:
                if u not in ws or v not in ws:
                    raise ValueError(f"rel[{k}] pair ({u}, {v}) mentions an unknown world")
        succ = tuple({w: frozenset(v for u, v in r if u == w) for w in self.worlds} for r in rel)
        object.__setattr__(self, "_succ", succ)

    def successors(self, k: int, w: World) -> frozenset[World]:
        return self._succ[k][w]

    def related(self, k: int, u: World, v: World) -> bool:
        return (u, v) in self.rel[k]

    def __len__(self) -> int:
        return len(self.worlds)


@dataclass(frozen=True)
class FrameReport:
    property: str
    holds: bool
    witness: Optional[tuple[World, ...]] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _ok(prop: str) -> FrameReport:
    return FrameReport(prop, True)


def _fail(prop: str, witness: tuple, detail: str) -> FrameReport:
    return FrameReport(prop, False, tuple(witness), detail)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def extension(frame: FiniteFrame, val: Valuation, f: Formula) -> frozenset[World]:
    """The set of worlds where ``f`` holds."""
    sig = modal_signature(f)
    if sig > frame.n:
        raise ValueError(f"formula uses modality {sig - 1} but the frame has only {frame.n}")
    every = frozenset(frame.worlds)
    ext: dict[Formula, frozenset] = {}
    for g in ordered_subformulas(f):
        if isinstance(g, Top):
            s = every
        elif isinstance(g, Var):
            s = frozenset(val.get(g.name, frozenset())) & every
        elif isinstance(g, Not):
            s = every - ext[g.sub]
        elif isinstance(g, And):
            s = ext[g.left] & ext[g.right]
        elif isinstance(g, Or):
            s = ext[g.left] | ext[g.right]
        elif isinstance(g, Imp):
            s = (every - ext[g.left]) | ext[g.right]
        elif isinstance(g, Dia):
            inner = ext[g.sub]
            s = frozenset(w for w in frame.worlds if frame.successors(g.index, w) & inner)
        else:
            inner = ext[g.sub]
            s = frozenset(w for w in frame.worlds if frame.successors(g.index, w) <= inner)
        ext[g] = s
    return ext[f]


def eval_at(frame: FiniteFrame, val: Valuation, w: World, f: Formula) -> bool:
    if w not in frame.worlds:
        raise KeyError(f"unknown world {w!r}")
    return w in extension(frame, val, f)


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


def check_j_frame(frame: FiniteFrame) -> FrameReport:
    """Irreflexive, transitive (hence, being finite, converse wellfounded)
    relations plus the three interaction conditions for every ``k < m``."""
    prop = "j_frame"
    ws, R = frame.worlds, frame.rel
    for k in range(frame.n):
        for w in ws:
            if (w, w) in R[k]:
                return _fail(prop, (w,), f"rel[{k}] is not irreflexive")
    for k in range(frame.n):
        for x, y in sorted(R[k]):
            for z in sorted(frame.successors(k, y)):
                if (x, z) not in R[k]:
                    return _fail(prop, (x, y, z), f"rel[{k}] is not transitive")
    for k in range(frame.n):
        for m in range(k + 1, frame.n):
            # (1) x <m y <k z  =>  x <k z
            for x, y in sorted(R[m]):
                for z in sorted(frame.successors(k, y)):
                    if (x, z) not in R[k]:
                        return _fail(prop, (x, y, z), f"x <{m} y <{k} z without x <{k} z")
            # (2) x <k y <m z  =>  x <k z
            for x, y in sorted(R[k]):
                for z in sorted(frame.successors(m, y)):
                    if (x, z) not in R[k]:
                        return _fail(prop, (x, y, z), f"x <{k} y <{m} z without x <{k} z")
            # (3) x <k z and y <m z  =>  x <k y
            for x, z in sorted(R[k]):
                for y, z2 in sorted(R[m]):
                    if z2 == z and (x, y) not in R[k]:
                        return _fail(prop, (x, y, z), f"x <{k} z and y <{m} z without x <{k} y")
    return _ok(prop)


def check_stratified(frame: FiniteFrame) -> FrameReport:
    """For ``k < m``: ``x <m y`` and ``z <k y`` imply ``z <k x``."""
    prop = "stratified"
    R = frame.rel
    for k in range(frame.n):
        for m in range(k + 1, frame.n):
            for x, y in sorted(R[m]):
                for z, y2 in sorted(R[k]):
                    if y2 == y and (z, x) not in R[k]:
                        return _fail(prop, (x, y, z), f"x <{m} y and z <{k} y without z <{k} x")
    return _ok(prop)


def check_hl_direct(frame: FiniteFrame) -> FrameReport:
    """Any two distinct worlds are related by some relation, in some direction."""
    if not check_j_frame(frame).holds:
        raise ValueError("hereditary linearity is only defined for J-frames")
    ws = frame.worlds
    for i, x in enumerate(ws):
        for y in ws[i + 1:]:
            if not any((x, y) in r or (y, x) in r for r in frame.rel):
                return _fail("hereditarily_linear", (x, y), "incomparable worlds")
    return _ok("hereditarily_linear")


class _UnionFind:
    def __init__(self, items: Iterable[World]):
        self.parent = {x: x for x in items}

    def find(self, x: World) -> World:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: World, b: World) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def planes_partition(frame: FiniteFrame, k: int) -> list[frozenset[World]]:
    """Classes of the ``k``-plane equivalence (identity at ``k = n``, sorted)."""
    if not 0 <= k <= frame.n:
        raise ValueError(f"plane level {k} out of range 0..{frame.n}")
    uf = _UnionFind(frame.worlds)
    for j in range(k, frame.n):
        for u, v in frame.rel[j]:
            uf.union(u, v)
    classes: dict[World, set] = {}
    for w in frame.worlds:
        classes.setdefault(uf.find(w), set()).add(w)
    return sorted((frozenset(c) for c in classes.values()), key=lambda c: min(c))


def check_hl_planes(frame: FiniteFrame) -> FrameReport:
    """Plane characterization of hereditary linearity: one 0-plane, and for each
    ``k`` the relation ``<k`` respects ``(k+1)``-planes and strictly linearly
    orders the ``(k+1)``-planes inside every ``k``-plane."""
    prop = "hl_planes"
    if not frame.worlds:
        return _ok(prop)
    top = planes_partition(frame, 0)
    if len(top) != 1:
        return _fail(prop, (min(top[0]), min(top[1])), "more than one 0-plane")
    for k in range(frame.n):
        finer = planes_partition(frame, k + 1)
        cls = {w: i for i, c in enumerate(finer) for w in c}
        edges: set[tuple[int, int]] = set()
        for u, v in sorted(frame.rel[k]):
            if cls[u] == cls[v]:
                return _fail(prop, (u, v), f"rel[{k}] inside a single {k + 1}-plane")
            edges.add((cls[u], cls[v]))
        for a, b in sorted(edges):
            for u, v in product(sorted(finer[a]), sorted(finer[b])):
                if (u, v) not in frame.rel[k]:
                    return _fail(prop, (u, v), f"rel[{k}] not compatible with {k + 1}-planes")
        for plane in planes_partition(frame, k):
            inner = sorted({cls[w] for w in plane})
            for i, a in enumerate(inner):
                for b in inner[i + 1:]:
                    fwd, back = (a, b) in edges, (b, a) in edges
                    if fwd == back:
                        wa, wb = min(finer[a]), min(finer[b])
                        what = "incomparable" if not fwd else "mutually related"
                        return _fail(prop, (wa, wb), f"{k + 1}-planes {what} under rel[{k}]")
            for a, b in sorted(edges):
                if a in inner:
                    for c in inner:
                        if (b, c) in edges and (a, c) not in edges:
                            return _fail(
                                prop,
                                (min(finer[a]), min(finer[b]), min(finer[c])),
                                f"rel[{k}] not transitive on {k + 1}-planes",
                            )
    return _ok(prop)


def find_root(frame: FiniteFrame) -> Optional[World]:
    """The unique world from which every other world is accessible, if any."""
    roots = [
        w for w in frame.worlds
        if all(v == w or any(v in frame.successors(k, w) for k in range(frame.n)) for v in frame.worlds)
    ]
    return roots[0] if len(roots) == 1 else None
