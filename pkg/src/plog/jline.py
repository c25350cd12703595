"""Finite hereditarily linear J-frames ("J-lines") and the GLP.3 / J.lin deciders.

A shape for ``n`` modalities is a nonempty ordered sequence of shapes for
``n - 1`` modalities (its 1-planes, root side first); the shape for zero
modalities is a single leaf.  Worlds are root-to-leaf index tuples, rendered
dotted (``"0.1"``), and ``x R_k y`` iff ``x`` and ``y`` agree below ``k`` and
``y[k] > x[k]``.  The root is the all-zero tuple.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping, Optional

from . import _typesearch
from .formula import Formula, Not, box_normalize, conj, m_plus, modal_count, modal_signature, variables
from .kripke import FiniteFrame, World, eval_at, extension

DEFAULT_CAP = 5000


def default_cap() -> int:
    """The search budget, overridable through ``PLOG_CAP``."""
    raw = os.environ.get("PLOG_CAP")
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("PLOG_CAP must be a positive integer")
    return cap


@dataclass(frozen=True)
class JLineShape:
    children: tuple["JLineShape", ...] = ()

    @property
    def depth(self) -> int:
        return 0 if not self.children else 1 + self.children[0].depth

    def paths(self) -> list[tuple[int, ...]]:
        if not self.children:
            return [()]
        return [(i,) + p for i, c in enumerate(self.children) for p in c.paths()]

    def size(self) -> int:
        return 1 if not self.children else sum(c.size() for c in self.children)

    def validate(self) -> "JLineShape":
        d = {c.validate().depth for c in self.children}
        if len(d) > 1:
            raise ValueError("J-line shapes must have uniform depth")
        return self

    def __str__(self) -> str:
        if not self.children:
            return "."
        return "[" + " ".join(str(c) for c in self.children) + "]"


LEAF = JLineShape()


def chain(length: int, n: int = 1) -> JLineShape:
    """``length`` worlds in a single ``rel[n-1]``-chain (one plane at every lower level)."""
    if n < 1 or length < 1:
        raise ValueError("chain needs n >= 1 and length >= 1")
    inner = JLineShape((LEAF,) * length)
    for _ in range(n - 1):
        inner = JLineShape((inner,))
    return inner


def world_name(path: tuple[int, ...]) -> World:
    return ".".join(str(i) for i in path)


def world_path(name: World) -> tuple[int, ...]:
    return tuple(int(x) for x in name.split(".")) if name else ()


def root_world(s: JLineShape) -> World:
    return world_name((0,) * s.depth)


def materialize(s: JLineShape) -> FiniteFrame:
    s.validate()
    n = s.depth
    paths = s.paths()
    rel = []
    for k in range(n):
        rel.append(frozenset(
            (world_name(x), world_name(y))
            for x in paths for y in paths
            if x[:k] == y[:k] and y[k] > x[k]
        ))
    return FiniteFrame(n, tuple(world_name(p) for p in paths), tuple(rel))


def shapes_of_size(n: int, size: int) -> Iterator[JLineShape]:
    """All shapes with exactly ``size`` worlds, one per isomorphism class."""
    if n == 0:
        if size == 1:
            yield LEAF
        return
    for parts in _compositions(size):
        for kids in product(*(list(shapes_of_size(n - 1, p)) for p in parts)):
            yield JLineShape(tuple(kids))


def _compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def enumerate_jlines(n: int, max_worlds: int) -> Iterator[JLineShape]:
    if n < 1:
        raise ValueError("n must be at least 1")
    for s in range(1, max_worlds + 1):
        yield from shapes_of_size(n, s)


def jline_size_bound(f: Formula, n: int) -> int:
    if n < 1:
        raise ValueError("n must be at least 1")
    k = modal_count(f)
    return max(1, (k + 1) * k ** (n - 1))


def shape_of_frame(frame: FiniteFrame) -> tuple[JLineShape, dict[World, World]]:
    """Recover the shape of a hereditarily linear J-frame, with the map from
    its worlds to the canonical dotted names."""
    from .kripke import check_hl_planes, check_j_frame, planes_partition

    for rep in (check_j_frame(frame), check_hl_planes(frame)):
        if not rep.holds:
            raise ValueError(f"not a J-line: {rep.detail} at {rep.witness}")
    if not frame.worlds:
        raise ValueError("empty frame")
    parts = [planes_partition(frame, k) for k in range(frame.n + 1)]
    mapping: dict[World, World] = {}

    def build(ws: frozenset, k: int, prefix: tuple[int, ...]) -> JLineShape:
        if k == frame.n:
            (w,) = ws
            mapping[w] = world_name(prefix)
            return LEAF
        groups = [p & ws for p in parts[k + 1] if p & ws]
        # a plane earlier in the order sees every later one under rel[k]
        seen = {min(g): sum(1 for h in groups if (min(g), min(h)) in frame.rel[k]) for g in groups}
        groups.sort(key=lambda g: -seen[min(g)])
        return JLineShape(tuple(build(g, k + 1, prefix + (i,)) for i, g in enumerate(groups)))

    return build(frozenset(frame.worlds), 0, ()), mapping


# ---------------------------------------------------------------------------
# Deciders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Countermodel:
    shape: JLineShape
    valuation: Mapping[str, frozenset]
    root: World

    def frame(self) -> FiniteFrame:
        return materialize(self.shape)

    def size(self) -> int:
        return self.shape.size()


@dataclass(frozen=True)
class Verdict:
    status: str  # "theorem" | "refuted" | "inconclusive"
    countermodel: Optional[Countermodel] = None
    bound_used: int = 0
    explored: int = 0


ENGINES = ("types", "enumerate")


def glp3_target(f: Formula, n: Optional[int] = None) -> tuple[Formula, int]:
    """The formula a GLP.3 countermodel must satisfy at its root, and the
    number of modalities used."""
    least = max(1, modal_signature(f))
    if n is None:
        n = least
    elif n < least:
        raise ValueError(f"n={n} is below the signature of the formula")
    neg = box_normalize(Not(f))
    return conj([neg, m_plus(neg, n)]), n


def glp3_decide(f: Formula, cap: Optional[int] = None, engine: str = "types", n: Optional[int] = None) -> Verdict:
    """Theoremhood in GLP.3: look for a J-line whose root satisfies
    ``~f & M+(~f)``.  ``n`` defaults to the signature of ``f`` (at least 1)."""
    target, n = glp3_target(f, n)
    return _decide(target, n, cap, engine)


def jlin_satisfy(f: Formula, n: int, cap: Optional[int] = None, engine: str = "types") -> Verdict:
    """Satisfiability over J-lines.  ``refuted`` means a satisfying model was
    found; ``theorem`` means ``f`` is unsatisfiable."""
    if n < max(1, modal_signature(f)):
        raise ValueError(f"n={n} is below the signature of the formula")
    return _decide(box_normalize(f), n, cap, engine)


def _decide(target: Formula, n: int, cap: Optional[int], engine: str) -> Verdict:
    # Only roots are inspected: a world satisfying the target generates a
    # J-line of its own, rooted at that world, which is met first by size.
    cap = default_cap() if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be positive")
    bound = jline_size_bound(target, n)
    if engine == "types":
        res = _typesearch.minimal_root_model(target, n, cap)
        if res.exhausted:
            return Verdict("inconclusive", None, bound, res.explored)
        if res.model is None:
            return Verdict("theorem", None, bound, res.explored)
        shape, val = res.model
        return Verdict("refuted", _countermodel(target, shape, val), bound, res.explored)
    if engine == "enumerate":
        return _enumerate_decide(target, n, cap, bound)
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def _countermodel(target: Formula, shape: JLineShape, val: Mapping[tuple, frozenset]) -> Countermodel:
    names = {v: frozenset(world_name(p) for p in ps) for v, ps in val.items()}
    for v in variables(target):
        names.setdefault(v, frozenset())
    cm = Countermodel(shape, dict(sorted(names.items())), root_world(shape))
    if not eval_at(cm.frame(), cm.valuation, cm.root, target):
        raise AssertionError("search engine produced a model that fails re-evaluation")
    return cm


def _enumerate_decide(target: Formula, n: int, cap: int, bound: int) -> Verdict:
    """Plain search over shapes by size, then valuations; the reference engine."""
    vs = sorted(variables(target))
    probes = 0
    for size in range(1, bound + 1):
        for shape in shapes_of_size(n, size):
            frame = materialize(shape)
            ws = frame.worlds
            for masks in product(range(1 << len(ws)), repeat=len(vs)):
                choice = [frozenset(w for i, w in enumerate(ws) if m >> i & 1) for m in masks]
                probes += 1
                if probes > cap:
                    return Verdict("inconclusive", None, bound, probes - 1)
                val = dict(zip(vs, choice))
                if root_world(shape) in extension(frame, val, target):
                    return Verdict("refuted", Countermodel(shape, val, root_world(shape)), bound, probes)
    return Verdict("theorem", None, bound, probes)
