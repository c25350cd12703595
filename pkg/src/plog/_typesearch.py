"""Minimal rooted J-line models by dynamic programming over world types.

In a J-line, ``[k]g`` holds at ``x`` iff ``g`` holds throughout the later
siblings of ``x``'s depth-``k`` ancestor.  So a world's truth values are fixed
by its own atoms plus, for each ``k``, the set of box bodies falsified
somewhere in those siblings (its *context*).  A subtree is summarised by the
set of box bodies it falsifies.  For each level and context we compute every
achievable summary together with the fewest worlds achieving it; the search
space is finite, and the result is a model of least size.

Bit sets index the distinct box bodies of the (box-normalized) target.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

from .formula import And, Box, Dia, Formula, Imp, Not, Or, Top, Var, ordered_subformulas, variables


class _Exhausted(Exception):
    pass


@dataclass
class SearchResult:
    model: Optional[tuple]  # (JLineShape, {var: frozenset of index tuples})
    explored: int
    exhausted: bool = False


class _Program:
    """The target compiled to a straight-line evaluator."""

    def __init__(self, target: Formula, n: int):
        if any(isinstance(g, Dia) for g in ordered_subformulas(target)):
            raise ValueError("target must be box-normalized")
        self.n = n
        self.vars = sorted(variables(target))
        nodes = ordered_subformulas(target)
        idx = {g: i for i, g in enumerate(nodes)}
        bodies: list[Formula] = []
        for g in nodes:
            if isinstance(g, Box) and g.sub not in bodies:
                bodies.append(g.sub)
        self.body_bit = {b: 1 << i for i, b in enumerate(bodies)}
        self.body_node = [(idx[b], 1 << i) for i, b in enumerate(bodies)]
        self.masks = [0] * n
        ops = []
        for g in nodes:
            if isinstance(g, Top):
                ops.append(("T",))
            elif isinstance(g, Var):
                ops.append(("V", self.vars.index(g.name)))
            elif isinstance(g, Not):
                ops.append(("N", idx[g.sub]))
            elif isinstance(g, (And, Or, Imp)):
                ops.append((type(g).__name__[0], idx[g.left], idx[g.right]))
            else:
                if g.index >= n:
                    raise ValueError("target signature exceeds n")
                bit = self.body_bit[g.sub]
                self.masks[g.index] |= bit
                ops.append(("B", g.index, bit))
        self.ops = ops
        self.root = idx[target]
        self.keep = []
        acc = 0
        for m in self.masks:
            acc |= m
            self.keep.append(acc)

    def run(self, atoms: int, ctx: tuple[int, ...]) -> tuple[bool, int]:
        """Truth of the target and the falsified-bodies set at one world."""
        vals: list[bool] = []
        push = vals.append
        for op in self.ops:
            t = op[0]
            if t == "T":
                push(True)
            elif t == "V":
                push(bool(atoms >> op[1] & 1))
            elif t == "N":
                push(not vals[op[1]])
            elif t == "A":
                push(vals[op[1]] and vals[op[2]])
            elif t == "O":
                push(vals[op[1]] or vals[op[2]])
            elif t == "I":
                push((not vals[op[1]]) or vals[op[2]])
            else:
                push(not (ctx[op[1]] & op[2]))
        falsified = 0
        for node, bit in self.body_node:
            if not vals[node]:
                falsified |= bit
        return vals[self.root], falsified


class _Search:
    def __init__(self, prog: _Program, cap: int):
        self.p = prog
        self.cap = cap
        self.explored = 0
        self.ach: dict[tuple, dict[int, tuple]] = {}
        self.best: dict[tuple, Optional[tuple]] = {}

    def tick(self) -> None:
        self.explored += 1
        if self.explored > self.cap:
            raise _Exhausted

    def achievable(self, ctx: tuple[int, ...]) -> dict[int, tuple]:
        """Summary -> (cost, how) for a subtree at depth ``len(ctx)``."""
        got = self.ach.get(ctx)
        if got is not None:
            return got
        k = len(ctx)
        out: dict[int, tuple] = {}
        if k == self.p.n:
            for atoms in range(1 << len(self.p.vars)):
                self.tick()
                _, s = self.p.run(atoms, ctx)
                if s not in out:
                    out[s] = (1, atoms)
        else:
            keep, mask = self.p.keep[k], self.p.masks[k]
            # Children are added from last to first; state = union of the
            # summaries of the children placed so far (None: no child yet).
            dist: dict = {None: 0}
            parent: dict = {}
            heap = [(0, -1, None)]
            while heap:
                cost, _, u = heapq.heappop(heap)
                if cost > dist.get(u, cost):
                    continue
                self.tick()
                if u is not None:
                    out[u] = (cost, parent[u])
                sub = self.achievable(ctx + ((u or 0) & mask,))
                for s, (c, _) in sub.items():
                    v = ((u or 0) | s) & keep
                    nc = cost + c
                    if v not in dist or nc < dist[v]:
                        dist[v] = nc
                        parent[v] = (u, s)
                        heapq.heappush(heap, (nc, v, v))
        self.ach[ctx] = out
        return out

    def subtree(self, ctx: tuple[int, ...], summary: int):
        """Rebuild (shape, [(path, atoms)]) for an achievable summary."""
        from .jline import LEAF, JLineShape

        cost, how = self.ach[ctx][summary]
        if len(ctx) == self.p.n:
            return LEAF, [((), how)]
        kids, leaves = [], []
        u = summary
        while u is not None:
            prev, s = self.ach[ctx][u][1]
            shape, ls = self.subtree(ctx + ((prev or 0) & self.p.masks[len(ctx)],), s)
            leaves.extend(((len(kids),) + path, a) for path, a in ls)
            kids.append(shape)
            u = prev
        return JLineShape(tuple(kids)), leaves

    def rooted(self, ctx: tuple[int, ...]) -> Optional[tuple]:
        """(cost, atoms, choices) for the cheapest model whose root has the
        given outer context and satisfies the target."""
        if ctx in self.best:
            return self.best[ctx]
        k = len(ctx)
        result = None
        if k == self.p.n:
            for atoms in range(1 << len(self.p.vars)):
                self.tick()
                ok, _ = self.p.run(atoms, ctx)
                if ok:
                    result = (1, atoms, ())
                    break
        else:
            options = [(0, None)] + sorted((c, u) for u, (c, _) in self.achievable(ctx).items())
            for c, u in options:
                if result is not None and c >= result[0]:
                    break
                sub = self.rooted(ctx + ((u or 0) & self.p.masks[k],))
                if sub is not None and (result is None or c + sub[0] < result[0]):
                    result = (c + sub[0], sub[1], ((u, ctx),) + sub[2])
        self.best[ctx] = result
        return result

    def rebuild(self, found: tuple):
        from .jline import LEAF, JLineShape

        _, root_atoms, choices = found
        shape = LEAF
        leaves = [((), root_atoms)]
        for u, ctx in reversed(choices):
            kids, new_leaves = [shape], [((0,) + p, a) for p, a in leaves]
            if u is not None:
                sib, sib_leaves = self.subtree(ctx, u)
                offset = 1
                kids.extend(sib.children)
                new_leaves.extend(((offset + p[0],) + p[1:], a) for p, a in sib_leaves)
            shape = JLineShape(tuple(kids))
            leaves = new_leaves
        val = {v: frozenset(p for p, a in leaves if a >> i & 1) for i, v in enumerate(self.p.vars)}
        return shape, val


def minimal_root_model(target: Formula, n: int, cap: int) -> SearchResult:
    """A least-size J-line (``n`` modalities) whose root satisfies ``target``."""
    search = _Search(_Program(target, n), cap)
    try:
        found = search.rooted(())
        model = None if found is None else search.rebuild(found)
    except _Exhausted:
        return SearchResult(None, search.cap, exhausted=True)
    return SearchResult(model, search.explored)
