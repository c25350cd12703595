"""Ignatiev's frame and a symbolic decision procedure for closed formulas.

Points are sequences of ordinals ``x`` with ``x[i+1] <= log x[i]``, padded
with zeros and stored without trailing zeros.  ``u R_m v`` iff ``u`` and
``v`` agree below ``m`` and ``v[m] < u[m]`` (accessibility decreases the
ordinal, so every relation is converse wellfounded).

Definable sets are unions of *cells*: boxes ``lo_i <= x_i < hi_i`` on the
first ``d`` coordinates, intersected with the frame.  A cell is nonempty iff
the backward recursion ``nu_d = 0``, ``nu_i = least v >= lo_i with
log v >= nu_{i+1}`` stays below every ``hi_i``; then ``(nu_0, ..., nu_{d-1})``
is its least point and ``lo_i := nu_i`` is an exact tightening.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

from .formula import (
    BOT,
    TOP,
    And,
    Box,
    Dia,
    Formula,
    Imp,
    Not,
    Or,
    Top,
    Var,
    Worm,
    is_closed,
)
from .ordinal import (
    ZERO,
    Ordinal,
    least_with_log_at_least,
    least_with_log_equal,
    ord_log,
    ord_render,
    ord_succ,
)

Bound = tuple[Ordinal, Optional[Ordinal]]  # [lo, hi), hi None = unbounded


def _below(v: Ordinal, hi: Optional[Ordinal]) -> bool:
    return hi is None or v < hi


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


class IgPointError(ValueError):
    def __init__(self, index: int, message: str):
        super().__init__(f"index {index}: {message}")
        self.index = index


@dataclass(frozen=True)
class IgPoint:
    coords: tuple[Ordinal, ...] = ()

    def __post_init__(self) -> None:
        cs = tuple(self.coords)
        for i in range(1, len(cs)):
            if ord_log(cs[i - 1]) < cs[i]:
                raise IgPointError(i, f"{cs[i]} exceeds log {cs[i - 1]} = {ord_log(cs[i - 1])}")
        while cs and cs[-1].is_zero():
            cs = cs[:-1]
        object.__setattr__(self, "coords", cs)

    def coord(self, i: int) -> Ordinal:
        return self.coords[i] if i < len(self.coords) else ZERO

    def __str__(self) -> str:
        return "(" + ", ".join(ord_render(c) for c in self.coords) + ")"


def ig_validate(coords: Sequence[Ordinal]) -> IgPoint:
    return IgPoint(tuple(coords))


def delta_point(iota: Ordinal) -> IgPoint:
    """The main-axis point ``(iota, log iota, log log iota, ...)``."""
    cs = []
    x = iota
    while not x.is_zero():
        cs.append(x)
        x = ord_log(x)
    return IgPoint(tuple(cs))


# ---------------------------------------------------------------------------
# Cells
# ---------------------------------------------------------------------------


def _least_supports(bounds: Sequence[Bound]) -> Optional[list[Ordinal]]:
    """``nu_i`` for every constrained coordinate, or None if the cell is empty."""
    out: list[Ordinal] = [ZERO] * len(bounds)
    nu = ZERO
    for i in range(len(bounds) - 1, -1, -1):
        lo, hi = bounds[i]
        v = least_with_log_at_least(lo, nu)
        if not _below(v, hi):
            return None
        out[i] = nu = v
    return out


@dataclass(frozen=True)
class Cell:
    bounds: tuple[Bound, ...] = ()

    @cached_property
    def text(self) -> str:
        return render_cell(self)

    def padded(self, d: int) -> tuple[Bound, ...]:
        return self.bounds + ((ZERO, None),) * (d - len(self.bounds))

    def least_point(self) -> Optional[IgPoint]:
        nus = _least_supports(self.bounds)
        return None if nus is None else IgPoint(tuple(nus))

    def is_empty(self) -> bool:
        return _least_supports(self.bounds) is None

    def contains(self, p: IgPoint) -> bool:
        return all(lo <= p.coord(i) and _below(p.coord(i), hi) for i, (lo, hi) in enumerate(self.bounds))


def _canonical(bounds: Sequence[Bound]) -> Optional[Cell]:
    nus = _least_supports(bounds)
    if nus is None:
        return None
    tight = [(nu, hi) for nu, (_, hi) in zip(nus, bounds)]
    while tight and tight[-1][0].is_zero() and tight[-1][1] is None:
        tight.pop()
    return Cell(tuple(tight))


def _subsumes(big: Cell, small: Cell) -> bool:
    d = max(len(big.bounds), len(small.bounds))
    for (blo, bhi), (slo, shi) in zip(big.padded(d), small.padded(d)):
        if slo < blo:
            return False
        if bhi is not None and (shi is None or bhi < shi):
            return False
    return True


def _merge(a: Cell, b: Cell) -> Optional[Cell]:
    """The union of two cells differing in one coordinate, if it is a cell."""
    d = max(len(a.bounds), len(b.bounds))
    pa, pb = a.padded(d), b.padded(d)
    diff = [i for i in range(d) if pa[i] != pb[i]]
    if len(diff) != 1:
        return None
    i = diff[0]
    (alo, ahi), (blo, bhi) = pa[i], pb[i]
    if not (_below(blo, ahi) or blo == ahi) or not (_below(alo, bhi) or alo == bhi):
        return None
    lo = min(alo, blo)
    hi = None if ahi is None or bhi is None else max(ahi, bhi)
    return _canonical(pa[:i] + ((lo, hi),) + pa[i + 1:])


@dataclass(frozen=True)
class CellSet:
    cells: tuple[Cell, ...] = ()

    def is_empty(self) -> bool:
        return not self.cells

    def __iter__(self):
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __str__(self) -> str:
        return render_cellset(self)


def make_cellset(cells: Iterable[Cell | Sequence[Bound]]) -> CellSet:
    """Canonical form: nonempty tightened cells, no subsumed cells, adjacent
    intervals merged, sorted by rendering."""
    work: list[Cell] = []
    for c in cells:
        bounds = c.bounds if isinstance(c, Cell) else tuple(c)
        cc = _canonical(bounds)
        if cc is not None:
            work.append(cc)
    work = list(dict.fromkeys(work))
    changed = True
    while changed:
        changed = False
        keep: list[Cell] = []
        for i, c in enumerate(work):
            if any((j < i or not _subsumes(c, o)) and _subsumes(o, c) for j, o in enumerate(work) if j != i):
                changed = True
                continue
            keep.append(c)
        work = keep
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                m = _merge(work[i], work[j])
                if m is not None:
                    work = [c for k, c in enumerate(work) if k not in (i, j)] + [m]
                    changed = True
                    break
            if changed:
                break
    return CellSet(tuple(sorted(work, key=lambda c: c.text)))


WHOLE = CellSet((Cell(),))
EMPTY = CellSet()


def cell(*bounds: Bound) -> CellSet:
    return make_cellset([bounds])


def union(a: CellSet, b: CellSet) -> CellSet:
    return make_cellset(a.cells + b.cells)


def _intersect_cells(a: Cell, b: Cell) -> tuple[Bound, ...]:
    d = max(len(a.bounds), len(b.bounds))
    out = []
    for (alo, ahi), (blo, bhi) in zip(a.padded(d), b.padded(d)):
        hi = bhi if ahi is None else ahi if bhi is None else min(ahi, bhi)
        out.append((max(alo, blo), hi))
    return tuple(out)


def intersect(a: CellSet, b: CellSet) -> CellSet:
    return make_cellset(_intersect_cells(x, y) for x in a for y in b)


def _complement_cell(c: Cell) -> list[tuple[Bound, ...]]:
    out = []
    for i, (lo, hi) in enumerate(c.bounds):
        prefix = c.bounds[:i]
        if not lo.is_zero():
            out.append(prefix + ((ZERO, lo),))
        if hi is not None:
            out.append(prefix + ((hi, None),))
    return out


def complement(a: CellSet) -> CellSet:
    result = WHOLE
    for c in a:
        result = intersect(result, make_cellset(_complement_cell(c)))
        if result.is_empty():
            break
    return result


def difference(a: CellSet, b: CellSet) -> CellSet:
    return intersect(a, complement(b))


def is_empty(a: CellSet) -> bool:
    return a.is_empty()


def equals(a: CellSet, b: CellSet) -> bool:
    return difference(a, b).is_empty() and difference(b, a).is_empty()


def member(p: IgPoint, a: CellSet) -> bool:
    return any(c.contains(p) for c in a)


def diamond(m: int, a: CellSet) -> CellSet:
    """Points with an ``m``-successor in ``a``: the coordinates below ``m``
    are shared, and ``x_m`` must exceed the least feasible ``y_m``."""
    out = []
    for c in a:
        pad = c.padded(m + 1)
        mu = pad[m][0]  # canonical cells are tight, so lo is the least feasible value
        out.append(pad[:m] + ((ord_succ(mu), None),))
    return make_cellset(out)


def singleton(p: IgPoint) -> CellSet:
    if not p.coords:
        return cell((ZERO, ORD_ONE))
    return cell(*((x, ord_succ(x)) for x in p.coords))


ORD_ONE = ord_succ(ZERO)


def segment(iota: Ordinal) -> CellSet:
    """``Ig_iota``: points whose first coordinate is at most ``iota``."""
    return cell((ZERO, ord_succ(iota)))


# ---------------------------------------------------------------------------
# Truth sets and decisions
# ---------------------------------------------------------------------------


class NotClosedError(ValueError):
    pass


@lru_cache(maxsize=None)
def closed_truthset(f: Formula) -> CellSet:
    if isinstance(f, Top):
        return WHOLE
    if isinstance(f, Var):
        raise NotClosedError(f"formula mentions variable {f.name!r}")
    if isinstance(f, Not):
        return complement(closed_truthset(f.sub))
    if isinstance(f, And):
        return intersect(closed_truthset(f.left), closed_truthset(f.right))
    if isinstance(f, Or):
        return union(closed_truthset(f.left), closed_truthset(f.right))
    if isinstance(f, Imp):
        return union(complement(closed_truthset(f.left)), closed_truthset(f.right))
    if isinstance(f, Dia):
        return diamond(f.index, closed_truthset(f.sub))
    if isinstance(f, Box):
        return complement(diamond(f.index, complement(closed_truthset(f.sub))))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class ClosedVerdict:
    status: str  # "theorem" | "refuted"
    witness: Optional[IgPoint] = None


def glp_closed_decide(f: Formula) -> ClosedVerdict:
    """A closed formula is a GLP theorem iff it holds everywhere in the frame;
    otherwise the witness is a point where it fails."""
    if not is_closed(f):
        raise NotClosedError("glp_closed_decide needs a closed formula")
    bad = closed_truthset(Not(f))
    if bad.is_empty():
        return ClosedVerdict("theorem")
    return ClosedVerdict("refuted", bad.cells[0].least_point())


def _least_axis_value(bounds: tuple[Bound, ...], i: int, a: Ordinal, b: Optional[Ordinal]) -> Optional[Ordinal]:
    """Least ``v`` in ``[a, b)`` within the cell's interval at ``i`` whose
    log-chain ``(v, log v, ...)`` meets every later constraint."""
    if i >= len(bounds):
        return a if _below(a, b) else None
    lo, hi = bounds[i]
    a = max(a, lo)
    if hi is not None:
        b = hi if b is None else min(b, hi)
    if not _below(a, b):
        return None

    def log_ok(beta: Ordinal) -> bool:
        return _least_axis_value(bounds, i + 1, beta, ord_succ(beta)) is not None

    cands: list[Ordinal] = []
    if a.is_zero():
        if log_ok(ZERO):
            cands.append(ZERO)
        beta = _least_axis_value(bounds, i + 1, ZERO, None)
        if beta is not None:
            cands.append(Ordinal(((beta, 1),)))
    else:
        terms = a.terms
        exps = [e for e, _ in terms]
        # log above the leading exponent: v = w^beta
        beta = _least_axis_value(bounds, i + 1, ord_succ(exps[0]), None)
        if beta is not None:
            cands.append(Ordinal(((beta, 1),)))
        for j, e in enumerate(exps):
            if log_ok(e):
                cands.append(least_with_log_equal(a, e))
            # log strictly between this exponent and the next one
            lower = exps[j + 1] if j + 1 < len(exps) else None
            start = ZERO if lower is None else ord_succ(lower)
            beta = _least_axis_value(bounds, i + 1, start, e)
            if beta is not None:
                cands.append(least_with_log_equal(a, beta))
    good = [v for v in cands if _below(v, b)]
    return min(good) if good else None


def axis_witness(f: Formula) -> Optional[Ordinal]:
    """The least ``iota`` such that the main-axis point ``delta_iota`` satisfies ``f``."""
    best: Optional[Ordinal] = None
    for c in closed_truthset(f):
        v = _least_axis_value(c.bounds, 0, ZERO, None)
        if v is not None and (best is None or v < best):
            best = v
    if best is not None and not member(delta_point(best), closed_truthset(f)):
        raise AssertionError(f"axis search returned {best}, which is not a member")
    return best


def worm_ordinal(w: Worm) -> Ordinal:
    iota = axis_witness(w.to_formula())
    if iota is None:
        raise AssertionError(f"worm {w} has no point on the main axis")
    return iota


def _worm_indices(iota: Ordinal) -> tuple[int, ...]:
    if iota.is_zero():
        return ()
    *rest_terms, (alpha, coeff) = iota.terms
    rest = Ordinal(tuple(rest_terms) + (((alpha, coeff - 1),) if coeff > 1 else ()))
    head = tuple(i + 1 for i in _worm_indices(alpha))
    if rest.is_zero() and not alpha.is_zero():
        return head
    return head + (0,) + _worm_indices(rest)


def ordinal_worm(iota: Ordinal) -> Worm:
    w = Worm(_worm_indices(iota))
    got = worm_ordinal(w)
    if got != iota:
        raise AssertionError(f"worm {w} for {iota} evaluates to {got}")
    return w


class DefiningFormulaError(AssertionError):
    pass


@lru_cache(maxsize=None)
def axis_defining_formula(iota: Ordinal) -> Formula:
    """A closed formula true exactly at ``delta_iota``."""
    if iota.is_zero():
        f = Box(0, BOT)
    else:
        a = ordinal_worm(iota).to_formula()
        f = And(a, Box(0, Not(a)))
    if not equals(closed_truthset(f), singleton(delta_point(iota))):
        raise DefiningFormulaError(f"defining formula for {iota} does not isolate the axis point")
    return f


def iterate_dia(index: int, k: int, body: Formula = TOP) -> Formula:
    for _ in range(k):
        body = Dia(index, body)
    return body


class InconsistentError(ValueError):
    pass


def cover_k(f: Formula, n: int, max_k: int = 64) -> int:
    """Least ``k`` with ``<n-1>^k T -> <0>f`` a GLP theorem."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if glp_closed_decide(Not(f)).status == "theorem":
        raise InconsistentError("formula is inconsistent with GLP")
    for k in range(max_k + 1):
        if glp_closed_decide(Imp(iterate_dia(n - 1, k), Dia(0, f))).status == "theorem":
            return k
    raise RuntimeError(f"no k <= {max_k} found")


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render_cell(c: Cell) -> str:
    if not c.bounds:
        return "x0 in [0,∞)"
    parts = []
    for i, (lo, hi) in enumerate(c.bounds):
        h = "∞" if hi is None else ord_render(hi, compact=True)
        parts.append(f"x{i} in [{ord_render(lo, compact=True)},{h})")
    return " ; ".join(parts)


def render_cellset(a: CellSet) -> str:
    return "\n".join(c.text for c in a) if a.cells else "empty"

