"""Polymodal formulas: syntax tree, parser, printer and the guard constructions.

The grammar accepted by :func:`parse_formula`::

    formula := impl
    impl    := or ('->' impl)?          right associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | '[' nat ']' unary | '<' nat '>' unary | atom
    atom    := 'T' | 'F' | ident | '(' formula ')'

``F`` is sugar for ``~T`` and is also how ``~T`` is printed; identifiers are lowercase and ``w`` is reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


def _node_hash(self) -> int:
    # formulas are used heavily as memo keys; cache the recursive hash
    h = self.__dict__.get("_h")
    if h is None:
        h = hash((type(self).__name__,) + tuple(self.__dict__[k] for k in self.__dataclass_fields__))
        object.__setattr__(self, "_h", h)
    return h


@dataclass(frozen=True)
class Top:
    __hash__ = _node_hash

    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True)
class Var:
    name: str
    __hash__ = _node_hash


@dataclass(frozen=True)
class Not:
    sub: "Formula"
    __hash__ = _node_hash


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"
    __hash__ = _node_hash


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"
    __hash__ = _node_hash


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"
    __hash__ = _node_hash


@dataclass(frozen=True)
class Box:
    index: int
    sub: "Formula"
    __hash__ = _node_hash

    def __post_init__(self) -> None:
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"modality index must be a natural number, got {self.index!r}")


@dataclass(frozen=True)
class Dia:
    index: int
    sub: "Formula"
    __hash__ = _node_hash

    def __post_init__(self) -> None:
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"modality index must be a natural number, got {self.index!r}")


Formula = Union[Top, Var, Not, And, Or, Imp, Box, Dia]

TOP = Top()
BOT = Not(TOP)

_BINARY = (And, Or, Imp)
_MODAL = (Box, Dia)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; the empty conjunction is ``T``."""
    result = None
    for p in parts:
        result = p if result is None else And(result, p)
    return TOP if result is None else result


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-associated disjunction; the empty disjunction is ``F``."""
    result = None
    for p in parts:
        result = p if result is None else Or(result, p)
    return BOT if result is None else result


# ---------------------------------------------------------------------------
# Worms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Worm:
    """The closed formula ``<i1><i2>...<ik>T``; the empty worm is ``T``."""

    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", tuple(self.indices))
        if any(not isinstance(i, int) or i < 0 for i in self.indices):
            raise ValueError(f"worm indices must be natural numbers: {self.indices!r}")

    def to_formula(self) -> Formula:
        f: Formula = TOP
        for i in reversed(self.indices):
            f = Dia(i, f)
        return f

    @classmethod
    def from_formula(cls, f: Formula) -> "Worm":
        out = []
        while isinstance(f, Dia):
            out.append(f.index)
            f = f.sub
        if not isinstance(f, Top):
            raise ValueError("formula is not a worm")
        return cls(tuple(out))

    def shift(self, k: int = 1) -> "Worm":
        return Worm(tuple(i + k for i in self.indices))

    def __str__(self) -> str:
        return render_formula(self.to_formula())


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(->)|(\d+)|([a-z][a-z0-9_]*)|([TF])|([~&|\[\]<>()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FormulaSyntaxError("unexpected character", text, start)
        start = m.start(m.lastindex)
        arrow, nat, ident, const, punct = m.groups()
        if arrow:
            tokens.append(("->", arrow, start))
        elif nat:
            tokens.append(("nat", nat, start))
        elif ident:
            if ident == "w":
                raise FormulaSyntaxError("'w' is reserved", text, start)
            tokens.append(("ident", ident, start))
        elif const:
            tokens.append((const, const, start))
        else:
            tokens.append((punct, punct, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str) -> str:
        k, v, p = self.tokens[self.i]
        if k != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {v or 'end of input'!r}", self.text, p)
        self.i += 1
        return v

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.i += 1
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.i += 1
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        k = self.peek()
        if k == "~":
            self.i += 1
            return Not(self.unary())
        if k == "[":
            self.i += 1
            n = int(self.take("nat"))
            self.take("]")
            return Box(n, self.unary())
        if k == "<":
            self.i += 1
            n = int(self.take("nat"))
            self.take(">")
            return Dia(n, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        k, v, p = self.tokens[self.i]
        if k == "T":
            self.i += 1
            return TOP
        if k == "F":
            self.i += 1
            return BOT
        if k == "ident":
            self.i += 1
            return Var(v)
        if k == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        raise FormulaSyntaxError(f"unexpected {v or 'end of input'!r}", self.text, p)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.take("eof")
    return f


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}
_SYM = {Imp: " -> ", Or: " | ", And: " & "}


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "F" if isinstance(f.sub, Top) else "~" + _render(f.sub, 4)
    if isinstance(f, Box):
        return f"[{f.index}]" + _render(f.sub, 4)
    if isinstance(f, Dia):
        return f"<{f.index}>" + _render(f.sub, 4)
    prec = _PREC[type(f)]
    if isinstance(f, Imp):
        # right associative
        s = _render(f.left, prec + 1) + " -> " + _render(f.right, prec)
    else:
        s = _render(f.left, prec) + _SYM[type(f)] + _render(f.right, prec + 1)
    return f"({s})" if prec < ctx else s


def render_formula(f: Formula) -> str:
    return _render(f, 0)


# ---------------------------------------------------------------------------
# Structural operations
# ---------------------------------------------------------------------------


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Top, Var)):
        return ()
    if isinstance(f, (Not, Box, Dia)):
        return (f.sub,)
    return (f.left, f.right)


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def subformulas(f: Formula) -> frozenset[Formula]:
    return frozenset(iter_subformulas(f))


def ordered_subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents (deterministic)."""
    seen: dict[Formula, None] = {}

    def visit(g: Formula) -> None:
        if g in seen:
            return
        for c in children(g):
            visit(c)
        seen[g] = None

    visit(f)
    return list(seen)


def variables(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in iter_subformulas(f) if isinstance(g, Var))


def is_closed(f: Formula) -> bool:
    return not any(isinstance(g, Var) for g in iter_subformulas(f))


def modal_signature(f: Formula) -> int:
    """``1 + max`` modality index occurring in ``f``; 0 if modality-free."""
    return max((g.index + 1 for g in iter_subformulas(f) if isinstance(g, _MODAL)), default=0)


def modal_count(f: Formula) -> int:
    """Number of box and diamond occurrences."""
    return sum(1 for g in iter_subformulas(f) if isinstance(g, _MODAL))


def modal_depth(f: Formula) -> int:
    if isinstance(f, _MODAL):
        return 1 + modal_depth(f.sub)
    return max((modal_depth(c) for c in children(f)), default=0)


def size(f: Formula) -> int:
    return sum(1 for _ in iter_subformulas(f))


def map_children(f: Formula, fn) -> Formula:
    if isinstance(f, (Top, Var)):
        return f
    if isinstance(f, Not):
        return Not(fn(f.sub))
    if isinstance(f, Box):
        return Box(f.index, fn(f.sub))
    if isinstance(f, Dia):
        return Dia(f.index, fn(f.sub))
    return type(f)(fn(f.left), fn(f.right))


def box_normalize(f: Formula) -> Formula:
    """Rewrite every ``<m>g`` as ``~[m]~g``; everything else untouched."""
    if isinstance(f, Dia):
        return Not(Box(f.index, Not(box_normalize(f.sub))))
    return map_children(f, box_normalize)


def shift(f: Formula, k: int = 1) -> Formula:
    """Raise every modality index by ``k``."""
    if isinstance(f, Box):
        return Box(f.index + k, shift(f.sub, k))
    if isinstance(f, Dia):
        return Dia(f.index + k, shift(f.sub, k))
    return map_children(f, lambda g: shift(g, k))


def _check_signature(f: Formula, n: int) -> None:
    sig = modal_signature(f)
    if n < sig:
        raise ValueError(f"n = {n} is smaller than the modal signature {sig} of the formula")


def closure_sigma(f: Formula, n: int) -> frozenset[Formula]:
    """Least set containing the subformulas of ``f`` (box-normalized), closed
    under single negation of non-negations and under re-indexing boxes below ``n``."""
    _check_signature(f, n)
    sigma = set(subformulas(box_normalize(f)))
    frontier = list(sigma)
    while frontier:
        g = frontier.pop()
        new = []
        if not isinstance(g, Not):
            new.append(Not(g))
        if isinstance(g, Box):
            new.extend(Box(k, g.sub) for k in range(n))
        for h in new:
            if h not in sigma:
                sigma.add(h)
                frontier.append(h)
    return frozenset(sigma)


def box_subformulas(f: Formula) -> list[Box]:
    """Distinct box subformulas of the box-normalized ``f``, pre-order."""
    seen: dict[Box, None] = {}
    for g in iter_subformulas(box_normalize(f)):
        if isinstance(g, Box):
            seen.setdefault(g, None)
    return list(seen)


def m_guard(f: Formula, n: int) -> Formula:
    """Conjunction of ``[m]g -> [k]g`` over box subformulas ``[m]g`` and ``m < k < n``."""
    _check_signature(f, n)
    return conj(
        Imp(b, Box(k, b.sub))
        for b in box_subformulas(f)
        for k in range(b.index + 1, n)
    )


def m_plus(f: Formula, n: int) -> Formula:
    m = m_guard(f, n)
    return conj([m] + [Box(k, m) for k in range(n)])


def substitute_closed(f: Formula, subst: Mapping[str, Formula]) -> Formula:
    missing = variables(f) - set(subst)
    if missing:
        raise KeyError(f"substitution undefined on {sorted(missing)}")
    for name, g in subst.items():
        if not is_closed(g):
            raise ValueError(f"image of {name!r} is not closed")

    def go(g: Formula) -> Formula:
        if isinstance(g, Var):
            return subst[g.name]
        return map_children(g, go)

    return go(f)
