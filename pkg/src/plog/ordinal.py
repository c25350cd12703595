"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents and positive coefficients; the empty tuple is zero.

Text form: ``0``, ``5``, ``w``, ``w*3 + 1``, ``w^w + w^2*2``, ``w^(w+1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self) -> None:
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal):
                raise TypeError(f"exponent must be an Ordinal, got {exp!r}")
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"coefficients must be positive integers, got {coeff!r}")
            if prev is not None and not exp < prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp

    # -- construction -----------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def __int__(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- order ------------------------------------------------------------

    def __lt__(self, other: "Ordinal") -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return ord_cmp(self, other) < 0

    def __add__(self, other: "Ordinal") -> "Ordinal":
        if isinstance(other, int):
            other = Ordinal.from_int(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return ord_add(self, other)

    def __str__(self) -> str:
        return ord_render(self)

    def __repr__(self) -> str:
        return f"Ordinal({ord_render(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def ord_cmp(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1; lexicographic on the CNF term lists."""
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = ord_cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    if not a.terms:
        return b
    lead_exp, lead_coeff = b.terms[0]
    kept = [t for t in a.terms if not t[0] < lead_exp]
    if kept and kept[-1][0] == lead_exp:
        merged = (lead_exp, kept[-1][1] + lead_coeff)
        return Ordinal(tuple(kept[:-1]) + (merged,) + b.terms[1:])
    return Ordinal(tuple(kept) + b.terms)


def ord_sum(*parts: Ordinal) -> Ordinal:
    total = ZERO
    for p in parts:
        total = ord_add(total, p)
    return total


def ord_sub_left(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique ``c`` with ``a + c == b``; requires ``a <= b``."""
    if b < a:
        raise ValueError(f"{a} > {b}: no left difference")
    i = 0
    while i < len(a.terms) and i < len(b.terms) and a.terms[i] == b.terms[i]:
        i += 1
    if i == len(a.terms) or i == len(b.terms):
        return Ordinal(b.terms[i:])
    (ea, ca), (eb, cb) = a.terms[i], b.terms[i]
    if ea < eb:
        return Ordinal(b.terms[i:])
    # same exponent, smaller coefficient in a; a's tail is absorbed
    return Ordinal(((eb, cb - ca),) + b.terms[i + 1:])


def ord_omega_pow(a: Ordinal) -> Ordinal:
    return Ordinal(((a, 1),))


def ord_log(a: Ordinal) -> Ordinal:
    """Exponent of the last CNF term; ``log 0`` is taken to be 0."""
    return a.terms[-1][0] if a.terms else ZERO


def ord_succ(a: Ordinal) -> Ordinal:
    return ord_add(a, ONE)


def least_with_log_at_least(lo: Ordinal, nu: Ordinal) -> Ordinal:
    """Least ``v >= lo`` with ``ord_log(v) >= nu`` (and ``v > 0`` when ``nu > 0``).

    Equivalently the least nonzero multiple of ``w^nu`` that is ``>= lo``.
    """
    if nu.is_zero():
        return lo
    if lo.terms and not ord_log(lo) < nu:
        return lo
    prefix = tuple(t for t in lo.terms if not t[0] < nu)
    return ord_add(Ordinal(prefix), ord_omega_pow(nu))


def least_with_log_equal(lo: Ordinal, beta: Ordinal) -> Ordinal:
    """Least ``v >= lo`` with ``v > 0`` and ``ord_log(v) == beta``."""
    above = tuple(t for t in lo.terms if beta < t[0])
    at = [c for e, c in lo.terms if e == beta]
    below = [t for t in lo.terms if t[0] < beta]
    if at and not below:
        return lo
    c = at[0] if at else 0
    return Ordinal(above + ((beta, c + 1),))


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------


class OrdinalSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


_OTOK = re.compile(r"\s*(?:(\d+)|(w)|([+*^()]))")


class _OrdParser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text) and text[pos:].strip():
            m = _OTOK.match(text, pos)
            if m is None:
                raise OrdinalSyntaxError("unexpected character", text, pos)
            self.toks.append((m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.toks.append(("", len(text)))
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, tok: str | None = None) -> str:
        t, p = self.toks[self.i]
        if tok is not None and t != tok:
            raise OrdinalSyntaxError(f"expected {tok!r}, found {t or 'end of input'!r}", self.text, p)
        if t == "":
            raise OrdinalSyntaxError("unexpected end of input", self.text, p)
        self.i += 1
        return t

    def ordinal(self) -> Ordinal:
        total = self.term()
        while self.peek() == "+":
            self.take()
            total = ord_add(total, self.term())
        return total

    def nat(self) -> int:
        t, p = self.toks[self.i]
        if not t.isdigit():
            raise OrdinalSyntaxError(f"expected a natural number, found {t or 'end of input'!r}", self.text, p)
        self.i += 1
        return int(t)

    def term(self) -> Ordinal:
        t = self.peek()
        if t.isdigit():
            return Ordinal.from_int(self.nat())
        self.take("w")
        exp = ONE
        if self.peek() == "^":
            self.take()
            exp = self.expfactor()
        coeff = 1
        if self.peek() == "*":
            self.take()
            coeff = self.nat()
        if coeff == 0:
            return ZERO
        return Ordinal(((exp, coeff),))

    def expfactor(self) -> Ordinal:
        t = self.peek()
        if t == "w":
            self.take()
            return OMEGA
        if t == "(":
            self.take()
            o = self.ordinal()
            self.take(")")
            return o
        return Ordinal.from_int(self.nat())


def ord_parse(text: str) -> Ordinal:
    p = _OrdParser(text)
    o = p.ordinal()
    if p.peek() != "":
        raise OrdinalSyntaxError(f"unexpected {p.peek()!r}", text, p.toks[p.i][1])
    return o


def _render_exp(e: Ordinal) -> str:
    if e == OMEGA or e.is_finite():
        return ord_render(e)
    return f"({ord_render(e, compact=True)})"


def ord_render(o: Ordinal, compact: bool = False) -> str:
    """Canonical text; ``compact`` drops the spaces around ``+``."""
    if not o.terms:
        return "0"
    parts = []
    for e, c in o.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        s = "w" if e == ONE else f"w^{_render_exp(e)}"
        parts.append(s if c == 1 else f"{s}*{c}")
    return ("+" if compact else " + ").join(parts)
