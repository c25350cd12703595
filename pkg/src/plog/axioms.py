"""Axiom schemas of GLP, GLP.3, J_n and J_n.lin, instantiated on given formulas."""

from __future__ import annotations

from .formula import And, Box, Dia, Formula, Imp, Or, conj


def glp_axioms(phi: Formula, psi: Formula, n: int) -> list[Formula]:
    """Every GLP axiom instance for modalities below ``n`` (the monotonicity
    and persistence axioms need ``k + 1 < n``)."""
    out: list[Formula] = []
    for k in range(n):
        out.append(Imp(Box(k, Imp(phi, psi)), Imp(Box(k, phi), Box(k, psi))))
        out.append(Imp(Box(k, Imp(Box(k, phi), phi)), Box(k, phi)))
        if k + 1 < n:
            out.append(Imp(Box(k, phi), Box(k + 1, phi)))
            out.append(Imp(Dia(k, phi), Box(k + 1, Dia(k, phi))))
    return out


def linearity(a: Formula, b: Formula, k: int) -> Formula:
    """``[k]([k]a -> b) | [k]([k]b & b -> a)``."""
    return Or(Box(k, Imp(Box(k, a), b)), Box(k, Imp(And(Box(k, b), b), a)))


def j_axioms(phi: Formula, psi: Formula, n: int) -> list[Formula]:
    out: list[Formula] = []
    for k in range(n):
        out.append(Imp(Box(k, Imp(phi, psi)), Imp(Box(k, phi), Box(k, psi))))
        out.append(Imp(Box(k, Imp(Box(k, phi), phi)), Box(k, phi)))
        for m in range(k, n):
            out.append(Imp(Box(k, phi), Box(k, Box(m, phi))))
            out.append(Imp(Box(k, phi), Box(m, Box(k, phi))))
            if k < m:
                out.append(Imp(Dia(k, phi), Box(m, Dia(k, phi))))
    return out


def pseudo_linearity(phi: Formula, psi: Formula, m: int, n: int) -> Formula:
    boxes_phi = conj(Box(k, phi) for k in range(m, n))
    boxes_psi = conj(Box(k, psi) for k in range(m, n))
    return Or(Box(m, Imp(boxes_phi, psi)), Box(m, Imp(And(boxes_psi, psi), phi)))
