"""Hypothesis strategies for formulas, ordinals and frames."""

from __future__ import annotations

from hypothesis import strategies as st

from plog.formula import TOP, And, Box, Dia, Imp, Not, Or, Var
from plog.ordinal import Ordinal


def formulas(n: int = 2, atoms: tuple[str, ...] = ("p", "q"), closed: bool = False, max_leaves: int = 8):
    leaves = st.just(TOP) if closed else st.one_of(st.just(TOP), st.sampled_from([Var(a) for a in atoms]))

    def extend(inner):
        idx = st.integers(min_value=0, max_value=n - 1)
        return st.one_of(
            inner.map(Not),
            st.builds(Box, idx, inner),
            st.builds(Dia, idx, inner),
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Imp, inner, inner),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def ordinals(max_depth: int = 2, max_terms: int = 3, max_coeff: int = 4):
    """Ordinals below w^w^w (for ``max_depth`` 2) in canonical form."""
    if max_depth == 0:
        return st.integers(min_value=0, max_value=max_coeff).map(Ordinal.from_int)
    exps = ordinals(max_depth - 1, max_terms, max_coeff)

    @st.composite
    def build(draw):
        es = draw(st.lists(exps, max_size=max_terms, unique=True))
        es.sort(reverse=True)
        return Ordinal(tuple((e, draw(st.integers(min_value=1, max_value=max_coeff))) for e in es))

    return build()
