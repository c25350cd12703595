from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plog.axioms import j_axioms, pseudo_linearity
from plog.formula import BOT, TOP, And, Box, Dia, Imp, Not, Or, Top, Var
from plog.jline import chain, enumerate_jlines, materialize, root_world
from plog.kripke import (
    FiniteFrame,
    check_hl_direct,
    check_hl_planes,
    check_j_frame,
    check_stratified,
    eval_at,
    extension,
    find_root,
    planes_partition,
)

from frame_gen import random_shape, random_structure
from strategies import formulas

p, q = Var("p"), Var("q")


def frame(n, worlds, *rels):
    return FiniteFrame(n, tuple(worlds), tuple(frozenset(r) for r in rels))


# -- evaluation ----------------------------------------------------------------


def test_eval_examples():
    single = frame(1, "a", set())
    assert eval_at(single, {"p": frozenset("a")}, "a", And(p, Box(0, q)))
    two = frame(1, "uv", {("u", "v")})
    val = {"p": frozenset("v")}
    assert eval_at(two, val, "u", Dia(0, p))
    assert not eval_at(two, val, "v", Dia(0, p))
    for w in "uv":
        assert eval_at(two, val, w, TOP) and not eval_at(two, val, w, BOT)


def test_eval_errors():
    single = frame(1, "a", set())
    with pytest.raises(KeyError):
        eval_at(single, {}, "b", TOP)
    with pytest.raises(ValueError):
        eval_at(single, {}, "a", Box(1, TOP))


def naive_eval(fr: FiniteFrame, val, w, f) -> bool:
    """Direct recursion on the definition, quantifying over all worlds."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Var):
        return w in val.get(f.name, ())
    if isinstance(f, Not):
        return not naive_eval(fr, val, w, f.sub)
    if isinstance(f, And):
        return naive_eval(fr, val, w, f.left) and naive_eval(fr, val, w, f.right)
    if isinstance(f, Or):
        return naive_eval(fr, val, w, f.left) or naive_eval(fr, val, w, f.right)
    if isinstance(f, Imp):
        return (not naive_eval(fr, val, w, f.left)) or naive_eval(fr, val, w, f.right)
    hits = [naive_eval(fr, val, v, f.sub) for v in fr.worlds if (w, v) in fr.rel[f.index]]
    return any(hits) if isinstance(f, Dia) else all(hits)


@st.composite
def small_models(draw, n=2):
    size = draw(st.integers(min_value=1, max_value=4))
    ws = [f"w{i}" for i in range(size)]
    pairs = [(u, v) for u in ws for v in ws]
    rels = [draw(st.sets(st.sampled_from(pairs))) for _ in range(n)]
    val = {v: frozenset(draw(st.sets(st.sampled_from(ws)))) for v in "pq"}
    return frame(n, ws, *rels), val


@given(small_models(), formulas(n=2, max_leaves=10))
def test_eval_matches_naive_oracle(model, f):
    fr, val = model
    for w in fr.worlds:
        assert eval_at(fr, val, w, f) == naive_eval(fr, val, w, f)


# -- J-frame and stratification ----------------------------------------------------


def test_j_frame_examples():
    three = frame(1, "abc", {("a", "b"), ("b", "c"), ("a", "c")})
    assert check_j_frame(three).holds
    bad = frame(2, "abc", {("a", "b")}, {("b", "c")})
    rep = check_j_frame(bad)
    assert not rep.holds and rep.witness == ("a", "b", "c")
    loop = frame(1, "a", {("a", "a")})
    rep = check_j_frame(loop)
    assert not rep.holds and "irreflexive" in rep.detail


def test_cycle_fails():
    rep = check_j_frame(frame(1, "ab", {("a", "b"), ("b", "a")}))
    assert not rep.holds


def test_stratified_examples():
    for shape in enumerate_jlines(2, 4):
        assert check_stratified(materialize(shape)).holds
    rep = check_stratified(frame(2, "xyz", {("z", "y")}, {("x", "y")}))
    assert not rep.holds and rep.witness == ("x", "y", "z")
    assert check_stratified(frame(3, "abc", set(), set(), set())).holds


def test_report_witness_present_iff_failing():
    rng = random.Random(3)
    for _ in range(200):
        fr = random_structure(rng, rng.randint(1, 3), 5)
        for rep in (check_j_frame(fr), check_stratified(fr), check_hl_planes(fr)):
            assert (rep.witness is None) == rep.holds


# -- hereditary linearity and planes ----------------------------------------------------


def test_hl_direct_examples():
    assert check_hl_direct(materialize(chain(2))).holds
    rep = check_hl_direct(frame(1, "ab", set()))
    assert not rep.holds and rep.witness == ("a", "b")
    fork = frame(1, "abc", {("a", "b"), ("a", "c")})
    rep = check_hl_direct(fork)
    assert not rep.holds and rep.witness == ("b", "c")
    with pytest.raises(ValueError):
        check_hl_direct(frame(1, "a", {("a", "a")}))


def test_planes_examples():
    two = materialize(chain(2))
    assert planes_partition(two, 1) == [frozenset({"0"}), frozenset({"1"})]
    assert planes_partition(two, 0) == [frozenset({"0", "1"})]
    lifted = frame(2, "ab", set(), {("a", "b")})
    assert planes_partition(lifted, 1) == [frozenset("ab")]
    assert planes_partition(lifted, 2) == [frozenset("a"), frozenset("b")]
    with pytest.raises(ValueError):
        planes_partition(lifted, 3)


def test_hl_planes_examples():
    assert check_hl_planes(frame(2, "a", set(), set())).holds
    # two 1-planes, each a 1-chain of two worlds, the first 0-below the second
    from plog.jline import JLineShape, LEAF

    nested = JLineShape((JLineShape((LEAF, LEAF)), JLineShape((LEAF, LEAF))))
    assert check_hl_planes(materialize(nested)).holds
    assert not check_hl_planes(frame(1, "abc", {("a", "b"), ("a", "c")})).holds


def test_find_root_examples():
    assert find_root(materialize(chain(3))) == "0"
    assert find_root(frame(1, "ab", set())) is None
    for shape in enumerate_jlines(3, 5):
        assert find_root(materialize(shape)) == root_world(shape)


def _unique_k(fr: FiniteFrame) -> bool:
    for x, y in combinations(fr.worlds, 2):
        hits = sum((x, y) in r for r in fr.rel) + sum((y, x) in r for r in fr.rel)
        if hits != 1:
            return False
    return True


def test_structural_checks_agree_on_random_structures():
    rng = random.Random(11)
    seen = {"j": 0, "hl": 0, "not_hl": 0}
    for _ in range(600):
        n = rng.randint(1, 3)
        fr = random_structure(rng, n, 6)
        if not check_j_frame(fr).holds:
            continue
        seen["j"] += 1
        hl = check_hl_direct(fr).holds
        assert hl == check_hl_planes(fr).holds, fr
        if hl:
            seen["hl"] += 1
            assert check_stratified(fr).holds, fr
            assert _unique_k(fr), fr
        else:
            seen["not_hl"] += 1
    assert seen["hl"] > 50 and seen["not_hl"] > 50


# -- soundness of the J.lin axioms -----------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**31),
    formulas(n=3, max_leaves=3),
    formulas(n=3, max_leaves=3),
)
def test_axioms_valid_on_jlines(seed, phi, psi):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    from plog.formula import modal_signature

    if max(modal_signature(phi), modal_signature(psi)) > n:
        n = 3
    fr = materialize(random_shape(rng, n, 8))
    val = {v: frozenset(w for w in fr.worlds if rng.random() < 0.5) for v in "pq"}
    instances = j_axioms(phi, psi, n) + [pseudo_linearity(phi, psi, m, n) for m in range(n)]
    for ax in instances:
        assert extension(fr, val, ax) == frozenset(fr.worlds), ax
