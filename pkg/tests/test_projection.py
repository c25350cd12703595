from __future__ import annotations

import random

import pytest

from plog.formula import BOT, TOP, Not, Var, box_normalize, disj, m_plus, parse_formula, subformulas, substitute_closed
from plog.ignatiev import IgPoint, closed_truthset, delta_point, equals, glp_closed_decide, member, singleton
from plog.jline import LEAF, JLineShape, chain, enumerate_jlines, glp3_decide, materialize, root_world, world_path
from plog.kripke import eval_at
from plog.ordinal import OMEGA, ONE, ZERO, Ordinal, ord_log, ord_parse
from plog.projection import (
    ProjectionError,
    build_projection,
    closed_substitution_witness,
    project_point,
    projection_to_json,
    verify_projection,
)

from formula_gen import random_formula
from test_ignatiev import POOL

p = Var("p")
P = parse_formula
PAIR1 = JLineShape((JLineShape((LEAF, LEAF)),))  # two worlds joined by rel[1]


def test_singleton():
    ps = build_projection(chain(1))
    assert ps.iota == ZERO and ps.defs == {"0": P("[0]F")} and ps.case == "singleton"


def test_two_chain():
    ps = build_projection(chain(2))
    assert ps.iota == ONE and ps.case == "sum"
    assert equals(closed_truthset(ps.defs["1"]), singleton(delta_point(ZERO)))
    assert equals(closed_truthset(ps.defs["0"]), singleton(delta_point(ONE)))


def test_rel1_pair():
    ps = build_projection(PAIR1)
    assert ps.iota == OMEGA and ps.case == "shift"
    assert equals(closed_truthset(ps.defs["0.0"]), singleton(IgPoint((OMEGA, ONE))))


def test_project_point_examples():
    assert project_point(build_projection(chain(1)), IgPoint()) == "0"
    two = build_projection(chain(2))
    assert project_point(two, IgPoint((ZERO,))) == "1"
    assert project_point(two, IgPoint((ONE,))) == "0"
    pair = build_projection(PAIR1)
    assert project_point(pair, IgPoint((OMEGA, ONE))) == "0.0"
    assert project_point(pair, IgPoint((Ordinal.from_int(5),))) == "0.1"
    with pytest.raises(ValueError):
        project_point(two, IgPoint((OMEGA,)))


def test_every_small_shape_verifies():
    count = 0
    for n in (1, 2):
        for shape in enumerate_jlines(n, 4):
            ps = build_projection(shape)
            assert set(ps.defs) == {w for w in materialize(shape).worlds}
            count += 1
    assert count == 4 + 15
    for shape in enumerate_jlines(3, 3):
        build_projection(shape)


def test_tampered_projection_is_rejected():
    ps = build_projection(chain(2))
    from dataclasses import replace

    bad = replace(ps, defs={**ps.defs, "0": TOP})
    with pytest.raises(ProjectionError):
        verify_projection(bad)
    with pytest.raises(ValueError):
        build_projection(LEAF)


def _points_in_segment(ps, rng, extra=12):
    pts = []
    for d in ps.defs.values():
        for c in closed_truthset(d):
            pts.append(c.least_point())
    for _ in range(extra * 4):
        if len(pts) >= len(ps.defs) + extra:
            break
        cs = [rng.choice(POOL)]
        if ps.iota < cs[0]:
            continue
        while rng.random() < 0.6:
            allowed = [v for v in POOL if not ord_log(cs[-1]) < v and v]
            if not allowed:
                break
            cs.append(rng.choice(allowed))
        pts.append(IgPoint(tuple(cs)))
    return pts


def test_project_point_matches_defining_formulas():
    rng = random.Random(31)
    for n in (1, 2):
        for shape in enumerate_jlines(n, 4):
            ps = build_projection(shape)
            for x in _points_in_segment(ps, rng):
                w = project_point(ps, x)
                hits = [v for v, d in ps.defs.items() if member(x, closed_truthset(d))]
                assert hits == [w], (str(shape), str(x))


def test_projection_json():
    doc = projection_to_json(build_projection(JLineShape((chain(2, 1), chain(1, 1)))))
    assert doc["iota"] == "w"  # 0 + 1 + w
    assert set(doc["defs"]) == {"0.0", "0.1", "1.0"}
    assert doc["case_tree"]["case"] == "sum"


# -- substitutions --------------------------------------------------------------------


def test_substitution_examples():
    f = P("p & <0>~p")
    star = closed_substitution_witness(chain(2), {"p": frozenset({"0"})}, f)
    assert member(delta_point(ONE), closed_truthset(star))
    star = closed_substitution_witness(chain(1), {"p": frozenset({"0"})}, p)
    assert star == P("[0]F")
    star = closed_substitution_witness(PAIR1, {"p": frozenset({"0.1"})}, P("<1>p"))
    assert member(delta_point(OMEGA), closed_truthset(star))
    with pytest.raises(ValueError):
        closed_substitution_witness(chain(2), {"p": frozenset()}, p)


def test_empty_valuation_gives_falsum():
    star = closed_substitution_witness(chain(2), {"p": frozenset()}, P("~p"))
    assert star == Not(BOT)


def test_evaluation_transfers_along_the_projection():
    rng = random.Random(37)
    checked = 0
    for _ in range(400):
        n = rng.choice([1, 2])
        f = random_formula(rng, 2, n, atoms=("p",))
        shapes = list(enumerate_jlines(n, 4))
        shape = rng.choice(shapes)
        fr = materialize(shape)
        val = {"p": frozenset(w for w in fr.worlds if rng.random() < 0.5)}
        root = root_world(shape)
        bn = box_normalize(f)
        if not eval_at(fr, val, root, m_plus(bn, n)):
            continue
        ps = build_projection(shape)
        subst = {"p": disj(ps.defs[w] for w in sorted(val["p"], key=world_path))}
        for g in sorted(subformulas(bn), key=str):
            star = closed_truthset(substitute_closed(g, subst))
            for x in _points_in_segment(ps, rng, extra=4):
                assert member(x, star) == eval_at(fr, val, project_point(ps, x), g), (f, str(shape), g, str(x))
        checked += 1
    assert checked >= 40


def test_refutations_yield_non_theorem_substitutions():
    rng = random.Random(41)
    done = 0
    while done < 10:
        f = random_formula(rng, 2, 2, atoms=("p", "q"))
        v = glp3_decide(f)
        if v.status != "refuted":
            continue
        cm = v.countermodel
        star = closed_substitution_witness(cm.shape, cm.valuation, Not(f))
        assert glp_closed_decide(Not(star)).status != "theorem"
        done += 1
