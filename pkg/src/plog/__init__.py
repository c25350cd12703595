"""Decision procedures for polymodal provability logics: GLP.3 via finite
J-lines, the closed fragment of GLP via Ignatiev's frame, and projections
linking the two."""

from .formula import Formula, Worm, parse_formula, render_formula
from .ignatiev import axis_defining_formula, closed_truthset, glp_closed_decide
from .jline import JLineShape, Verdict, glp3_decide, jlin_satisfy
from .ordinal import Ordinal, ord_parse, ord_render
from .projection import build_projection, closed_substitution_witness

__version__ = "0.1.0"

__all__ = [
    "Formula",
    "Worm",
    "parse_formula",
    "render_formula",
    "Ordinal",
    "ord_parse",
    "ord_render",
    "JLineShape",
    "Verdict",
    "glp3_decide",
    "jlin_satisfy",
    "closed_truthset",
    "glp_closed_decide",
    "axis_defining_formula",
    "build_projection",
    "closed_substitution_witness",
]
