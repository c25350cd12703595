"""``plog`` command line.

Exit codes: 0 theorem / valid / success, 1 refuted / satisfiable / check
failed, 2 usage or internal error, 3 inconclusive (search budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import frame_io
from .formula import (
    FormulaSyntaxError,
    Worm,
    is_closed,
    modal_count,
    modal_depth,
    modal_signature,
    parse_formula,
    render_formula,
)
from .ignatiev import (
    IgPoint,
    axis_defining_formula,
    axis_witness,
    closed_truthset,
    cover_k,
    glp_closed_decide,
    ordinal_worm,
    worm_ordinal,
)
from .jline import ENGINES, Verdict, default_cap, enumerate_jlines, glp3_decide, jlin_satisfy, materialize, shape_of_frame
from .kripke import check_hl_direct, check_hl_planes, check_j_frame, check_stratified, extension, find_root
from .ordinal import ord_parse, ord_render
from .projection import build_projection, closed_substitution_witness, project_point, projection_to_json

EXIT_OK, EXIT_REFUTED, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class CliError(Exception):
    pass


def _emit(args: argparse.Namespace, result: dict, text: list[str]) -> None:
    if args.json:
        payload = {"status": result.get("status"), "witness": result.get("witness"), "countermodel": result.get("countermodel")}
        payload.update({k: v for k, v in result.items() if k not in payload})
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for line in text:
            print(line)


def _countermodel_json(cm) -> dict:
    doc = frame_io.frame_to_json(cm.frame(), cm.valuation, cm.root)
    doc["shape"] = str(cm.shape)
    return doc


def _parse_point(text: str) -> IgPoint:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    coords = [ord_parse(part) for part in body.split(",") if part.strip()]
    return IgPoint(tuple(coords))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_parse(args) -> int:
    f = parse_formula(args.formula)
    res = {
        "status": "ok",
        "formula": render_formula(f),
        "signature": modal_signature(f),
        "modal_count": modal_count(f),
        "modal_depth": modal_depth(f),
        "closed": is_closed(f),
    }
    _emit(args, res, [res["formula"]])
    return EXIT_OK


def _verdict_exit(status: str) -> int:
    return {"theorem": EXIT_OK, "refuted": EXIT_REFUTED, "inconclusive": EXIT_INCONCLUSIVE}[status]


def cmd_decide(args) -> int:
    f = parse_formula(args.formula)
    cap = args.cap if args.cap is not None else default_cap()
    if cap < 1:
        raise CliError("--cap must be at least 1")
    if args.logic == "glp-closed":
        if not is_closed(f):
            raise CliError("glp-closed decides closed formulas only")
        v = glp_closed_decide(f)
        res = {"status": v.status, "witness": None if v.witness is None else str(v.witness)}
        text = [v.status] + ([f"witness {v.witness}"] if v.witness is not None else [])
        _emit(args, res, text)
        return _verdict_exit(v.status)
    if args.logic == "glp3":
        verdict = glp3_decide(f, cap=cap, engine=args.engine, n=args.n)
        label = verdict.status
    else:
        n = args.n if args.n is not None else max(1, modal_signature(f))
        verdict = jlin_satisfy(f, n, cap=cap, engine=args.engine)
        label = {"theorem": "unsatisfiable", "refuted": "satisfiable"}.get(verdict.status, verdict.status)
    return _report_search(args, verdict, label)


def _report_search(args, verdict: Verdict, label: str) -> int:
    res: dict = {"status": label, "bound": verdict.bound_used, "explored": verdict.explored}
    text = [label]
    cm = verdict.countermodel
    if cm is not None:
        res["countermodel"] = _countermodel_json(cm)
        text.append(f"model shape {cm.shape} with {cm.size()} world(s), root {cm.root}")
        for var, ws in cm.valuation.items():
            text.append(f"  {var}: {{{', '.join(sorted(ws))}}}")
        if args.countermodel:
            frame_io.save(args.countermodel, cm.frame(), cm.valuation, cm.root)
        if args.dot:
            frame_io.write_dot(args.dot, cm.frame(), cm.root, cm.valuation)
    text.append(f"size bound {verdict.bound_used}, {verdict.explored} states explored")
    _emit(args, res, text)
    return _verdict_exit(verdict.status)


def cmd_truthset(args) -> int:
    f = parse_formula(args.formula)
    if not is_closed(f):
        raise CliError("truth sets are defined for closed formulas only")
    ts = closed_truthset(f)
    iota = axis_witness(f)
    res = {
        "status": "empty" if ts.is_empty() else "nonempty",
        "cells": [c.text for c in ts],
        "axis_witness": None if iota is None else ord_render(iota),
    }
    _emit(args, res, [str(ts)])
    return EXIT_OK


def cmd_axis_formula(args) -> int:
    iota = ord_parse(args.ordinal)
    f = axis_defining_formula(iota)
    _emit(args, {"status": "ok", "ordinal": ord_render(iota), "formula": render_formula(f)}, [render_formula(f)])
    return EXIT_OK


def cmd_worm(args) -> int:
    if args.direction == "to-ordinal":
        w = Worm.from_formula(parse_formula(args.value))
        o = worm_ordinal(w)
        _emit(args, {"status": "ok", "worm": str(w), "ordinal": ord_render(o)}, [ord_render(o)])
    else:
        o = ord_parse(args.value)
        w = ordinal_worm(o)
        _emit(args, {"status": "ok", "worm": str(w), "ordinal": ord_render(o)}, [str(w)])
    return EXIT_OK


def cmd_project(args) -> int:
    frame, val, _ = frame_io.load(args.frame)
    shape, mapping = shape_of_frame(frame)
    ps = build_projection(shape)
    back = {canon: orig for orig, canon in mapping.items()}
    doc = projection_to_json(ps)
    doc["defs"] = {back[w]: f for w, f in doc["defs"].items()}
    res: dict = {"status": "ok", **doc}
    text = [f"iota {doc['iota']}"] + [f"{w}: {f}" for w, f in sorted(doc["defs"].items())]
    if args.point:
        p = _parse_point(args.point)
        w = back[project_point(ps, p)]
        res["point"] = {"point": str(p), "world": w}
        text.append(f"{p} -> {w}")
    if args.substitute:
        f = parse_formula(args.substitute)
        canon_val = {v: frozenset(mapping[w] for w in ws) for v, ws in val.items()}
        star = closed_substitution_witness(shape, canon_val, f)
        res["witness"] = render_formula(star)
        text.append(f"closed substitution: {render_formula(star)}")
    _emit(args, res, text)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    shapes = list(enumerate_jlines(args.n, args.max_size))
    rows = [{"shape": str(s), "size": s.size()} for s in shapes]
    _emit(args, {"status": "ok", "count": len(rows), "shapes": rows}, [f"{r['size']} {r['shape']}" for r in rows] + [f"{len(rows)} shape(s)"])
    if args.dot and shapes:
        frame_io.write_dot(args.dot, materialize(shapes[-1]))
    return EXIT_OK


def cmd_check_frame(args) -> int:
    frame, val, root = frame_io.load(args.path)
    reports = [check_j_frame(frame), check_stratified(frame)]
    is_j = reports[0].holds
    if is_j:
        reports.append(check_hl_direct(frame))
    reports.append(check_hl_planes(frame))
    found = find_root(frame) if is_j else None
    res: dict = {
        "status": "valid" if all(r.holds for r in reports) else "invalid",
        "checks": [
            {"property": r.property, "holds": r.holds, "witness": list(r.witness) if r.witness else None, "detail": r.detail}
            for r in reports
        ],
        "root": found,
    }
    text = []
    for r in reports:
        line = f"{r.property}: {'holds' if r.holds else 'fails'}"
        if not r.holds:
            line += f" at ({', '.join(r.witness or ())}) - {r.detail}"
        text.append(line)
    text.append(f"root: {found if found is not None else 'none'}")
    if args.formula:
        f = parse_formula(args.formula)
        ext = sorted(extension(frame, val, f))
        res["extension"] = ext
        text.append(f"{render_formula(f)} holds at: {{{', '.join(ext)}}}")
    if args.dot:
        frame_io.write_dot(args.dot, frame, root or found, val)
    _emit(args, res, text)
    return EXIT_OK if res["status"] == "valid" else EXIT_REFUTED


def cmd_cover_k(args) -> int:
    f = parse_formula(args.formula)
    if not is_closed(f):
        raise CliError("cover-k needs a closed formula")
    n = args.n if args.n is not None else max(1, modal_signature(f))
    k = cover_k(f, n)
    _emit(args, {"status": "ok", "k": k, "n": n}, [str(k)])
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _nat(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a natural number")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = argparse.ArgumentParser(prog="plog", description="Decision procedures for polymodal provability logics.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    s.add_argument("formula")
    s.set_defaults(run=cmd_parse)

    s = sub.add_parser("decide", parents=[common], help="decide a formula")
    s.add_argument("formula")
    s.add_argument("--logic", choices=["glp3", "jlin", "glp-closed"], default="glp3")
    s.add_argument("--n", type=_nat, help="number of modalities (default: signature)")
    s.add_argument("--cap", type=int, help="search budget (default 5000, or $PLOG_CAP)")
    s.add_argument("--engine", choices=ENGINES, default="types")
    s.add_argument("--countermodel", metavar="PATH", help="write the countermodel as frame JSON")
    s.add_argument("--dot", metavar="PATH", help="write the countermodel as DOT")
    s.set_defaults(run=cmd_decide)

    s = sub.add_parser("truthset", parents=[common], help="truth set of a closed formula")
    s.add_argument("formula")
    s.set_defaults(run=cmd_truthset)

    s = sub.add_parser("axis-formula", parents=[common], help="closed formula true only at delta_iota")
    s.add_argument("ordinal")
    s.set_defaults(run=cmd_axis_formula)

    s = sub.add_parser("worm", parents=[common], help="convert between worms and ordinals")
    s.add_argument("direction", choices=["to-ordinal", "from-ordinal"])
    s.add_argument("value")
    s.set_defaults(run=cmd_worm)

    s = sub.add_parser("project", parents=[common], help="projection of Ig_iota onto a J-line")
    s.add_argument("--frame", required=True, metavar="PATH")
    s.add_argument("--point", help='a point such as "(w, 1)" to project')
    s.add_argument("--substitute", metavar="FORMULA", help="closed substitution witness under the frame valuation")
    s.set_defaults(run=cmd_project)

    s = sub.add_parser("enumerate", parents=[common], help="list J-line shapes")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-size", type=_nat, required=True)
    s.add_argument("--dot", metavar="PATH", help="write the last shape as DOT")
    s.set_defaults(run=cmd_enumerate)

    s = sub.add_parser("check-frame", parents=[common], help="structural checks on a frame file")
    s.add_argument("path")
    s.add_argument("--formula", help="also print the extension of this formula")
    s.add_argument("--dot", metavar="PATH")
    s.set_defaults(run=cmd_check_frame)

    s = sub.add_parser("cover-k", parents=[common], help="least k with <n-1>^k T -> <0>f")
    s.add_argument("formula")
    s.add_argument("--n", type=int)
    s.set_defaults(run=cmd_cover_k)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.run(args)
    except (CliError, FormulaSyntaxError, frame_io.FrameFormatError, ValueError, KeyError, OSError) as e:
        print(f"plog: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:  # a failed internal self-check
        print(f"plog: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
