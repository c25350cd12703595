"""Frame files: JSON load/save and Graphviz DOT export.

JSON layout::

    {"n": 2, "worlds": ["a", "b"], "rel": {"0": [["a", "b"]]},
     "val": {"p": ["b"]}, "root": "a"}

``val`` and ``root`` are optional.  Problems are reported with a JSON pointer.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Optional

import jsonschema

from .kripke import FiniteFrame, World

FRAME_SCHEMA = {
    "type": "object",
    "required": ["n", "worlds", "rel"],
    "additionalProperties": False,
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "worlds": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "rel": {
            "type": "object",
            "additionalProperties": False,
            "patternProperties": {
                "^(0|[1-9][0-9]*)$": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "string"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                }
            },
        },
        "val": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "string"}},
        },
        "root": {"type": "string"},
    },
}


class FrameFormatError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def frame_from_json(doc: object) -> tuple[FiniteFrame, dict[str, frozenset], Optional[World]]:
    err = jsonschema.exceptions.best_match(jsonschema.Draft7Validator(FRAME_SCHEMA).iter_errors(doc))
    if err is not None:
        raise FrameFormatError(_pointer(err.absolute_path), err.message)
    assert isinstance(doc, dict)
    n = doc["n"]
    worlds = set(doc["worlds"])
    rel: list[set] = [set() for _ in range(n)]
    for key, pairs in doc["rel"].items():
        k = int(key)
        if k >= n:
            raise FrameFormatError(f"/rel/{key}", f"modality {k} but n = {n}")
        for i, pair in enumerate(pairs):
            for j, w in enumerate(pair):
                if w not in worlds:
                    raise FrameFormatError(f"/rel/{key}/{i}/{j}", f"unknown world {w!r}")
            rel[k].add(tuple(pair))
    val: dict[str, frozenset] = {}
    for var, ws in doc.get("val", {}).items():
        for i, w in enumerate(ws):
            if w not in worlds:
                raise FrameFormatError(f"/val/{var}/{i}", f"unknown world {w!r}")
        val[var] = frozenset(ws)
    root = doc.get("root")
    if root is not None and root not in worlds:
        raise FrameFormatError("/root", f"unknown world {root!r}")
    return FiniteFrame(n, tuple(worlds), tuple(frozenset(r) for r in rel)), val, root


def frame_to_json(frame: FiniteFrame, val: Optional[Mapping[str, frozenset]] = None, root: Optional[World] = None) -> dict:
    doc: dict = {
        "n": frame.n,
        "worlds": list(frame.worlds),
        "rel": {str(k): [list(p) for p in sorted(r)] for k, r in enumerate(frame.rel)},
    }
    if val is not None:
        doc["val"] = {v: sorted(ws) for v, ws in sorted(val.items())}
    if root is not None:
        doc["root"] = root
    return doc


def load(path: str | Path) -> tuple[FiniteFrame, dict[str, frozenset], Optional[World]]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FrameFormatError("", f"invalid JSON: {e}") from e
    return frame_from_json(doc)


def save(path: str | Path, frame: FiniteFrame, val: Optional[Mapping[str, frozenset]] = None, root: Optional[World] = None) -> None:
    Path(path).write_text(json.dumps(frame_to_json(frame, val, root), indent=2) + "\n")


def dot_export(frame: FiniteFrame, root: Optional[World] = None, val: Optional[Mapping[str, frozenset]] = None) -> str:
    """One labelled edge per related pair; the root is drawn doubled."""
    lines = ["digraph frame {", "  rankdir=LR;"]
    for w in frame.worlds:
        label = w
        if val:
            true = [v for v, ws in sorted(val.items()) if w in ws]
            if true:
                label += "\\n" + ",".join(true)
        shape = "doublecircle" if w == root else "circle"
        lines.append(f'  "{w}" [shape={shape}, label="{label}"];')
    for k, r in enumerate(frame.rel):
        for u, v in sorted(r):
            lines.append(f'  "{u}" -> "{v}" [label="{k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(path: str | Path, frame: FiniteFrame, root: Optional[World] = None, val: Optional[Mapping[str, frozenset]] = None) -> None:
    Path(path).write_text(dot_export(frame, root, val))
