"""JSON documents holding a complex and one function on it.

Rationals are written as "p/q" strings so nothing passes through binary floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cf import CFun
from .complex import SimplicialComplex, build_complex
from .defint import DefFun
from .errors import ParseError

FORMAT_VERSION = 1
KINDS = ("vertex_values", "cell_values", "cell_affine")


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ParseError(f"rational must be a string or integer, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(f"rational must be a string, got {type(s).__name__}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}") from exc


@dataclass(frozen=True)
class Document:
    complex: SimplicialComplex
    function: object  # CFun or DefFun
    name: str = ""

    @property
    def kind(self) -> str:
        if isinstance(self.function, CFun):
            return "cell_values"
        return "vertex_values" if self.function.is_continuous else "cell_affine"

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        return (
            self.name == other.name
            and self.complex == other.complex
            and type(self.function) is type(other.function)
            and self.function == other.function
        )

    def __hash__(self):
        return hash((self.name, self.complex))


def to_dict(doc: Document) -> dict:
    K = doc.complex
    f = doc.function
    out = {
        "format": "defeuler-document",
        "version": FORMAT_VERSION,
        "complex": {
            "vertices": [[rat(x) for x in p] for p in K.coords],
            "cells": [list(c) for c in K.maximal_cells],
        },
    }
    if doc.name:
        out["name"] = doc.name
    kind = doc.kind
    if kind == "cell_values":
        entries = [{"cell": list(c), "value": v} for c, v in zip(K.cells, f.values) if v]
        out["function"] = {"kind": kind, "cells": entries}
    elif kind == "vertex_values":
        out["function"] = {"kind": kind, "values": [rat(v) for v in f.vertex_values]}
    else:
        entries = [
            {"cell": list(c), "values": [rat(x) for x in d]}
            for c, d in zip(K.cells, f.data)
            if any(d)
        ]
        out["function"] = {"kind": kind, "cells": entries}
    return out


def dumps(doc: Document) -> str:
    return json.dumps(to_dict(doc), indent=1, ensure_ascii=False) + "\n"


def _require(d, key, typ):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"missing field {key!r}")
    v = d[key]
    if not isinstance(v, typ):
        raise ParseError(f"field {key!r} has the wrong type")
    return v


def _cell(raw, K):
    if not isinstance(raw, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
        raise ParseError(f"bad cell {raw!r}")
    c = tuple(sorted(raw))
    if not K.has_cell(c):
        raise ParseError(f"cell {c} is not in the complex")
    return c


def from_dict(d, validate: bool = True) -> Document:
    if not isinstance(d, dict):
        raise ParseError("document must be a JSON object")
    version = _require(d, "version", int)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported document version {version}")
    cx = _require(d, "complex", dict)
    verts = _require(cx, "vertices", list)
    cells = _require(cx, "cells", list)
    coords = []
    for p in verts:
        if not isinstance(p, list):
            raise ParseError(f"bad vertex {p!r}")
        coords.append(tuple(parse_rat(x) for x in p))
    for c in cells:
        if not isinstance(c, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in c):
            raise ParseError(f"bad cell {c!r}")
    K = build_complex(coords, cells, validate=validate)
    fn = _require(d, "function", dict)
    kind = _require(fn, "kind", str)
    if kind == "vertex_values":
        vals = _require(fn, "values", list)
        if len(vals) != K.num_vertices:
            raise ParseError(f"expected {K.num_vertices} vertex values, got {len(vals)}")
        f = DefFun.from_vertex_values(K, [parse_rat(v) for v in vals])
    elif kind == "cell_values":
        mapping = {}
        for e in _require(fn, "cells", list):
            c = _cell(_require(e, "cell", list), K)
            v = parse_rat(_require(e, "value", (int, str)))
            if v.denominator != 1:
                raise ParseError(f"cell_values must be integers, got {v} on {c}")
            mapping[c] = int(v)
        f = CFun.from_cells(K, mapping)
    elif kind == "cell_affine":
        mapping = {}
        for e in _require(fn, "cells", list):
            c = _cell(_require(e, "cell", list), K)
            vals = _require(e, "values", list)
            if len(vals) != len(c):
                raise ParseError(f"cell {c} needs {len(c)} values")
            mapping[c] = [parse_rat(v) for v in vals]
        f = DefFun.from_cell_affine(K, mapping)
    else:
        raise ParseError(f"unknown function kind {kind!r}; expected one of {KINDS}")
    name = d.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name must be a string")
    return Document(K, f, name)


def loads(text: str, validate: bool = True) -> Document:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_dict(d, validate)


def load(path, validate: bool = True) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text, validate)


def save(doc: Document, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(doc))
