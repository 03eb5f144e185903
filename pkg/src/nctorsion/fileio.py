"""JSON file formats for matrices, complexes, CW data, orbit sets and circle Morse models.

Every file is a JSON object with ``"format": "nctorsion/<kind>"`` and
``"version": 1``.  Algebraic entries are strings in the expression syntax of
the value type (rational functions, series or group-ring elements).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import MonomialAutomorphism, int_identity
from .chain import BasedChainComplex, CWDatum, HomologyBasis
from .groups import GroupDescriptor, parse_group_ring, render_group_element
from .linalg import RationalField, SeriesField, SkewMatrix
from .morse import CircleMorseModel
from .novikov import DEFAULT_PRECISION
from .textio import ParseError
from .zeta import ClosedOrbit, OrbitSet

VERSION = 1
KINDS = ("matrix", "complex", "cw", "orbits", "model")


class InputError(ValueError):
    """A malformed input file; the message names the location."""


def _fail(where: str, msg: str):
    raise InputError(f"{where}: {msg}")


def _parse_entry(parse, text, where: str):
    if not isinstance(text, (str, int)):
        _fail(where, f"expected an expression string, got {type(text).__name__}")
    try:
        return parse(str(text))
    except ParseError as exc:
        _fail(where, f"{exc.message} at column {exc.pos + 1} in {exc.text!r}")
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        _fail(where, f"cannot read {text!r}: {exc}")


def _grid(parse, rows, where: str, shape: tuple[int, int] | None = None) -> list[list]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        _fail(where, "expected a list of rows")
    if shape is not None:
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            _fail(where, f"expected a {shape[0]} x {shape[1]} grid")
    return [[_parse_entry(parse, x, f"{where}[{i + 1}][{j + 1}]") for j, x in enumerate(r)]
            for i, r in enumerate(rows)]


# ---------------------------------------------------------------------------
# fields and groups
# ---------------------------------------------------------------------------


def field_from_json(data: dict, where: str = "field"):
    kind = data.get("kind")
    if kind == "rational":
        return RationalField(int(data.get("nvars", 1)))
    if kind == "series":
        a = data.get("A")
        if a is None:
            a = int_identity(int(data.get("nvars", 1)))
        return SeriesField(MonomialAutomorphism(a), int(data.get("l", 1)), int(data.get("precision", DEFAULT_PRECISION)))
    _fail(where, f"unknown field kind {kind!r}")


def field_to_json(fld) -> dict:
    if isinstance(fld, RationalField):
        return {"kind": "rational", "nvars": fld.nvars}
    return {"kind": "series", "A": [list(r) for r in fld.theta.matrix], "l": fld.scale, "precision": fld.prec}


def _group(data: dict, where: str) -> GroupDescriptor:
    g = data.get("group")
    if not isinstance(g, dict):
        _fail(where, "missing group descriptor")
    try:
        return GroupDescriptor.from_json(g)
    except (KeyError, ValueError, TypeError) as exc:
        _fail(f"{where}.group", str(exc))


def _keyed(table, where: str) -> dict[int, Any]:
    if table is None:
        return {}
    if not isinstance(table, dict):
        _fail(where, "expected an object keyed by degree")
    try:
        return {int(k): v for k, v in table.items()}
    except ValueError:
        _fail(where, "degree keys must be integers")


# ---------------------------------------------------------------------------
# readers
# ---------------------------------------------------------------------------


def matrix_from_json(data: dict, where: str = "matrix") -> SkewMatrix:
    fld = field_from_json(data.get("field", {}), f"{where}.field")
    rows = _grid(fld.parse, data.get("rows"), f"{where}.rows")
    ncols = len(rows[0]) if rows else int(data.get("ncols", 0))
    if any(len(r) != ncols for r in rows):
        _fail(f"{where}.rows", "rows have different lengths")
    return SkewMatrix(fld, rows, ncols)


def complex_from_json(data: dict, where: str = "complex") -> tuple[BasedChainComplex, HomologyBasis | None]:
    fld = field_from_json(data.get("field", {}), f"{where}.field")
    dims = [int(x) for x in data.get("dims", [])]
    diffs = {}
    for i, rows in _keyed(data.get("differentials"), f"{where}.differentials").items():
        if not 1 <= i < len(dims):
            _fail(f"{where}.differentials", f"degree {i} outside 1..{len(dims) - 1}")
        diffs[i] = SkewMatrix(fld, _grid(fld.parse, rows, f"{where}.differentials.{i}", (dims[i - 1], dims[i])),
                              dims[i])
    c = BasedChainComplex(fld, dims, diffs)
    h = None
    if "homology" in data:
        h = HomologyBasis({i: _grid(fld.parse, vecs, f"{where}.homology.{i}")
                           for i, vecs in _keyed(data["homology"], f"{where}.homology").items()})
    return c, h


def cw_from_json(data: dict, where: str = "cw") -> CWDatum:
    desc = _group(data, where)
    cells = [int(x) for x in data.get("cells", [])]
    parse = lambda s: parse_group_ring(desc, s)  # noqa: E731
    bounds = {i: _grid(parse, rows, f"{where}.boundaries.{i}", (cells[i - 1], cells[i]))
              for i, rows in _keyed(data.get("boundaries"), f"{where}.boundaries").items()}
    return CWDatum(desc, cells, bounds, data.get("labels"))


def orbits_from_json(data: dict, where: str = "orbits") -> OrbitSet:
    desc = _group(data, where)
    orbits = []
    for n, o in enumerate(data.get("orbits", [])):
        w = f"{where}.orbits[{n + 1}]"
        r = _parse_entry(lambda s: parse_group_ring(desc, s), o.get("holonomy"), f"{w}.holonomy")
        mono = r.monomial()
        if mono is None or mono[0] != 1:
            _fail(f"{w}.holonomy", "holonomy must be a single group element")
        try:
            orbits.append(ClosedOrbit(mono[1], int(o.get("i_plus", 0)), int(o.get("i_minus", 0)),
                                      int(o.get("period", 1)), int(o.get("multiplicity", 1))))
        except ValueError as exc:
            _fail(w, str(exc))
    return OrbitSet(desc, orbits, data.get("complete_through"))


def model_from_json(data: dict, where: str = "model") -> CircleMorseModel:
    desc = _group(data, where)
    parse = lambda s: parse_group_ring(desc, s)  # noqa: E731
    tables = {}
    for name in ("N", "M", "W", "phi", "dsigma"):
        tables[name] = {i: _grid(parse, rows, f"{where}.{name}.{i}")
                        for i, rows in _keyed(data.get(name), f"{where}.{name}").items()}
    return CircleMorseModel(desc, [int(x) for x in data.get("d", [])], [int(x) for x in data.get("e", [])],
                            tables["N"], tables["M"], tables["W"], tables["phi"], tables["dsigma"],
                            name=str(data.get("name", "")))


_READERS = {"matrix": matrix_from_json, "complex": complex_from_json, "cw": cw_from_json,
            "orbits": orbits_from_json, "model": model_from_json}


def read_json(path: str | Path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def file_kind(data: dict, where: str = "input") -> str:
    fmt = data.get("format", "")
    if not isinstance(fmt, str) or not fmt.startswith("nctorsion/"):
        _fail(where, f"missing or foreign format tag {fmt!r}")
    kind = fmt.split("/", 1)[1]
    if kind not in KINDS:
        _fail(where, f"unknown kind {kind!r}")
    if data.get("version", VERSION) != VERSION:
        _fail(where, f"unsupported version {data.get('version')!r}")
    return kind


def load(path: str | Path, expect: str | None = None):
    """(kind, object) for a file; ``expect`` restricts the accepted kinds."""
    data = read_json(path)
    kind = file_kind(data, str(path))
    if expect is not None and kind not in expect.split("|"):
        raise InputError(f"{path}: expected a {expect} file, got {kind}")
    return kind, _READERS[kind](data, str(path))


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------


def _header(kind: str) -> dict:
    return {"format": f"nctorsion/{kind}", "version": VERSION}


def matrix_to_json(m: SkewMatrix) -> dict:
    return {**_header("matrix"), "field": field_to_json(m.field), "rows": m.render()}


def complex_to_json(c: BasedChainComplex, h: HomologyBasis | None = None) -> dict:
    out = {**_header("complex"), "field": field_to_json(c.field), "dims": list(c.dims),
           "differentials": {str(i): d.render() for i, d in c.diffs.items()}}
    if h is not None:
        out["homology"] = {str(i): [[c.field.render(x) for x in v] for v in vs] for i, vs in h.vectors.items()}
    return out


def _grid_out(g) -> list[list[str]]:
    return [[x.render() for x in row] for row in g]


def cw_to_json(x: CWDatum) -> dict:
    out = {**_header("cw"), "group": x.desc.to_json(), "cells": list(x.cells),
           "boundaries": {str(i): _grid_out(x.boundary(i)) for i in range(1, len(x.cells))}}
    if x.labels:
        out["labels"] = x.labels
    return out


def orbits_to_json(o: OrbitSet) -> dict:
    return {**_header("orbits"), "group": o.desc.to_json(), "complete_through": o.complete_through,
            "orbits": [{"holonomy": render_group_element(o.desc, x.holonomy), "i_plus": x.i_plus,
                        "i_minus": x.i_minus, "period": x.period, "multiplicity": x.multiplicity}
                       for x in o.orbits]}


def model_to_json(m: CircleMorseModel) -> dict:
    out = {**_header("model"), "name": m.name, "group": m.desc.to_json(), "d": list(m.d), "e": list(m.e)}
    for name, table in (("N", m.N), ("M", m.M), ("W", m.W), ("phi", m.phi), ("dsigma", m.dsigma)):
        nonzero = {str(i): _grid_out(g) for i, g in sorted(table.items())
                   if any(not x.is_zero() for row in g for x in row)}
        if nonzero:
            out[name] = nonzero
    return out


def dump(obj: dict, path: str | Path):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")
