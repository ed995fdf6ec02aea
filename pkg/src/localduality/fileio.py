"""Module files: UTF-8 JSON descriptions of bigraded presentations.

Schema::

    {
      "base_vars": m, "fiber_vars": d,
      "generators": [{"x_shift": a, "t_shift": b}, ...],
      "relations": [["poly for gen 0", "poly for gen 1", ...], ...],
      "metadata": {"weight_hint": w, "name": "..."}      (optional)
    }

Each relation is one column of the relation matrix, with one polynomial
string per generator.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from .modules import BigradedPresentation, Vector, make_presentation
from .polyio import PolynomialSyntaxError, parse_polynomial
from .rings import BiDegree, NotBihomogeneousError, Ring, format_polynomial, Polynomial


class ModuleFileError(ValueError):
    """Invalid module file; ``location`` names the offending JSON path."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass
class ModuleFile:
    presentation: BigradedPresentation
    metadata: Dict[str, Any] = field(default_factory=dict)
    digest: str = ""

    @property
    def weight_hint(self) -> Optional[int]:
        w = self.metadata.get("weight_hint")
        return int(w) if w is not None else None

    @property
    def name(self) -> str:
        return str(self.metadata.get("name", ""))


def digest(data: dict) -> str:
    canon = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _int(value, location: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModuleFileError(location, f"expected an integer, got {value!r}")
    return value


def parse_module(data: dict) -> ModuleFile:
    """Validate a decoded module file and build the presentation."""
    if not isinstance(data, dict):
        raise ModuleFileError("", "top level must be a JSON object")
    for key in ("base_vars", "fiber_vars", "generators", "relations"):
        if key not in data:
            raise ModuleFileError(key, "missing required field")
    m = _int(data["base_vars"], "base_vars")
    d = _int(data["fiber_vars"], "fiber_vars")
    if m < 0 or d < 0:
        raise ModuleFileError("base_vars", "variable counts must be non-negative")
    ring = Ring(m, d)
    gens = data["generators"]
    if not isinstance(gens, list):
        raise ModuleFileError("generators", "expected a list")
    shifts: List[BiDegree] = []
    for i, g in enumerate(gens):
        loc = f"generators[{i}]"
        if not isinstance(g, dict) or "x_shift" not in g or "t_shift" not in g:
            raise ModuleFileError(loc, "expected {\"x_shift\": int, \"t_shift\": int}")
        shifts.append(BiDegree(_int(g["x_shift"], loc + ".x_shift"), _int(g["t_shift"], loc + ".t_shift")))
    rels = data["relations"]
    if not isinstance(rels, list):
        raise ModuleFileError("relations", "expected a list of columns")
    vecs: List[Vector] = []
    for j, col in enumerate(rels):
        loc = f"relations[{j}]"
        if not isinstance(col, list) or len(col) != len(shifts):
            raise ModuleFileError(loc, f"expected a list of {len(shifts)} polynomial strings (one per generator)")
        vec: Vector = {}
        col_deg: Optional[BiDegree] = None
        col_src = None
        for i, text in enumerate(col):
            eloc = f"{loc}[{i}]"
            if isinstance(text, int) and not isinstance(text, bool):
                text = str(text)
            if not isinstance(text, str):
                raise ModuleFileError(eloc, "expected a polynomial string")
            try:
                p = parse_polynomial(ring, text)
            except PolynomialSyntaxError as exc:
                raise ModuleFileError(eloc, str(exc)) from None
            try:
                pd = p.bidegree()
            except NotBihomogeneousError as exc:
                raise ModuleFileError(eloc, str(exc)) from None
            if pd is None:
                continue
            total = shifts[i] + pd
            if col_deg is None:
                col_deg, col_src = total, (i, p)
            elif total != col_deg:
                raise ModuleFileError(
                    eloc,
                    f"entry {p} gives the column bidegree {total}, but entry {col_src[0]} "
                    f"({col_src[1]}) gives {col_deg}",
                )
            for mono, c in p.terms.items():
                vec[(i, mono)] = c
        vecs.append(vec)
    meta = data.get("metadata") or {}
    if not isinstance(meta, dict):
        raise ModuleFileError("metadata", "expected an object")
    if meta.get("weight_hint") is not None:
        _int(meta["weight_hint"], "metadata.weight_hint")
    G = make_presentation(ring, shifts, vecs, str(meta.get("name", "")))
    return ModuleFile(G, dict(meta), digest(data))


def load_module(path: str | Path) -> ModuleFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModuleFileError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModuleFileError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_module(data)


def dump_module(G: BigradedPresentation, metadata: Dict[str, Any] | None = None) -> dict:
    """Inverse of :func:`parse_module` (generators and relations in canonical order)."""
    ring = G.ring
    rels = []
    for col in G.relations.columns:
        entries = []
        for i in range(G.generators.rank):
            p = Polynomial(ring, {mu: c for (pos, mu), c in col.items() if pos == i})
            entries.append(format_polynomial(p))
        rels.append(entries)
    out = {
        "base_vars": ring.m,
        "fiber_vars": ring.d,
        "generators": [{"x_shift": s.x, "t_shift": s.t} for s in G.shifts],
        "relations": rels,
    }
    meta = dict(metadata or {})
    if G.name and "name" not in meta:
        meta["name"] = G.name
    if meta:
        out["metadata"] = meta
    return out
