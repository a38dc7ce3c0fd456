"""Graph, block-weight and report files (JSON, ``format: 1``).

Graph file::

    {"format": 1, "vertices": ["a", "b"], "rates": [{"u": "a", "w": "b", "r": 1.0}]}

Each rate entry is an unordered pair; the loader mirrors it.  Block-weight
file (for the block shuffle)::

    {"format": 1, "alpha": [{"set": ["a", "b", "c"], "weight": 1.0}]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .processes import BaseGraph, BlockShuffleSpec
from .verify import Check, VerificationReport

FORMAT = 1
SPECTRUM_HEAD = 10


def _load(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidInputError(f"{path}: top level must be an object")
    if doc.get("format", FORMAT) != FORMAT:
        raise InvalidInputError(f"{path}: unsupported format {doc.get('format')!r}")
    return doc


def graph_from_dict(doc: dict) -> BaseGraph:
    vertices = doc.get("vertices")
    rates = doc.get("rates", [])
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise InvalidInputError("'vertices' must be a list of strings")
    if not isinstance(rates, list):
        raise InvalidInputError("'rates' must be a list")
    edges = []
    for entry in rates:
        try:
            u, w, r = entry["u"], entry["w"], float(entry["r"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad rate entry {entry!r}") from exc
        if not r > 0:
            raise InvalidInputError(f"rate for {u}-{w} must be positive")
        edges.append((u, w, r))
    return BaseGraph.from_edges(vertices, edges)


def graph_to_dict(X: BaseGraph) -> dict:
    return {"format": FORMAT, "vertices": list(X.vertices),
            "rates": [{"u": u, "w": w, "r": r} for u, w, r in X.edges()]}


def read_graph_file(path) -> BaseGraph:
    return graph_from_dict(_load(path))


def write_graph_file(X: BaseGraph, path) -> None:
    if not all(isinstance(v, str) for v in X.vertices):
        raise InvalidInputError("graph files need string vertex names")
    Path(path).write_text(json.dumps(graph_to_dict(X), indent=2) + "\n", encoding="utf-8")


def read_alpha_file(path, X: BaseGraph) -> BlockShuffleSpec:
    doc = _load(path)
    alpha = {}
    for entry in doc.get("alpha", []):
        try:
            members = frozenset(X.index(v) for v in entry["set"])
            weight = float(entry["weight"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad alpha entry {entry!r}") from exc
        if members in alpha:
            raise InvalidInputError(f"block {sorted(entry['set'])} given twice")
        alpha[members] = weight
    return BlockShuffleSpec(X.n, alpha)


# ------------------------------------------------------------------ reports

def _num(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    return s if ("." in s or "e" in s) else s + ".0"


def _dump(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits and insertion-ordered keys."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        obj = list(obj)
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_dump(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _check_dict(c: Check) -> dict:
    return {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "tol": c.tol, "pass": c.passed}


def report_to_dict(rep: VerificationReport, *, full_spectrum: bool = False, timing: bool = False) -> dict:
    """Report document with a fixed key order.

    ``elapsed_ms`` is written as 0 unless ``timing`` is set, which keeps
    reports for identical inputs byte-identical.
    """
    doc = {
        "format": FORMAT,
        "instance": rep.instance,
        "process": rep.process,
        "state_count": int(rep.state_count),
        "gap": float(rep.gap),
        "spectrum_head": [float(v) for v in np.asarray(rep.spectrum)[:SPECTRUM_HEAD]],
        "checks": [_check_dict(c) for c in rep.checks],
        "seed": rep.seed,
        "elapsed_ms": round(rep.elapsed_ms, 3) if timing else 0.0,
        "overall_pass": rep.overall_pass,
    }
    if rep.label:
        doc["label"] = rep.label
    if rep.observations:
        doc["observations"] = [_check_dict(c) for c in rep.observations]
    if full_spectrum:
        doc["spectrum"] = [float(v) for v in rep.spectrum]
    for key, value in rep.extra.items():
        doc[key] = value
    return doc


def dumps_report(rep: VerificationReport, **kwargs) -> str:
    return _dump(report_to_dict(rep, **kwargs)) + "\n"


def dumps_document(doc) -> str:
    return _dump(doc) + "\n"
