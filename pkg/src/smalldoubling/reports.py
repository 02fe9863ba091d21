"""JSON encoding for reports.

Fractions become ``{"num": n, "den": d}``; progressions carry a ``"type"``
tag.  Output is sorted and indented so equal reports give identical bytes.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

import numpy as np

from .core_sets import IntSet
from .progressions import GAP2, Progression1D

SCHEMA_VERSION = 1


def encode(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Progression1D):
        return {"type": "Progression1D", "a0": obj.a0, "v": obj.v, "L": obj.L}
    if isinstance(obj, GAP2):
        return {"type": "GAP2", "a0": obj.a0, "a1": obj.a1, "a2": obj.a2, "L1": obj.L1, "L2": obj.L2}
    if isinstance(obj, IntSet):
        return {"type": "IntSet", "elements": list(obj.elements)}
    if isinstance(obj, np.ndarray):
        return [encode(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode(obj):
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            return Fraction(obj["num"], obj["den"])
        kind = obj.get("type")
        if kind == "Progression1D":
            return Progression1D(obj["a0"], obj["v"], obj["L"])
        if kind == "GAP2":
            return GAP2(obj["a0"], obj["a1"], obj["a2"], obj["L1"], obj["L2"])
        if kind == "IntSet":
            return IntSet(obj["elements"])
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(x) for x in obj]
    return obj


def dumps(kind: str, payload) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, "report": encode(payload)}
    return json.dumps(doc, sort_keys=True, indent=2)


def loads(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return {"kind": doc["kind"], "report": decode(doc["report"])}
