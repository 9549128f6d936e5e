"""Instance files: a single JSON document with a kind tag, integer schema
version, and every rational encoded as a "p/q" string (no floats on disk).

Satisfiability instances may alternatively travel as weighted-CNF text;
`load_instance_text` sniffs which of the two formats it was handed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Union

from . import oss
from .auxstructs import OsiInstance, PathsInstance
from .osa import ArborescenceInstance
from .osm import MatchingInstance
from .oss import SatInstance
from .seqopt import LowerBoundInstance

SCHEMA_VERSION = 1

Instance = Union[MatchingInstance, ArborescenceInstance, SatInstance,
                 OsiInstance, PathsInstance, LowerBoundInstance]

_KINDS = {
    MatchingInstance: "osm",
    ArborescenceInstance: "osa",
    SatInstance: "oss",
    OsiInstance: "osi",
    PathsInstance: "paths",
    LowerBoundInstance: "lowerbound",
}


def instance_kind(inst: Instance) -> str:
    try:
        return _KINDS[type(inst)]
    except KeyError:
        raise TypeError(f"unknown instance type {type(inst).__name__}") from None


def encode_rational(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def decode_rational(s) -> Fraction:
    if not isinstance(s, str):
        raise ValueError(f"rationals must be 'p/q' strings, got {s!r}")
    return Fraction(s)


def _weights_out(weights) -> list:
    return [[None if w is None else encode_rational(w) for w in row]
            for row in weights]


def _weights_in(rows, allow_none: bool) -> tuple:
    out = []
    for row in rows:
        out.append(tuple(None if (w is None and allow_none) else decode_rational(w)
                         for w in row))
    return tuple(out)


def instance_to_dict(inst: Instance) -> dict:
    kind = instance_kind(inst)
    doc: dict = {"schema_version": SCHEMA_VERSION, "kind": kind, "n": inst.n}
    if kind == "osm":
        doc["weights"] = _weights_out(inst.weights)
        doc["prefs"] = [list(p) for p in inst.prefs]
    elif kind == "osa":
        doc["weights"] = _weights_out(inst.weights)
        doc["prefs"] = [list(p) for p in inst.prefs]
    elif kind == "oss":
        doc["clauses"] = [
            {"literals": sorted(lits, key=lambda l: (abs(l), l < 0)),
             "weight": encode_rational(w)}
            for lits, w in inst.clauses
        ]
        doc["tie_default"] = list(inst.tie_default)
    elif kind == "osi":
        doc["edges"] = [list(e) for e in inst.edges()]
    elif kind == "paths":
        doc["weights"] = _weights_out(inst.weights)
    elif kind == "lowerbound":
        doc["c"] = inst.c
        doc["hidden_pi"] = list(inst.hidden_pi)
    return doc


def instance_from_dict(doc: dict) -> Instance:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    kind = doc.get("kind")
    n = doc.get("n")
    if kind == "osm":
        return MatchingInstance(n, _weights_in(doc["weights"], allow_none=False),
                                tuple(tuple(p) for p in doc["prefs"]))
    if kind == "osa":
        return ArborescenceInstance(n, _weights_in(doc["weights"], allow_none=True),
                                    tuple(tuple(p) for p in doc["prefs"]))
    if kind == "oss":
        clauses = [(c["literals"], decode_rational(c["weight"]))
                   for c in doc["clauses"]]
        return oss.sat_instance(n, clauses, doc.get("tie_default"))
    if kind == "osi":
        return OsiInstance.from_edges(n, [tuple(e) for e in doc["edges"]])
    if kind == "paths":
        return PathsInstance(n, _weights_in(doc["weights"], allow_none=True))
    if kind == "lowerbound":
        return LowerBoundInstance(n, doc["c"], tuple(doc["hidden_pi"]))
    raise ValueError(f"unknown instance kind {kind!r}")


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2, sort_keys=True) + "\n"


def parse_instance(text: str) -> Instance:
    return instance_from_dict(json.loads(text))


def load_instance_text(text: str) -> Instance:
    """Parse an instance from JSON, or from weighted-CNF text for sat kinds."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_instance(text)
    if stripped[:1] in ("c", "p", "t"):
        return oss.from_wcnf(text)
    raise ValueError("unrecognized instance file format")


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return load_instance_text(fh.read())


def dump_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst))
