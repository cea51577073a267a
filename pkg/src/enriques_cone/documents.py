"""JSON documents for lattices, vectors, isometries, chambers and reports.

Integers are written as decimal strings so no reader loses precision;
readers accept either strings or JSON numbers.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any

from .cone import Chamber, ConeFrame
from .lattice import Isometry, Lattice, make_standard

__all__ = [
    "encode",
    "dumps",
    "digest",
    "lattice_doc",
    "load_lattice",
    "vector_doc",
    "load_vector",
    "isometry_doc",
    "load_isometry",
    "chamber_doc",
    "load_chamber",
]


def encode(obj: Any) -> Any:
    """Recursively turn ints into decimal strings (bools and None are kept)."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):  # numpy scalars
        return encode(obj.item())
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(encode(obj), indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def digest(obj: Any) -> str:
    raw = json.dumps(encode(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()


def _ints(v) -> tuple[int, ...]:
    return tuple(int(x) for x in v)


def lattice_doc(lattice: Lattice) -> dict:
    return {"rank": lattice.rank, "gram": [list(r) for r in lattice.gram]}


def load_lattice(doc) -> Lattice:
    """A lattice from a document, or from a standard name string."""
    if isinstance(doc, str):
        return make_standard(doc)
    gram = tuple(_ints(r) for r in doc["gram"])
    if "rank" in doc and int(doc["rank"]) != len(gram):
        raise ValueError("rank does not match the Gram matrix")
    return Lattice(gram, degenerate=bool(doc.get("degenerate", False)))


def vector_doc(v) -> dict:
    return {"coords": list(v)}


def load_vector(doc) -> tuple[int, ...]:
    if isinstance(doc, dict):
        doc = doc["coords"]
    if isinstance(doc, str):
        doc = [x for x in doc.replace(" ", "").split(",") if x]
    return _ints(doc)


def isometry_doc(m: Isometry) -> dict:
    return {"matrix": [list(r) for r in m.matrix]}


def load_isometry(doc) -> Isometry:
    rows = doc["matrix"] if isinstance(doc, dict) else doc
    return Isometry(tuple(_ints(r) for r in rows))


def chamber_doc(c: Chamber) -> dict:
    return {
        "frame": {"lattice": lattice_doc(c.lattice), "seed": vector_doc(c.frame.seed)},
        "walls": [vector_doc(b) for b in c.walls],
        "witness": vector_doc(c.witness),
        "generic": c.generic,
    }


def load_chamber(doc) -> Chamber:
    frame = ConeFrame(load_lattice(doc["frame"]["lattice"]), load_vector(doc["frame"]["seed"]))
    walls = [load_vector(b) for b in doc["walls"]]
    generic = doc.get("generic")
    if "witness" in doc:
        return Chamber(frame, walls, load_vector(doc["witness"]), bool(generic))
    return Chamber.from_walls(frame, walls, generic)
