"""JSON documents read and written by the command line tool.

Every document carries a ``"schema"`` tag.  The input schemas:

``k3kit.cubic/1``
    ``{"schema": "k3kit.cubic/1", "support": [[a0, a1, a2, a3, a4], ...]}``
    Each entry is an exponent vector of a cubic monomial in x0..x4.  Strings
    such as ``"x1^2x4"`` are accepted in place of vectors.

``k3kit.net/1``
    ``{"schema": "k3kit.net/1", "quadrics": [Q1, Q2, Q3]}`` where each ``Qk`` is
    a list of terms ``{"i": i, "j": j, "numerator": p, "denominator": q}``
    (0 <= i <= j <= 5, ``denominator`` defaults to 1).  With
    ``"support_only": true`` the terms may omit the coefficient; unit
    coefficients are then used.

``k3kit.lattice/1``
    ``{"schema": "k3kit.lattice/1", "gram": [[...], ...]}``

``k3kit.vector/1``
    ``{"schema": "k3kit.vector/1", "coordinates": [...], "l": l}``
"""

from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .git_cubic import mono
from .git_net import QuadricNet
from .lattice import EvenLattice

CUBIC = "k3kit.cubic/1"
NET = "k3kit.net/1"
LATTICE = "k3kit.lattice/1"
VECTOR = "k3kit.vector/1"


class SchemaError(ValueError):
    """Malformed input document; the message names the offending location."""


_INT = {"type": "integer"}
_INT_ROWS = {"type": "array", "items": {"type": "array", "items": _INT}}

SCHEMAS = {
    CUBIC: {
        "type": "object",
        "required": ["schema", "support"],
        "additionalProperties": False,
        "properties": {
            "schema": {"const": CUBIC},
            "support": {
                "type": "array",
                "minItems": 1,
                "items": {"oneOf": [
                    {"type": "array", "items": {"type": "integer", "minimum": 0},
                     "minItems": 5, "maxItems": 5},
                    {"type": "string"},
                ]},
            },
        },
    },
    NET: {
        "type": "object",
        "required": ["schema", "quadrics"],
        "additionalProperties": False,
        "properties": {
            "schema": {"const": NET},
            "support_only": {"type": "boolean"},
            "quadrics": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "items": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["i", "j"],
                        "additionalProperties": False,
                        "properties": {
                            "i": {"type": "integer", "minimum": 0, "maximum": 5},
                            "j": {"type": "integer", "minimum": 0, "maximum": 5},
                            "numerator": _INT,
                            "denominator": {"type": "integer", "not": {"const": 0}},
                        },
                    },
                },
            },
        },
    },
    LATTICE: {
        "type": "object",
        "required": ["schema", "gram"],
        "additionalProperties": False,
        "properties": {"schema": {"const": LATTICE}, "gram": _INT_ROWS},
    },
    VECTOR: {
        "type": "object",
        "required": ["schema", "coordinates"],
        "additionalProperties": False,
        "properties": {
            "schema": {"const": VECTOR},
            "coordinates": {"type": "array", "items": _INT},
            "l": {"type": "integer", "minimum": 1},
        },
    },
}


def _where(path) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)


def validate(doc, schema: str | None = None) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError("$: expected a JSON object")
    tag = doc.get("schema")
    if schema is not None and tag != schema:
        raise SchemaError(f"$.schema: expected {schema!r}, got {tag!r}")
    if tag not in SCHEMAS:
        raise SchemaError(f"$.schema: unknown schema {tag!r}")
    err = jsonschema.exceptions.best_match(
        jsonschema.Draft202012Validator(SCHEMAS[tag]).iter_errors(doc))
    if err is not None:
        raise SchemaError(f"{_where(err.absolute_path)}: {err.message}")
    return doc


def load(path: str, schema: str | None = None) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    return validate(doc, schema)


# -- cubic supports ---------------------------------------------------------

def cubic_from_doc(doc) -> list[tuple[int, ...]]:
    validate(doc, CUBIC)
    out = []
    for k, m in enumerate(doc["support"]):
        try:
            e = mono(m) if isinstance(m, str) else tuple(m)
        except ValueError as err:
            raise SchemaError(f"$.support[{k}]: {err}") from None
        if sum(e) != 3:
            raise SchemaError(f"$.support[{k}]: degree {sum(e)}, expected 3")
        out.append(e)
    return out


def cubic_to_doc(support) -> dict:
    return {"schema": CUBIC, "support": [list(m) for m in support]}


# -- nets -------------------------------------------------------------------

def net_from_doc(doc) -> QuadricNet:
    validate(doc, NET)
    support_only = doc.get("support_only", False)
    quadrics = []
    for a, terms in enumerate(doc["quadrics"]):
        Q = {}
        for b, t in enumerate(terms):
            if t["i"] > t["j"]:
                raise SchemaError(f"$.quadrics[{a}][{b}]: need i <= j")
            if "numerator" not in t and not support_only:
                raise SchemaError(f"$.quadrics[{a}][{b}]: missing 'numerator' "
                                  "(set support_only for unit coefficients)")
            c = Fraction(t.get("numerator", 1), t.get("denominator", 1))
            Q[(t["i"], t["j"])] = Q.get((t["i"], t["j"]), 0) + c
        quadrics.append(Q)
    if support_only:
        return QuadricNet.from_supports([list(Q) for Q in quadrics])
    return QuadricNet(quadrics)


def net_to_doc(net: QuadricNet) -> dict:
    quadrics = []
    for Q in net.quadrics:
        quadrics.append([{"i": i, "j": j, "numerator": c.numerator, "denominator": c.denominator}
                         for (i, j), c in sorted(Q.items())])
    doc = {"schema": NET, "quadrics": quadrics}
    if net.support_only:
        doc["support_only"] = True
    return doc


# -- lattices and vectors ---------------------------------------------------

def lattice_from_doc(doc) -> EvenLattice:
    validate(doc, LATTICE)
    return EvenLattice(doc["gram"])


def lattice_to_doc(lat: EvenLattice) -> dict:
    return {"schema": LATTICE, "gram": [list(r) for r in lat.gram]}


def vector_to_doc(v, l: int | None = None) -> dict:
    doc = {"schema": VECTOR, "coordinates": [int(x) for x in v]}
    if l is not None:
        doc["l"] = int(l)
    return doc


def vector_from_doc(doc) -> tuple[list[int], int | None]:
    validate(doc, VECTOR)
    return list(doc["coordinates"]), doc.get("l")
