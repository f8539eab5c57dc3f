"""Surface documents (JSON) and the serialized forms of logs and connections.

A document looks like::

    {
      "alphabet": ["A", "B"],
      "top": ["A", "B"],
      "bottom": ["B", "A"],
      "basis": {"sqrt2": "sqrt(2)"},
      "lambda": {"A": {"1": "1"}, "B": {"sqrt2": "1"}},
      "tau": {"A": {"1": "1"}, "B": {"1": "-1"}}
    }

Coefficients are rational strings.  Basis witnesses are decimal strings
with at least 50 significant digits, or ``sqrt(N)``.
"""

from __future__ import annotations

import json

from .errors import NotAPermutation, ParseError, ValidationError
from .iet import PermutationPair
from .numeric import Basis, BasisSymbol, SymbolicReal
from .suspension import Surface

KEYS = ("alphabet", "top", "bottom", "basis", "lambda", "tau")


def parse_document(obj) -> Surface:
    if not isinstance(obj, dict):
        raise ParseError("a surface document must be a JSON object")
    missing = [k for k in KEYS if k not in obj and k not in ("alphabet", "basis")]
    if missing:
        raise ParseError(f"missing keys: {missing}")
    unknown = sorted(set(obj) - set(KEYS))
    if unknown:
        raise ParseError(f"unknown keys: {unknown}")
    for k in ("top", "bottom"):
        if not isinstance(obj[k], list) or not all(isinstance(s, str) for s in obj[k]):
            raise ParseError(f"{k!r} must be a list of symbol names")
    alphabet = obj.get("alphabet", obj["top"])
    witnesses = obj.get("basis", {})
    if not isinstance(witnesses, dict):
        raise ParseError("'basis' must map names to witness strings")
    basis = Basis([BasisSymbol(k, v) for k, v in witnesses.items() if k != "1"])
    try:
        pair = PermutationPair(tuple(obj["top"]), tuple(obj["bottom"]), tuple(alphabet))
    except NotAPermutation as exc:
        raise ValidationError(str(exc), ("permutation",)) from exc
    vectors = {}
    for key in ("lambda", "tau"):
        table = obj[key]
        if not isinstance(table, dict) or set(table) != set(pair.alphabet):
            raise ParseError(f"{key!r} must give one value per symbol of {list(pair.alphabet)}")
        vectors[key] = {a: SymbolicReal.from_json(table[a]) for a in pair.alphabet}
    return Surface(pair, vectors["lambda"], vectors["tau"], basis)


def parse_surface(text: str) -> Surface:
    """Parse and fully validate a surface document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_document(obj)


def load_surface(path) -> Surface:
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read())


def surface_document(surface: Surface) -> dict:
    used = set()
    for v in list(surface.lengths.values()) + list(surface.tau.values()):
        used.update(v.names())
    witnesses = {k: w for k, w in surface.basis.witnesses().items() if k in used}
    return {
        "alphabet": list(surface.alphabet),
        "top": list(surface.pair.top),
        "bottom": list(surface.pair.bottom),
        "basis": dict(sorted(witnesses.items())),
        "lambda": {a: surface.lengths[a].to_json() for a in surface.alphabet},
        "tau": {a: surface.tau[a].to_json() for a in surface.alphabet},
    }


def dump_surface(surface: Surface) -> str:
    """Canonical text: fixed key order, ``"1"`` first in coefficient maps."""
    return json.dumps(surface_document(surface), indent=2) + "\n"


def dump_connections(connections, max_length) -> str:
    return json.dumps({
        "max_length": SymbolicReal.coerce(max_length).to_json(),
        "connections": [c.to_json() for c in connections],
    }, indent=2) + "\n"
