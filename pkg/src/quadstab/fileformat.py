"""JSON instance files.

Rationals travel as ``"p/q"`` strings (plain integers are accepted too),
the ambient bundle is spelled ``AMBIENT`` and vanishing tables are stored
as the list of nonzero unordered pairs.  Parsing only checks shape and
types and raises ``ParseError``; the mathematical invariants are checked
separately by ``validate_instance``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .checker import Element, SubbundleCatalog, as_pair, validate_catalog
from .core import TOP, VanishingPattern, WeightedFiltration, validate_filtration, validate_pattern
from .orthogonal import OrthogonalCatalog, validate_orthogonal
from .parabolic import ParabolicCatalog, validate_parabolic

KINDS = ("filtration", "catalog", "orthogonal", "parabolic")

_COMMON = {"kind", "ambient", "decorated"}
_CATALOG = _COMMON | {"elements", "containment", "vanishing"}
_ALLOWED = {
    "filtration": _COMMON | {"ranks", "degrees", "weights", "pattern"},
    "catalog": _CATALOG,
    "orthogonal": _CATALOG | {"perp", "twist", "radical"},
    "parabolic": _CATALOG | {"parabolic"},
}
_REQUIRED = {
    "filtration": {"kind", "ambient", "ranks", "degrees", "weights", "pattern"},
    "catalog": {"kind", "ambient", "elements"},
    "orthogonal": {"kind", "ambient", "elements", "perp"},
    "parabolic": {"kind", "ambient", "elements", "parabolic"},
}
_RATIONAL = re.compile(r"\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?")


class ParseError(ValueError):
    """The document is not a well-formed instance file."""


Payload = Union[tuple[WeightedFiltration, VanishingPattern], SubbundleCatalog, OrthogonalCatalog, ParabolicCatalog]


@dataclass(frozen=True)
class Decoration:
    b: int
    c: int
    nN: int


@dataclass(frozen=True)
class Instance:
    kind: str
    data: Payload
    decorated: Decoration | None = None

    @property
    def catalog(self) -> SubbundleCatalog:
        if self.kind == "catalog":
            return self.data
        if self.kind in ("orthogonal", "parabolic"):
            return self.data.catalog
        raise ParseError("a filtration instance has no catalog")


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, bool) or isinstance(text, float):
        raise ParseError(f"rational expected as 'p/q' string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rational expected, got {text!r}")
    match = _RATIONAL.fullmatch(text)
    if not match:
        raise ParseError(f"malformed rational {text!r}")
    num, den = int(match[1]), int(match[2] or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what}: integer expected, got {value!r}")
    return value


def _str(value: Any, what: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"{what}: string expected, got {value!r}")
    return value


def _list(value: Any, what: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{what}: list expected")
    return value


def _dict(value: Any, what: str, keys: set[str] | None = None) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{what}: object expected")
    if keys is not None:
        unknown = set(value) - keys
        missing = keys - set(value)
        if unknown or missing:
            raise ParseError(f"{what}: unknown keys {sorted(unknown)}, missing keys {sorted(missing)}")
    return value


def _id_pair(value: Any, what: str) -> tuple[str, str]:
    items = _list(value, what)
    if len(items) != 2:
        raise ParseError(f"{what}: pair expected")
    return _str(items[0], what), _str(items[1], what)


def _catalog(doc: dict) -> SubbundleCatalog:
    amb = _dict(doc["ambient"], "ambient", {"rank", "degree"})
    elements = []
    for n, raw in enumerate(_list(doc["elements"], "elements")):
        e = _dict(raw, f"elements[{n}]", {"id", "rank", "degree"})
        elements.append(Element(_str(e["id"], "element id"), _int(e["rank"], "rank"), _int(e["degree"], "degree")))
    containment = [_id_pair(p, "containment") for p in _list(doc.get("containment", []), "containment")]
    vanishing = [_id_pair(p, "vanishing") for p in _list(doc.get("vanishing", []), "vanishing")]
    return SubbundleCatalog(
        _int(amb["rank"], "ambient rank"),
        _int(amb["degree"], "ambient degree"),
        tuple(elements),
        frozenset(containment),
        frozenset(frozenset(p) for p in vanishing),
    )


def _id_map(value: Any, what: str) -> dict[str, str]:
    raw = _dict(value, what)
    return {_str(k, what): _str(v, what) for k, v in raw.items()}


def from_dict(doc: Any) -> Instance:
    doc = _dict(doc, "instance")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}, got {kind!r}")
    unknown = set(doc) - _ALLOWED[kind]
    if unknown:
        raise ParseError(f"unknown keys for kind {kind}: {sorted(unknown)}")
    missing = _REQUIRED[kind] - set(doc)
    if missing:
        raise ParseError(f"missing keys for kind {kind}: {sorted(missing)}")
    decorated = None
    if "decorated" in doc:
        meta = _dict(doc["decorated"], "decorated", {"b", "c", "nN"})
        decorated = Decoration(_int(meta["b"], "b"), _int(meta["c"], "c"), _int(meta["nN"], "nN"))

    if kind == "filtration":
        amb = _dict(doc["ambient"], "ambient", {"rank", "degree"})
        rows = []
        for row in _list(doc["pattern"], "pattern"):
            rows.append(tuple(_int(x, "pattern entry") for x in _list(row, "pattern row")))
        f = WeightedFiltration(
            _int(amb["rank"], "ambient rank"),
            _int(amb["degree"], "ambient degree"),
            tuple(_int(x, "rank") for x in _list(doc["ranks"], "ranks")),
            tuple(_int(x, "degree") for x in _list(doc["degrees"], "degrees")),
            tuple(parse_rational(x) for x in _list(doc["weights"], "weights")),
        )
        return Instance(kind, (f, VanishingPattern(tuple(rows))), decorated)

    cat = _catalog(doc)
    if kind == "catalog":
        return Instance(kind, cat, decorated)
    if kind == "orthogonal":
        oc = OrthogonalCatalog(
            cat,
            _id_map(doc["perp"], "perp"),
            _int(doc.get("twist", 0), "twist"),
            _id_map(doc.get("radical", {}), "radical"),
        )
        return Instance(kind, oc, decorated)
    raw = _dict(doc["parabolic"], "parabolic")
    p = {_str(k, "parabolic"): _int(v, "parabolic") for k, v in raw.items()}
    return Instance(kind, ParabolicCatalog(cat, p), decorated)


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_dict(doc)


def load(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _catalog_dict(cat: SubbundleCatalog) -> dict:
    return {
        "ambient": {"rank": cat.rank, "degree": cat.degree},
        "elements": [{"id": e.id, "rank": e.rank, "degree": e.degree} for e in cat.elements],
        "containment": [list(p) for p in sorted(cat.containment)],
        "vanishing": sorted(list(as_pair(p)) for p in cat.vanishing),
    }


def to_dict(inst: Instance) -> dict:
    doc: dict[str, Any] = {"kind": inst.kind}
    if inst.kind == "filtration":
        f, m = inst.data
        doc["ambient"] = {"rank": f.rank, "degree": f.degree}
        doc["ranks"] = list(f.ranks)
        doc["degrees"] = list(f.degrees)
        doc["weights"] = [format_rational(w) for w in f.weights]
        doc["pattern"] = [list(row) for row in m.rows]
    else:
        doc.update(_catalog_dict(inst.catalog))
    if inst.kind == "orthogonal":
        doc["perp"] = dict(sorted(inst.data.perp.items()))
        doc["twist"] = inst.data.twist
        doc["radical"] = dict(sorted(inst.data.radical.items()))
    elif inst.kind == "parabolic":
        doc["parabolic"] = dict(sorted(inst.data.p.items()))
    if inst.decorated is not None:
        doc["decorated"] = {"b": inst.decorated.b, "c": inst.decorated.c, "nN": inst.decorated.nN}
    return doc


def dumps(inst: Instance, indent: int | None = None) -> str:
    return json.dumps(to_dict(inst), indent=indent, sort_keys=indent is None)


def validate_instance(inst: Instance) -> list[str]:
    if inst.kind == "filtration":
        f, m = inst.data
        problems = validate_filtration(f) + validate_pattern(m)
        if m.size != f.length + 1:
            problems.append(f"pattern size {m.size} does not match filtration length {f.length}")
        return problems
    if inst.kind == "catalog":
        return validate_catalog(inst.data)
    if inst.kind == "orthogonal":
        return validate_orthogonal(inst.data)
    return validate_parabolic(inst.data)
