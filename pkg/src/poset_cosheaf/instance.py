"""JSON instance files: a poset, optional named opens, a diagram and named covers.

Layout::

    {
      "poset":   {"elements": ["a", "b"], "relations": [["a", "b"]]},
      "opens":   [{"name": "U", "members": ["a"]}, ...],          (optional)
      "diagram": {"category": "vect", "objects": {"a": 1, ...},
                  "maps": {"a<b": [["1"], ...]}},                  (optional)
      "covers":  {"C": {"target": ["a", "b"], "members": [["a"], ["a", "b"]]}},
      "metadata": {"key": "free text"}
    }

The diagram is indexed by the poset elements, or by the opens when an
``opens`` block is present (ordered by inclusion).  Maps are given on Hasse
edges only: matrices row-major with rationals as ``"a/b"`` strings, finite-set
maps as function tables.  :func:`dumps` is canonical (sorted keys, Hasse
relations, lowest-term rationals), so dumps(loads(dumps(x))) == dumps(x).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .covers import Cover
from .errors import CosheafError, ParseError, ValidationError
from .kan import hat
from .poset import DownSet, FinitePoset, from_named_relations
from .valcat import VECT, CATEGORIES, Diagram, FinSetMap, Matrix


@dataclass(eq=False)
class InstanceFile:
    poset: FinitePoset
    diagram: Diagram | None = None
    opens: tuple[DownSet, ...] | None = None
    open_names: tuple[str, ...] | None = None
    covers: dict[str, Cover] = field(default_factory=dict)
    metadata: dict[str, str] = field(default_factory=dict)

    def precosheaf(self):
        """The diagram as a precosheaf on opens; a poset-indexed diagram is extended to hat(F)."""
        from .cosheaf import Precosheaf
        if self.diagram is None:
            raise ValidationError("instance has no diagram")
        if self.opens is not None:
            return Precosheaf(self.diagram, self.opens)
        return Precosheaf.from_kan(hat(self.diagram))

    def cover(self, name: str) -> Cover:
        try:
            return self.covers[name]
        except KeyError:
            raise ValidationError(f"no cover named {name!r}; have {sorted(self.covers)}") from None

    def __eq__(self, other):
        if not isinstance(other, InstanceFile):
            return NotImplemented
        return (self.poset == other.poset and self.diagram == other.diagram
                and self.opens == other.opens and self.open_names == other.open_names
                and self.covers == other.covers and self.metadata == other.metadata)


# ------------------------------------------------------------------ writing

def _element_list(S: DownSet) -> list[str]:
    return [S.parent.names[p] for p in S.members]


def _map_json(m) -> Any:
    if isinstance(m, Matrix):
        return [[str(x) for x in row] for row in m.entries]
    return list(m.table)


def diagram_json(D: Diagram) -> dict:
    B = D.base
    return {
        "category": D.category,
        "objects": {B.names[p]: D.objects[p] for p in B.elements},
        "maps": {f"{B.names[p]}<{B.names[q]}": _map_json(m) for (p, q), m in D.edge_maps.items()},
    }


def cover_json(C: Cover) -> dict:
    return {"target": _element_list(C.target), "members": [_element_list(m) for m in C.members]}


def to_json(inst: InstanceFile) -> dict:
    P = inst.poset
    out: dict[str, Any] = {
        "poset": {
            "elements": list(P.names),
            "relations": [[P.names[p], P.names[q]] for p, q in P.hasse_edges],
        },
        "metadata": dict(inst.metadata),
    }
    if inst.opens is not None:
        out["opens"] = [{"name": n, "members": _element_list(S)}
                        for n, S in zip(inst.open_names, inst.opens)]
    if inst.diagram is not None:
        out["diagram"] = diagram_json(inst.diagram)
    if inst.covers:
        out["covers"] = {name: cover_json(C) for name, C in inst.covers.items()}
    return out


def dumps(inst: InstanceFile) -> str:
    return json.dumps(to_json(inst), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save(inst: InstanceFile, path: str | Path) -> None:
    Path(path).write_text(dumps(inst), encoding="utf-8")


# ------------------------------------------------------------------ reading

def _need(block: Any, key: str, where: str, kind: type) -> Any:
    if not isinstance(block, dict) or key not in block:
        raise ParseError(f"{where}: missing field {key!r}")
    value = block[key]
    if not isinstance(value, kind):
        raise ParseError(f"{where}.{key}: expected {kind.__name__}")
    return value


def _down_set(P: FinitePoset, names: Any, where: str) -> DownSet:
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ParseError(f"{where}: expected a list of element names")
    try:
        return DownSet.of(P, names)
    except KeyError as exc:
        raise ValidationError(f"{where}: {exc.args[0]}") from None
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"{where}: rational entries are strings like '3' or '-1/2'")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: cannot read {x!r} as a rational") from None


def _parse_map(category: str, raw: Any, dom: int, cod: int, where: str):
    if category == VECT:
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise ParseError(f"{where}: expected a row-major matrix")
        if len(raw) != cod or any(len(r) != dom for r in raw):
            raise ValidationError(f"{where}: expected a {cod}x{dom} matrix")
        return Matrix(cod, dom, tuple(tuple(_rational(x, where) for x in r) for r in raw))
    if not isinstance(raw, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
        raise ParseError(f"{where}: expected a function table of integers")
    try:
        return FinSetMap(dom, cod, tuple(raw))
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def parse_diagram(block: Any, base: FinitePoset, where: str = "diagram") -> Diagram:
    category = _need(block, "category", where, str)
    if category not in CATEGORIES:
        raise ParseError(f"{where}.category: expected one of {CATEGORIES}")
    objects_raw = _need(block, "objects", where, dict)
    maps_raw = _need(block, "maps", where, dict)
    if set(objects_raw) != set(base.names):
        missing = sorted(set(base.names) - set(objects_raw))
        extra = sorted(set(objects_raw) - set(base.names))
        raise ValidationError(f"{where}.objects: missing {missing}, unknown {extra}")
    objects = []
    for name in base.names:
        v = objects_raw[name]
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ParseError(f"{where}.objects.{name}: expected a non-negative integer")
        objects.append(v)
    edges = {}
    hasse = set(base.hasse_edges)
    for key, raw in maps_raw.items():
        parts = key.split("<")
        if len(parts) != 2:
            raise ParseError(f"{where}.maps: key {key!r} is not of the form 'p<q'")
        try:
            p, q = base.index(parts[0]), base.index(parts[1])
        except KeyError as exc:
            raise ValidationError(f"{where}.maps.{key}: {exc.args[0]}") from None
        if (p, q) not in hasse:
            raise ValidationError(f"{where}.maps.{key}: maps are given on Hasse edges only")
        edges[(p, q)] = _parse_map(category, raw, objects[p], objects[q], f"{where}.maps.{key}")
    try:
        return Diagram(base, category, objects, edges)
    except CosheafError as exc:
        raise ValidationError(f"{where}: {exc}") from None
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def from_json(data: Any) -> InstanceFile:
    if not isinstance(data, dict):
        raise ParseError("top level must be a JSON object")
    pblock = _need(data, "poset", "instance", dict)
    elements = _need(pblock, "elements", "poset", list)
    relations = _need(pblock, "relations", "poset", list)
    if not all(isinstance(e, str) and e and "<" not in e for e in elements):
        raise ParseError("poset.elements: names are non-empty strings without '<'")
    for k, r in enumerate(relations):
        if not (isinstance(r, list) and len(r) == 2 and all(isinstance(x, str) for x in r)):
            raise ParseError(f"poset.relations[{k}]: expected a pair of element names")
    try:
        P = from_named_relations(elements, [tuple(r) for r in relations])
    except KeyError as exc:
        raise ValidationError(f"poset.relations: unknown element {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ValidationError(f"poset: {exc}") from None

    inst = InstanceFile(P)
    meta = data.get("metadata", {})
    if not isinstance(meta, dict) or not all(isinstance(v, str) for v in meta.values()):
        raise ParseError("metadata: expected an object of strings")
    inst.metadata = dict(meta)

    if "opens" in data:
        if not isinstance(data["opens"], list):
            raise ParseError("opens: expected a list")
        names, opens = [], []
        for k, entry in enumerate(data["opens"]):
            name = _need(entry, "name", f"opens[{k}]", str)
            if not name or "<" in name:
                raise ParseError(f"opens[{k}].name: non-empty, without '<'")
            names.append(name)
            opens.append(_down_set(P, _need(entry, "members", f"opens[{k}]", list), f"opens[{k}]"))
        if len(set(names)) != len(names) or len({S.mask for S in opens}) != len(opens):
            raise ValidationError("opens: names and member sets must be distinct")
        masks = [S.mask for S in opens]
        base = FinitePoset(tuple(names), tuple(
            sum(1 << j for j, b in enumerate(masks) if b & ~a == 0) for a in masks))
        inst.opens, inst.open_names = tuple(opens), tuple(names)
    else:
        base = P

    if "diagram" in data:
        inst.diagram = parse_diagram(data["diagram"], base)

    covers = data.get("covers", {})
    if not isinstance(covers, dict):
        raise ParseError("covers: expected an object")
    for name, block in covers.items():
        where = f"covers.{name}"
        target = _down_set(P, _need(block, "target", where, list), f"{where}.target")
        members_raw = _need(block, "members", where, list)
        members = [_down_set(P, m, f"{where}.members[{k}]") for k, m in enumerate(members_raw)]
        try:
            inst.covers[name] = Cover.of(target, members)
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from None
    return inst


def loads(text: str) -> InstanceFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_json(data)


def load(path: str | Path) -> InstanceFile:
    return loads(Path(path).read_text(encoding="utf-8"))


def builtin_path(name: str) -> Path:
    """Path of a fixture shipped with the package, e.g. ``builtin_path("figure1")``."""
    from importlib.resources import files
    return Path(str(files("poset_cosheaf") / "fixtures" / f"{name}.json"))
