"""Value categories, poset-indexed diagrams and their colimits.

Two co-complete targets are provided:

* ``"vect"``: finite-dimensional vector spaces over the rationals.  An object
  is its dimension; a map is a :class:`Matrix` of exact ``Fraction`` entries.
* ``"finset"``: finite sets.  An object is its cardinality; a map is a
  :class:`FinSetMap` function table.

Maps compose with ``@`` (``f @ g`` is f after g) in both categories.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from . import linalg
from .errors import NotACocone, NotComparable, NotFunctorial
from .poset import FinitePoset, PosetMap, bits

VECT = "vect"
FINSET = "finset"
CATEGORIES = (VECT, FINSET)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Matrix:
    """A linear map k^cols -> k^rows, stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def of(cls, data: Sequence[Sequence], rows: int | None = None, cols: int | None = None) -> "Matrix":
        rows = len(data) if rows is None else rows
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(rows, cols, tuple(tuple(Fraction(x) for x in r) for r in data))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple((_ZERO,) * cols for _ in range(rows)))

    @property
    def domain(self) -> int:
        return self.cols

    @property
    def codomain(self) -> int:
        return self.rows

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} after {other.rows}x{other.cols}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = tuple(
            tuple(sum((a * b for a, b in zip(row, col) if a and b), _ZERO) for col in cols)
            for row in self.entries)
        return Matrix(self.rows, other.cols, out)

    def rank(self) -> int:
        return linalg.rank(self.entries, self.cols)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


@dataclass(frozen=True)
class FinSetMap:
    domain: int
    codomain: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.domain:
            raise ValueError("table length must equal the domain cardinality")
        if any(not 0 <= v < self.codomain for v in self.table):
            raise ValueError("table entry outside the codomain")

    @classmethod
    def identity(cls, n: int) -> "FinSetMap":
        return cls(n, n, tuple(range(n)))

    def __matmul__(self, other: "FinSetMap") -> "FinSetMap":
        if self.domain != other.codomain:
            raise ValueError("maps are not composable")
        return FinSetMap(other.domain, self.codomain, tuple(self.table[v] for v in other.table))

    def __call__(self, x: int) -> int:
        return self.table[x]


ValueMap = Union[Matrix, FinSetMap]


def identity(category: str, obj: int) -> ValueMap:
    return Matrix.identity(obj) if category == VECT else FinSetMap.identity(obj)


def is_injective(m: ValueMap) -> bool:
    if isinstance(m, Matrix):
        return m.rank() == m.cols
    return len(set(m.table)) == m.domain


def is_surjective(m: ValueMap) -> bool:
    if isinstance(m, Matrix):
        return m.rank() == m.rows
    return len(set(m.table)) == m.codomain


def is_isomorphism(m: ValueMap) -> bool:
    if isinstance(m, Matrix):
        return m.rows == m.cols and m.rank() == m.rows
    return m.domain == m.codomain and len(set(m.table)) == m.domain


# ------------------------------------------------------------------ diagrams

@dataclass(frozen=True)
class Functoriality:
    """Outcome of a path-independence check; carries a witness on failure."""

    ok: bool
    pair: tuple[int, int] | None = None
    paths: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __bool__(self) -> bool:
        return self.ok


class Diagram:
    """A functor from a finite poset into ``vect`` or ``finset``.

    ``edge_maps`` gives F(p <= q) on the Hasse edges only; every other
    relation is obtained by composition.  Construction verifies path
    independence unless ``check=False``.
    """

    def __init__(self, base: FinitePoset, category: str, objects: Sequence[int],
                 edge_maps: Mapping[tuple[int, int], ValueMap], check: bool = True):
        if category not in CATEGORIES:
            raise ValueError(f"unknown category {category!r}")
        if len(objects) != len(base):
            raise ValueError("need one object per base element")
        if any(not isinstance(o, int) or o < 0 for o in objects):
            raise ValueError("objects are non-negative integers (dimension or cardinality)")
        edges = set(base.hasse_edges)
        if set(edge_maps) != edges:
            extra = sorted(set(edge_maps) - edges)
            if extra:
                p, q = extra[0]
                raise ValueError(f"map given on non-Hasse pair {base.names[p]}<{base.names[q]}")
            p, q = sorted(edges - set(edge_maps))[0]
            raise ValueError(f"missing map on Hasse edge {base.names[p]}<{base.names[q]}")
        kind = Matrix if category == VECT else FinSetMap
        for (p, q), m in edge_maps.items():
            if not isinstance(m, kind):
                raise TypeError(f"{category} diagram needs {kind.__name__} edge maps")
            if m.domain != objects[p] or m.codomain != objects[q]:
                raise ValueError(f"edge map {base.names[p]}<{base.names[q]} has the wrong shape")
        self.base = base
        self.category = category
        self.objects = tuple(objects)
        self.edge_maps = dict(sorted(edge_maps.items()))
        self._induced: dict[tuple[int, int], ValueMap] | None = None
        self._functoriality: Functoriality | None = None
        if check:
            result = check_functorial(self)
            if not result:
                p, q = result.pair
                raise NotFunctorial(
                    f"paths {result.paths[0]} and {result.paths[1]} from "
                    f"{base.names[p]} to {base.names[q]} compose differently")

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (self.base == other.base and self.category == other.category
                and self.objects == other.objects and self.edge_maps == other.edge_maps)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Diagram({self.category}, {len(self.base)} objects, dims={list(self.objects)})"

    def _compose_all(self) -> None:
        P = self.base
        induced: dict[tuple[int, int], ValueMap] = {}
        via: dict[tuple[int, int], int] = {}
        conflict = None
        for q in P.linear_extension:
            induced[(q, q)] = identity(self.category, self.objects[q])
            for r in P.lower_covers[q]:
                e = self.edge_maps[(r, q)]
                for p in bits(P.down[r]):
                    cand = e @ induced[(p, r)]
                    key = (p, q)
                    if key not in induced:
                        induced[key] = cand
                        via[key] = r
                    elif conflict is None and induced[key] != cand:
                        conflict = (p, q, via[key], r)

        def path(p, q):
            out = [q]
            while q != p:
                q = via[(p, q)]
                out.append(q)
            return tuple(reversed(out))

        self._induced = induced
        if conflict is None:
            self._functoriality = Functoriality(True)
        else:
            p, q, r1, r2 = conflict
            self._functoriality = Functoriality(False, (p, q), (path(p, r1) + (q,), path(p, r2) + (q,)))

    @property
    def induced(self) -> dict[tuple[int, int], ValueMap]:
        if self._induced is None:
            self._compose_all()
        return self._induced


def check_functorial(D: Diagram) -> Functoriality:
    """Path independence of the Hasse-edge maps, with two differing paths on failure."""
    if D._functoriality is None:
        D._compose_all()
    return D._functoriality


def induced_map(D: Diagram, p: int, q: int) -> ValueMap:
    """F(p <= q), the composite along any Hasse path."""
    if not D.base.leq(p, q):
        raise NotComparable(f"{D.base.names[p]} is not below {D.base.names[q]}")
    return D.induced[(p, q)]


def restrict(D: Diagram, E: PosetMap) -> Diagram:
    """The pulled-back diagram D o E over E.source."""
    if E.target != D.base:
        raise ValueError("map does not land in the diagram's base")
    objects = [D.objects[E(a)] for a in E.source.elements]
    edges = {(a, b): induced_map(D, E(a), E(b)) for a, b in E.source.hasse_edges}
    return Diagram(E.source, D.category, objects, edges, check=False)


def constant_diagram(P: FinitePoset, category: str, obj: int) -> Diagram:
    one = identity(category, obj)
    return Diagram(P, category, [obj] * len(P), {e: one for e in P.hasse_edges}, check=False)


def indicator_diagram(P: FinitePoset, b: int) -> Diagram:
    """Finite sets: a singleton on every q >= b, empty elsewhere.

    Its colimit is a point, while the colimit of its pullback along E counts
    the components of the comma poset over b, so it turns a disconnected
    comma into a change of colimit cardinality.
    """
    objects = [1 if P.leq(b, q) else 0 for q in P.elements]
    edges = {(p, q): FinSetMap(objects[p], objects[q], (0,) * objects[p]) for p, q in P.hasse_edges}
    return Diagram(P, FINSET, objects, edges, check=False)


# ----------------------------------------------------------------- colimits

@dataclass(frozen=True, eq=False)
class ColimitResult:
    """A colimit object with its cocone legs.

    ``section`` records how to read off the universal map: for vect the
    quotient coordinates (global indices into the direct sum), for finset one
    representative (element, point) per class.
    """

    diagram: Diagram
    object: int
    legs: tuple[ValueMap, ...]
    section: tuple

    @property
    def category(self) -> str:
        return self.diagram.category


def _relations(D: Diagram, relations: str):
    if relations == "hasse":
        return D.edge_maps.items()
    if relations == "all":
        return [((p, q), D.induced[(p, q)]) for p, q in D.base.relation_pairs() if p != q]
    raise ValueError(f"unknown relation set {relations!r}")


def colimit(D: Diagram, relations: str = "hasse") -> ColimitResult:
    """Colimit of D, generated by the Hasse-edge relations (or all comparable pairs)."""
    if D.category == VECT:
        return _vect_colimit(D, relations)
    return _finset_colimit(D, relations)


def _vect_colimit(D: Diagram, relations: str) -> ColimitResult:
    offsets = []
    total = 0
    for d in D.objects:
        offsets.append(total)
        total += d
    gens = []
    for (p, q), A in _relations(D, relations):
        op, oq = offsets[p], offsets[q]
        for k in range(A.cols):
            g = [0] * total
            for i in range(A.rows):
                g[oq + i] = A.entries[i][k]
            g[op + k] -= 1
            gens.append(g)
    ech = linalg.echelon(gens, total)
    pivots = {pc for pc, _ in ech}
    free = [c for c in range(total) if c not in pivots]
    quotient = []
    for c in free:
        row = [_ZERO] * total
        row[c] = _ONE
        for pc, r in ech:
            if r[c]:
                row[pc] = Fraction(-r[c], r[pc])
        quotient.append(row)
    m = len(free)
    legs = tuple(
        Matrix(m, d, tuple(tuple(row[o:o + d]) for row in quotient))
        for o, d in zip(offsets, D.objects))
    return ColimitResult(D, m, legs, tuple(free))


def _finset_colimit(D: Diagram, relations: str) -> ColimitResult:
    offsets = []
    total = 0
    for c in D.objects:
        offsets.append(total)
        total += c
    parent = list(range(total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (p, q), f in _relations(D, relations):
        for x, y in enumerate(f.table):
            a, b = find(offsets[p] + x), find(offsets[q] + y)
            if a != b:
                parent[max(a, b)] = min(a, b)
    cls: dict[int, int] = {}
    reps = []
    owner = [p for p, c in enumerate(D.objects) for _ in range(c)]
    labels = []
    for g in range(total):
        root = find(g)
        if root not in cls:
            cls[root] = len(reps)
            reps.append((owner[g], g - offsets[owner[g]]))
        labels.append(cls[root])
    n = len(reps)
    legs = tuple(FinSetMap(c, n, tuple(labels[o:o + c])) for o, c in zip(offsets, D.objects))
    return ColimitResult(D, n, legs, tuple(reps))


def _check_cocone(D: Diagram, cocone: Sequence[ValueMap], codomain: int) -> None:
    for p, c in enumerate(cocone):
        if c.domain != D.objects[p] or c.codomain != codomain:
            raise NotACocone(f"cocone map at {D.base.names[p]} has the wrong shape")
    for (p, q), e in D.edge_maps.items():
        if cocone[q] @ e != cocone[p]:
            raise NotACocone(f"cocone does not commute over {D.base.names[p]}<{D.base.names[q]}")


def factor_through(C: ColimitResult, cocone: Sequence[ValueMap] | Mapping[int, ValueMap],
                   codomain: int | None = None) -> ValueMap:
    """The unique u with u @ leg(p) == cocone(p) for every p."""
    D = C.diagram
    if isinstance(cocone, Mapping):
        cocone = [cocone[p] for p in D.base.elements]
    if len(cocone) != len(D.base):
        raise NotACocone("need one cocone map per base element")
    if codomain is None:
        if not cocone:
            raise ValueError("codomain is required for an empty diagram")
        codomain = cocone[0].codomain
    _check_cocone(D, cocone, codomain)
    if D.category == VECT:
        offsets = []
        total = 0
        for d in D.objects:
            offsets.append(total)
            total += d
        owner = [(p, k) for p, d in enumerate(D.objects) for k in range(d)]
        cols = [cocone[owner[c][0]].column(owner[c][1]) for c in C.section]
        entries = tuple(tuple(col[i] for col in cols) for i in range(codomain))
        return Matrix(codomain, C.object, entries)
    return FinSetMap(C.object, codomain, tuple(cocone[p].table[x] for p, x in C.section))


def transport_map(E: PosetMap, D: Diagram) -> ValueMap:
    """The canonical map colim(D o E) -> colim(D)."""
    target = colimit(D)
    pulled = colimit(restrict(D, E))
    return factor_through(pulled, [target.legs[E(a)] for a in E.source.elements], codomain=target.object)
