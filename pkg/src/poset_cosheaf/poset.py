"""Finite posets, down-set lattices, poset maps and comma posets.

Elements of a poset are the indices ``0 .. n-1``; names are only used for
printing and serialization.  The order is stored fully closed as one bitmask
per element: bit ``p`` of ``down[q]`` is set iff ``p <= q``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import CycleError, ParentMismatch, SizeError

DEFAULT_MAX_LATTICE_ELEMENTS = 20
MAX_LATTICE_ENV = "POSET_COSHEAF_MAX_LATTICE"


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def max_lattice_elements() -> int:
    """Largest poset whose down-set lattice may be enumerated."""
    value = os.environ.get(MAX_LATTICE_ENV)
    return int(value) if value else DEFAULT_MAX_LATTICE_ELEMENTS


@dataclass(frozen=True)
class FinitePoset:
    names: tuple[str, ...]
    down: tuple[int, ...]

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("element names must be distinct")
        if len(self.down) != n:
            raise ValueError("need one down-mask per element")
        full = (1 << n) - 1
        for q, mask in enumerate(self.down):
            if not (mask >> q) & 1:
                raise ValueError(f"relation is not reflexive at {self.names[q]}")
            if mask & ~full:
                raise ValueError("down-mask refers to a missing element")
            for p in bits(mask):
                if self.down[p] & ~mask:
                    raise ValueError("relation is not transitive")
                if p != q and (self.down[p] >> q) & 1:
                    raise CycleError(f"{self.names[p]} and {self.names[q]} are mutually below each other")

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        edges = ", ".join(f"{self.names[p]}<{self.names[q]}" for p, q in self.hasse_edges)
        return f"FinitePoset([{', '.join(self.names)}]; {edges})"

    @property
    def elements(self) -> range:
        return range(len(self.names))

    @cached_property
    def up(self) -> tuple[int, ...]:
        up = [0] * len(self)
        for q, mask in enumerate(self.down):
            for p in bits(mask):
                up[p] |= 1 << q
        return tuple(up)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def leq(self, p: int, q: int) -> bool:
        return bool((self.down[q] >> p) & 1)

    def lt(self, p: int, q: int) -> bool:
        return p != q and bool((self.down[q] >> p) & 1)

    def comparable(self, p: int, q: int) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        """For each q, the elements p with p covered by q (p < q, nothing between)."""
        result = []
        for q, mask in enumerate(self.down):
            strict = mask & ~(1 << q)
            below_strict = 0
            for r in bits(strict):
                below_strict |= self.down[r] & ~(1 << r)
            result.append(tuple(bits(strict & ~below_strict)))
        return tuple(result)

    @cached_property
    def hasse_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((p, q) for q in self.elements for p in self.lower_covers[q]))

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements, key=lambda q: (bin(self.down[q]).count("1"), q)))

    def relation_pairs(self) -> list[tuple[int, int]]:
        """All pairs (p, q) with p <= q."""
        return [(p, q) for q in self.elements for p in bits(self.down[q])]

    def maximum(self) -> int | None:
        full = (1 << len(self)) - 1
        for q, mask in enumerate(self.down):
            if mask == full:
                return q
        return None


def from_relations(n: int, generating_pairs: Iterable[tuple[int, int]] = (),
                   names: Sequence[str] | None = None) -> FinitePoset:
    """Reflexive-transitive closure of ``generating_pairs`` (p, q) meaning p <= q."""
    if names is None:
        names = [str(i) for i in range(n)]
    if len(names) != n:
        raise ValueError("need exactly n names")
    down = [1 << i for i in range(n)]
    for p, q in generating_pairs:
        if not (0 <= p < n and 0 <= q < n):
            raise IndexError(f"pair {(p, q)} out of range for {n} elements")
        down[q] |= 1 << p
    # Warshall closure on bitmasks
    for k in range(n):
        kbit = 1 << k
        for q in range(n):
            if down[q] & kbit:
                down[q] |= down[k]
    for q in range(n):
        for p in bits(down[q]):
            if p != q and (down[p] >> q) & 1:
                raise CycleError(f"cycle through {names[p]} and {names[q]}")
    return FinitePoset(tuple(names), tuple(down))


def from_named_relations(elements: Sequence[str], relations: Iterable[tuple[str, str]]) -> FinitePoset:
    index = {name: i for i, name in enumerate(elements)}
    if len(index) != len(elements):
        raise ValueError("element names must be distinct")
    pairs = [(index[a], index[b]) for a, b in relations]
    return from_relations(len(elements), pairs, elements)


def chain(n: int) -> FinitePoset:
    return from_relations(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> FinitePoset:
    return from_relations(n, [])


def opposite(P: FinitePoset) -> FinitePoset:
    return FinitePoset(P.names, P.up)


def full_subposet(P: FinitePoset, members: Iterable[int]) -> "PosetMap":
    """Inclusion of the full sub-poset on ``members`` (kept in index order)."""
    members = sorted(set(members))
    pos = {p: i for i, p in enumerate(members)}
    down = []
    for q in members:
        mask = 0
        for p in bits(P.down[q]):
            if p in pos:
                mask |= 1 << pos[p]
        down.append(mask)
    sub = FinitePoset(tuple(P.names[p] for p in members), tuple(down))
    return PosetMap(sub, P, tuple(members))


# ---------------------------------------------------------------- down-sets

@dataclass(frozen=True)
class DownSet:
    parent: FinitePoset
    mask: int

    def __post_init__(self):
        P = self.parent
        if self.mask >> len(P):
            raise ValueError("down-set refers to a missing element")
        for q in bits(self.mask):
            if P.down[q] & ~self.mask:
                raise ValueError(f"{self.label()} is not downward closed at {P.names[q]}")

    @classmethod
    def of(cls, P: FinitePoset, members: Iterable[int | str]) -> "DownSet":
        mask = 0
        for m in members:
            mask |= 1 << (P.index(m) if isinstance(m, str) else m)
        return cls(P, mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, p: int) -> bool:
        return bool((self.mask >> p) & 1)

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def _same_parent(self, other: "DownSet") -> None:
        if self.parent is not other.parent and self.parent != other.parent:
            raise ParentMismatch("down-sets belong to different posets")

    def __le__(self, other: "DownSet") -> bool:
        self._same_parent(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "DownSet") -> bool:
        return self <= other and self.mask != other.mask

    def __and__(self, other: "DownSet") -> "DownSet":
        self._same_parent(other)
        return DownSet(self.parent, self.mask & other.mask)

    def __or__(self, other: "DownSet") -> "DownSet":
        self._same_parent(other)
        return DownSet(self.parent, self.mask | other.mask)

    def label(self) -> str:
        """Name of the down-set: its element names, sorted, in braces."""
        names = sorted(self.parent.names[p] for p in bits(self.mask))
        return "{" + ",".join(names) + "}"

    def __repr__(self) -> str:
        return f"DownSet({self.label()})"


def principal_down_set(P: FinitePoset, p: int) -> DownSet:
    return DownSet(P, P.down[p])


def whole(P: FinitePoset) -> DownSet:
    return DownSet(P, (1 << len(P)) - 1)


def empty(P: FinitePoset) -> DownSet:
    return DownSet(P, 0)


@dataclass(frozen=True, eq=False)
class DownSetLattice:
    """Down(P) as a poset under inclusion, ``down_sets[i]`` decoding element i."""

    poset: FinitePoset
    down_sets: tuple[DownSet, ...]

    @cached_property
    def _position(self) -> dict[int, int]:
        return {S.mask: i for i, S in enumerate(self.down_sets)}

    def decode(self, i: int) -> DownSet:
        return self.down_sets[i]

    def element(self, S: DownSet) -> int:
        return self._position[S.mask]


def down_set_masks(P: FinitePoset) -> list[int]:
    """All down-set masks of P, sorted by (size, mask)."""
    masks = [0]
    for e in P.linear_extension:
        need = P.down[e] & ~(1 << e)
        masks += [m | (1 << e) for m in masks if m & need == need]
    return sorted(masks, key=lambda m: (bin(m).count("1"), m))


@lru_cache(maxsize=512)
def _lattice(P: FinitePoset) -> DownSetLattice:
    masks = down_set_masks(P)
    down = []
    for a in masks:
        below = 0
        for j, b in enumerate(masks):
            if b & ~a == 0:
                below |= 1 << j
        down.append(below)
    sets = tuple(DownSet(P, m) for m in masks)
    L = FinitePoset(tuple(S.label() for S in sets), tuple(down))
    return DownSetLattice(L, sets)


def down_set_lattice(P: FinitePoset, max_elements: int | None = None) -> DownSetLattice:
    """Down(P) ordered by inclusion, including the empty set and P itself."""
    bound = max_lattice_elements() if max_elements is None else max_elements
    if len(P) > bound:
        raise SizeError(f"down-set lattice of {len(P)} elements exceeds the bound of {bound} elements")
    return _lattice(P)


# --------------------------------------------------------------- poset maps

@dataclass(frozen=True)
class PosetMap:
    source: FinitePoset
    target: FinitePoset
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != len(self.source):
            raise ValueError("assignment must cover every source element")
        for a in self.assignment:
            if not 0 <= a < len(self.target):
                raise ValueError("assignment leaves the target")
        for p, q in self.source.hasse_edges:
            if not self.target.leq(self.assignment[p], self.assignment[q]):
                raise ValueError(
                    f"not order preserving: {self.source.names[p]} <= {self.source.names[q]}")

    def __call__(self, p: int) -> int:
        return self.assignment[p]

    def __matmul__(self, other: "PosetMap") -> "PosetMap":
        """Composite ``self`` after ``other``."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return PosetMap(other.source, self.target, tuple(self.assignment[a] for a in other.assignment))

    def is_full(self) -> bool:
        S, T, f = self.source, self.target, self.assignment
        return all(S.leq(p, q) == T.leq(f[p], f[q]) for p in S.elements for q in S.elements)


def identity_map(P: FinitePoset) -> PosetMap:
    return PosetMap(P, P, tuple(P.elements))


def constant_map(P: FinitePoset, Q: FinitePoset, q: int) -> PosetMap:
    return PosetMap(P, Q, (q,) * len(P))


def point() -> FinitePoset:
    return FinitePoset(("*",), (1,))


def iota(P: FinitePoset) -> PosetMap:
    """The embedding p -> D_p of P into its down-set lattice."""
    L = down_set_lattice(P)
    return PosetMap(P, L.poset, tuple(L.element(principal_down_set(P, p)) for p in P.elements))


# ------------------------------------------------------------ comma posets

@dataclass(frozen=True)
class CommaPoset:
    """A sublevel (``E|b``) or superlevel (``b|E``) set of a poset map.

    ``labels[i]`` is the source element represented by carrier element i; the
    witnessing arrow E(a) <= b (or b <= E(a)) is unique, so it is omitted.
    """

    carrier: FinitePoset
    projection: PosetMap
    labels: tuple[int, ...]

    def position(self, a: int) -> int:
        return self.labels.index(a)


def _comma(E: PosetMap, keep) -> CommaPoset:
    incl = full_subposet(E.source, [a for a in E.source.elements if keep(E(a))])
    return CommaPoset(incl.source, incl, incl.assignment)


def comma_under(E: PosetMap, b: int) -> CommaPoset:
    """(E | b): the elements a with E(a) <= b."""
    return _comma(E, lambda x: E.target.leq(x, b))


def comma_over(b: int, E: PosetMap) -> CommaPoset:
    """(b | E): the elements a with b <= E(a)."""
    return _comma(E, lambda x: E.target.leq(b, x))


# ------------------------------------------------------------- connectivity

def connected_components(P: FinitePoset) -> list[tuple[int, ...]]:
    """Classes of the equivalence generated by comparability, by least element."""
    parent = list(P.elements)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in P.hasse_edges:
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[max(rp, rq)] = min(rp, rq)
    groups: dict[int, list[int]] = {}
    for p in P.elements:
        groups.setdefault(find(p), []).append(p)
    return [tuple(g) for g in sorted(groups.values())]


@dataclass(frozen=True)
class Cofinality:
    cofinal: bool
    witness: int | None = None
    reason: str | None = None  # "empty" or "disconnected"

    def __bool__(self) -> bool:
        return self.cofinal


def is_cofinal(E: PosetMap) -> Cofinality:
    """Check that every (b | E) is non-empty and connected; report the first b that is not."""
    for b in E.target.elements:
        comma = comma_over(b, E)
        if len(comma.carrier) == 0:
            return Cofinality(False, b, "empty")
        if len(connected_components(comma.carrier)) != 1:
            return Cofinality(False, b, "disconnected")
    return Cofinality(True)


def same_parent(*sets: DownSet) -> FinitePoset:
    """The common parent of ``sets``; raises ParentMismatch otherwise."""
    parent = sets[0].parent
    for S in sets[1:]:
        if S.parent is not parent and S.parent != parent:
            raise ParentMismatch("down-sets belong to different posets")
    return parent
