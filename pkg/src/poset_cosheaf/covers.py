"""Covers of down-sets and the cover predicates (plain, Cech, basic, complete)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .errors import ParentMismatch, SizeError, TargetMismatch
from .poset import (DownSet, FinitePoset, PosetMap, bits, down_set_lattice,
                    down_set_masks, same_parent)

DEFAULT_MAX_COMPLETE_MEMBERS = 12
DEFAULT_MAX_CANDIDATE_FAMILIES = 2_000_000


def _union(masks) -> int:
    u = 0
    for m in masks:
        u |= m
    return u


@dataclass(frozen=True)
class Cover:
    """A family of distinct down-sets whose union is ``target``."""

    parent: FinitePoset
    target: DownSet
    members: tuple[DownSet, ...]

    def __post_init__(self):
        same_parent(self.target, *self.members)
        if self.target.parent != self.parent:
            raise ParentMismatch("target lives in a different poset")
        masks = [m.mask for m in self.members]
        if len(set(masks)) != len(masks):
            raise ValueError("cover members must be distinct")
        if _union(masks) != self.target.mask:
            raise ValueError(f"members do not cover {self.target.label()}")

    @classmethod
    def of(cls, target: DownSet, members: Sequence[DownSet]) -> "Cover":
        return cls(target.parent, target, tuple(members))

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(m.mask for m in self.members)

    def __eq__(self, other):
        if not isinstance(other, Cover):
            return NotImplemented
        return (self.parent == other.parent and self.target == other.target
                and set(self.masks) == set(other.masks))

    def __hash__(self):
        return hash((self.target.mask, frozenset(self.masks)))

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        inner = ", ".join(m.label() for m in self.members)
        return f"Cover({self.target.label()} <- [{inner}])"


def is_cover(members: Sequence[DownSet], target: DownSet) -> bool:
    same_parent(target, *members)
    return _union(m.mask for m in members) == target.mask


# The predicates below work on raw bitmasks so that exhaustive sweeps stay cheap.

def _cech(masks: Sequence[int]) -> bool:
    # Pairwise closure suffices: if every non-empty pairwise intersection is a
    # member, then for a family sigma + {k} with U_sigma a member (induction),
    # U_sigma & U_k is again a pairwise intersection of members.
    present = set(masks)
    for a, b in combinations(masks, 2):
        meet = a & b
        if meet and meet not in present:
            return False
    return True


def _covered_by_members(region: int, masks: Sequence[int]) -> bool:
    return _union(m for m in masks if m & ~region == 0) == region


def _basic(masks: Sequence[int]) -> bool:
    return all(_covered_by_members(a & b, masks) for a, b in combinations(masks, 2))


def _complete(masks: Sequence[int]) -> bool:
    closure = set(masks)
    frontier = set(masks)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(closure):
                meet = a & b
                if meet and meet not in closure:
                    new.add(meet)
        closure |= new
        frontier = new
    return all(_covered_by_members(region, masks) for region in closure)


def is_cech_cover(C: Cover) -> bool:
    """Every non-empty intersection of members is a member."""
    return _cech(C.masks)


def is_basic_cover(C: Cover) -> bool:
    """Every pairwise intersection of members is a union of members."""
    return _basic(C.masks)


def is_complete_cover(C: Cover, max_members: int = DEFAULT_MAX_COMPLETE_MEMBERS) -> bool:
    """Every finite intersection of members is a union of members."""
    if len(C) > max_members:
        raise SizeError(f"complete-cover check limited to {max_members} members, got {len(C)}")
    return _complete(C.masks)


def refines(C1: Cover, C2: Cover) -> bool:
    """True iff every member of C2 contains some member of C1."""
    if C1.parent != C2.parent:
        raise ParentMismatch("covers live in different posets")
    if C1.target != C2.target:
        raise TargetMismatch(f"{C1.target.label()} != {C2.target.label()}")
    return all(any(a & ~b == 0 for a in C1.masks) for b in C2.masks)


def member_poset(C: Cover) -> FinitePoset:
    """The members of C ordered by inclusion, in their stored order."""
    masks = C.masks
    down = []
    for a in masks:
        down.append(_union(1 << j for j, b in enumerate(masks) if b & ~a == 0))
    return FinitePoset(tuple(m.label() for m in C.members), tuple(down))


def cover_inclusion(C: Cover) -> PosetMap:
    """The inclusion of the members, as a poset under inclusion, into Down(P)."""
    L = down_set_lattice(C.parent)
    return PosetMap(member_poset(C), L.poset, tuple(L.element(m) for m in C.members))


KINDS = {"all": None, "cech": _cech, "basic": _basic}


def _families(candidates: Sequence[int], target: int, max_members: int) -> Iterator[tuple[int, ...]]:
    total = sum(comb(len(candidates), k) for k in range(min(max_members, len(candidates)) + 1))
    if total > DEFAULT_MAX_CANDIDATE_FAMILIES:
        raise SizeError(f"{total} candidate families exceed the enumeration bound")
    if target == 0:
        yield ()
    for k in range(1, max_members + 1):
        for family in combinations(candidates, k):
            if _union(family) == target:
                yield family


@lru_cache(maxsize=4096)
def _cover_masks(P: FinitePoset, target: int, max_members: int, kind: str,
                 candidates: tuple[int, ...] | None) -> tuple[tuple[int, ...], ...]:
    if candidates is None:
        candidates = tuple(m for m in down_set_masks(P) if m & ~target == 0)
    pred = KINDS[kind]
    return tuple(f for f in _families(candidates, target, max_members) if pred is None or pred(f))


def enumerate_covers(target: DownSet, max_members: int, kind: str = "all",
                     candidates: Sequence[DownSet] | None = None) -> list[Cover]:
    """All covers of ``target`` with at most ``max_members`` members.

    Members are drawn from ``candidates`` (default: every down-set inside the
    target).  ``kind`` restricts to "cech" or "basic" covers.  Families come out
    in a canonical order: by size, then lexicographically in (size, mask) order
    of the members.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown cover kind {kind!r}")
    P = target.parent
    cand = None
    if candidates is not None:
        inside = {c.mask for c in candidates if c.mask & ~target.mask == 0}
        cand = tuple(sorted(inside, key=lambda m: (bin(m).count("1"), m)))
    families = _cover_masks(P, target.mask, max_members, kind, cand)
    return [Cover(P, target, tuple(DownSet(P, m) for m in f)) for f in families]


def enumerate_basic_covers(target: DownSet, max_members: int) -> list[Cover]:
    return enumerate_covers(target, max_members, kind="basic")


def principal_cover(U: DownSet) -> Cover:
    """The cover of U by the principal down-sets of its elements."""
    P = U.parent
    masks = sorted({P.down[p] for p in bits(U.mask)})
    return Cover(P, U, tuple(DownSet(P, m) for m in masks))
