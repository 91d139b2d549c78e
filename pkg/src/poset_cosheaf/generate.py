"""Enumeration of small labeled posets and seeded random test data."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterator

from . import linalg
from .poset import FinitePoset, PosetMap, bits, from_relations
from .valcat import FINSET, VECT, Diagram, FinSetMap, Matrix, ValueMap

ENTRY_RANGE = (-2, 2)
REJECTION_TRIES = 20


def labeled_posets(n: int) -> Iterator[FinitePoset]:
    """Every partial order on the labels 0..n-1, each exactly once.

    Candidates are strict relations given as one bitmask per element; a
    candidate is kept when it is transitive and irreflexive-antisymmetric.
    """
    pairs = [(p, q) for q in range(n) for p in range(n) if p != q]
    for choice in range(1 << len(pairs)):
        strict = [0] * n
        for k in bits(choice):
            p, q = pairs[k]
            strict[q] |= 1 << p
        ok = True
        for q in range(n):
            for p in bits(strict[q]):
                if strict[p] & ~strict[q] or (strict[p] >> q) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield FinitePoset(tuple(str(i) for i in range(n)), tuple(s | (1 << q) for q, s in enumerate(strict)))


def random_poset(rng: random.Random, n: int, density: float = 0.4) -> FinitePoset:
    """Random order on n labels: random DAG along a shuffled ranking, then closed."""
    rank = list(range(n))
    rng.shuffle(rank)
    pairs = [(rank[i], rank[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return from_relations(n, pairs)


def random_poset_map(rng: random.Random, J: FinitePoset, Q: FinitePoset, tries: int = 100) -> PosetMap | None:
    """Random order-preserving map, built along a linear extension of J."""
    for _ in range(tries):
        image = [0] * len(J)
        ok = True
        for a in J.linear_extension:
            allowed = (1 << len(Q)) - 1
            for r in bits(J.down[a] & ~(1 << a)):
                allowed &= Q.up[image[r]]
            options = list(bits(allowed))
            if not options:
                ok = False
                break
            image[a] = rng.choice(options)
        if ok:
            return PosetMap(J, Q, tuple(image))
    return None


def _random_matrix(rng: random.Random, rows: int, cols: int) -> Matrix:
    lo, hi = ENTRY_RANGE
    return Matrix(rows, cols, tuple(tuple(Fraction(rng.randint(lo, hi)) for _ in range(cols))
                                    for _ in range(rows)))


def _vect_in_edges(rng, P, q, objects, induced) -> dict[int, Matrix]:
    """Maps from each lower cover r of q into q, consistent on common predecessors."""
    covers = P.lower_covers[q]
    constraints = [(i, j, p) for i, r1 in enumerate(covers) for j, r2 in enumerate(covers) if i < j
                   for p in bits(P.down[r1] & P.down[r2])]
    for _ in range(REJECTION_TRIES):
        maps = [_random_matrix(rng, objects[q], objects[r]) for r in covers]
        if all(maps[i] @ induced[(p, covers[i])] == maps[j] @ induced[(p, covers[j])]
               for i, j, p in constraints):
            return dict(zip(covers, maps))
    # Fall back to a random integer point of the solution space of the linear
    # constraints M_i A_{p,i} = M_j A_{p,j}; unknowns are all entries of all M_i.
    dq = objects[q]
    offsets, total = [], 0
    for r in covers:
        offsets.append(total)
        total += dq * objects[r]
    rows = []
    for i, j, p in constraints:
        A, B = induced[(p, covers[i])], induced[(p, covers[j])]
        for row in range(dq):
            for col in range(objects[p]):
                eq = [Fraction(0)] * total
                for k in range(objects[covers[i]]):
                    eq[offsets[i] + row * objects[covers[i]] + k] += A.entries[k][col]
                for k in range(objects[covers[j]]):
                    eq[offsets[j] + row * objects[covers[j]] + k] -= B.entries[k][col]
                rows.append(eq)
    basis = linalg.nullspace(rows, total)
    lo, hi = ENTRY_RANGE
    x = [Fraction(0)] * total
    for v in basis:
        c = rng.randint(lo, hi)
        x = [a + c * b for a, b in zip(x, v)]
    out = {}
    for i, r in enumerate(covers):
        dr = objects[r]
        out[r] = Matrix(dq, dr, tuple(tuple(x[offsets[i] + row * dr + k] for k in range(dr))
                                      for row in range(dq)))
    return out


def _finset_in_edges(rng, P, q, objects, induced) -> dict[int, FinSetMap]:
    """Functions into q from each lower cover, constant on forced equivalence classes.

    Points of the lower covers that must land together (images of a common
    predecessor point) are merged first; each class then picks a uniform
    target, which is uniform over all consistent choices.
    """
    covers = P.lower_covers[q]
    offsets, total = [], 0
    for r in covers:
        offsets.append(total)
        total += objects[r]
    parent = list(range(total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, r1 in enumerate(covers):
        for j, r2 in enumerate(covers):
            if i >= j:
                continue
            for p in bits(P.down[r1] & P.down[r2]):
                f, g = induced[(p, r1)], induced[(p, r2)]
                for x in range(objects[p]):
                    a, b = find(offsets[i] + f.table[x]), find(offsets[j] + g.table[x])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    target = {}
    out = {}
    for i, r in enumerate(covers):
        table = []
        for x in range(objects[r]):
            root = find(offsets[i] + x)
            if root not in target:
                target[root] = rng.randrange(objects[q])
            table.append(target[root])
        out[r] = FinSetMap(objects[r], objects[q], tuple(table))
    return out


def random_diagram(rng: random.Random, P: FinitePoset, category: str, max_size: int) -> Diagram:
    """Seeded random functorial diagram over P.

    vect: dimensions uniform in [0, max_size], matrix entries uniform in
    {-2..2}; the maps into each element are rejection-sampled against the
    commutativity constraints, falling back to a random point of the
    constraint solution space.  finset: cardinalities uniform in
    [0, max_size] (at least 1 above a non-empty set), tables uniform among
    consistent ones.
    """
    objects = [0] * len(P)
    edges: dict[tuple[int, int], ValueMap] = {}
    induced: dict[tuple[int, int], ValueMap] = {}
    for q in P.linear_extension:
        below = P.down[q] & ~(1 << q)
        if category == FINSET and any(objects[p] for p in bits(below)):
            objects[q] = rng.randint(1, max(1, max_size))
        else:
            objects[q] = rng.randint(0, max_size)
        if category == VECT:
            maps = _vect_in_edges(rng, P, q, objects, induced)
            induced[(q, q)] = Matrix.identity(objects[q])
        else:
            maps = _finset_in_edges(rng, P, q, objects, induced)
            induced[(q, q)] = FinSetMap.identity(objects[q])
        for r, m in maps.items():
            edges[(r, q)] = m
            for p in bits(P.down[r]):
                induced.setdefault((p, q), m @ induced[(p, r)])
    return Diagram(P, category, objects, edges)


def all_assignments(J: FinitePoset, Q: FinitePoset) -> Iterator[PosetMap]:
    """Every order-preserving map J -> Q (brute force; tiny posets only)."""
    for image in product(range(len(Q)), repeat=len(J)):
        if all(Q.leq(image[p], image[q]) for p, q in J.hasse_edges):
            yield PosetMap(J, Q, tuple(image))
