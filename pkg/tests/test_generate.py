import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poset_cosheaf.generate import (all_assignments, labeled_posets, random_diagram, random_poset,
                                    random_poset_map)
from poset_cosheaf.instance import InstanceFile, dumps
from poset_cosheaf.poset import antichain, chain, from_named_relations
from poset_cosheaf.valcat import FINSET, VECT, Diagram


def test_labeled_posets_are_distinct_orders():
    seen = set()
    for P in labeled_posets(3):
        assert P.names == ("0", "1", "2")
        seen.add(P.down)
    assert len(seen) == 19


def test_all_assignments_counts():
    # order-preserving maps from a 2-chain into a 3-chain: pairs i <= j
    assert sum(1 for _ in all_assignments(chain(2), chain(3))) == 6
    assert sum(1 for _ in all_assignments(antichain(2), chain(3))) == 9


def test_random_poset_map_is_order_preserving():
    rng = random.Random(3)
    for _ in range(50):
        J, Q = random_poset(rng, rng.randint(0, 5)), random_poset(rng, rng.randint(1, 5))
        E = random_poset_map(rng, J, Q)
        assert E is not None
        for p, q in J.relation_pairs():
            assert Q.leq(E(p), E(q))


def test_random_poset_map_into_empty():
    assert random_poset_map(random.Random(0), chain(1), chain(0), tries=3) is None


@pytest.mark.parametrize("category", [VECT, FINSET])
def test_random_diagram_is_deterministic(category):
    P = from_named_relations(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])
    a = random_diagram(random.Random("s"), P, category, 2)
    b = random_diagram(random.Random("s"), P, category, 2)
    assert dumps(InstanceFile(P, diagram=a)) == dumps(InstanceFile(P, diagram=b))


def test_finset_zero_bound_stays_valid():
    D = random_diagram(random.Random(1), chain(3), FINSET, 0)
    assert D.objects == (0, 0, 0)


@settings(max_examples=200)
@given(st.integers(0, 10 ** 9), st.integers(0, 5), st.sampled_from([VECT, FINSET]), st.integers(0, 3))
def test_random_diagram_bounds_and_functoriality(seed, n, category, size):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    D = random_diagram(rng, P, category, size)
    assert all(0 <= o <= max(size, 1) for o in D.objects)
    if category == FINSET:
        for p, q in P.hasse_edges:
            assert D.objects[p] == 0 or D.objects[q] > 0
    Diagram(P, category, D.objects, D.edge_maps)
