import random
import sys
from itertools import chain, combinations

import pytest

from poset_cosheaf.poset import from_named_relations
from poset_cosheaf.valcat import Diagram, FinSetMap, Matrix


def lam():
    """z below x and y."""
    return from_named_relations(["x", "y", "z"], [("z", "x"), ("z", "y")])


def pushout_diagram():
    P = lam()
    x, y, z = (P.index(n) for n in "xyz")
    return Diagram(P, "vect", [1, 2, 1], {(z, x): Matrix.identity(1), (z, y): Matrix.of([[1], [0]])})


def finset_pushout():
    P = lam()
    x, y, z = (P.index(n) for n in "xyz")
    # F(z) = {*}, F(x) = {a, b}, F(y) = {c}; * -> a and * -> c
    return Diagram(P, "finset", [2, 1, 1], {(z, x): FinSetMap(1, 2, (0,)), (z, y): FinSetMap(1, 1, (0,))})


@pytest.fixture
def Lam():
    return lam()


@pytest.fixture
def rng():
    return random.Random(20261016)


# -- set-based oracles, independent of the bitmask code paths --------------

def subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


def brute_down_sets(P):
    out = []
    for sub in subsets(P.elements):
        s = set(sub)
        if all(p in s for q in s for p in P.elements if P.leq(p, q)):
            out.append(frozenset(s))
    return out


def oracle_cech(family):
    fam = [frozenset(f) for f in family]
    present = set(fam)
    for sigma in subsets(range(len(fam))):
        if len(sigma) < 1:
            continue
        inter = frozenset.intersection(*(fam[i] for i in sigma))
        if inter and inter not in present:
            return False
    return True


def oracle_basic(family):
    fam = [frozenset(f) for f in family]
    for a in fam:
        for b in fam:
            inter = a & b
            inside = [m for m in fam if m <= inter]
            if frozenset().union(*inside) != inter:
                return False
    return True


def oracle_complete(family):
    fam = [frozenset(f) for f in family]
    for sigma in subsets(range(len(fam))):
        if not sigma:
            continue
        inter = frozenset.intersection(*(fam[i] for i in sigma))
        inside = [m for m in fam if m <= inter]
        if frozenset().union(*inside) != inter:
            return False
    return True


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
