import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import finset_pushout, lam, pushout_diagram
from poset_cosheaf.errors import NotACocone, NotComparable, NotFunctorial
from poset_cosheaf.generate import random_diagram, random_poset
from poset_cosheaf.generate import random_poset_map
from poset_cosheaf.poset import (PosetMap, antichain, chain, connected_components, from_named_relations,
                                 is_cofinal, point)
from poset_cosheaf.valcat import (FINSET, VECT, Diagram, FinSetMap, Matrix, colimit,
                                  constant_diagram, factor_through, identity, indicator_diagram,
                                  induced_map, transport_map,
                                  is_injective, is_isomorphism, is_surjective, restrict)


def square():
    return from_named_relations(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])


# ------------------------------------------------------------- independent oracles

def oracle_vect_dim(D):
    """dim of the colimit from the all-pairs relation matrix, ranked by sympy."""
    offsets, total = [], 0
    for d in D.objects:
        offsets.append(total)
        total += d
    rows = []
    for p, q in product(D.base.elements, repeat=2):
        if p == q or not D.base.leq(p, q):
            continue
        A = induced_map(D, p, q)
        for k in range(A.cols):
            g = [0] * total
            for i in range(A.rows):
                g[offsets[q] + i] = A.entries[i][k]
            g[offsets[p] + k] -= 1
            rows.append([sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in g])
    if not rows:
        return total
    return total - sympy.Matrix(rows).rank()


def oracle_finset_size(D):
    """Number of classes of the generated equivalence, by graph search."""
    nodes = [(p, x) for p in D.base.elements for x in range(D.objects[p])]
    adj = {v: set() for v in nodes}
    for p, q in product(D.base.elements, repeat=2):
        if p != q and D.base.leq(p, q):
            for x, y in enumerate(induced_map(D, p, q).table):
                adj[(p, x)].add((q, y))
                adj[(q, y)].add((p, x))
    seen, count = set(), 0
    for v in nodes:
        if v in seen:
            continue
        count += 1
        stack = [v]
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(adj[u] - seen)
    return count


# ----------------------------------------------------------------- values

def test_matrix_composition_and_identity():
    A = Matrix.of([[1, 2], [0, 1]])
    B = Matrix.of([[Fraction(1, 2)], [3]])
    assert A @ B == Matrix.of([[Fraction(13, 2)], [3]])
    assert Matrix.identity(2) @ A == A
    with pytest.raises(ValueError):
        B @ A


def test_empty_matrices_compose():
    assert Matrix.zero(2, 0) @ Matrix.zero(0, 3) == Matrix.zero(2, 3)


def test_finset_composition():
    f = FinSetMap(3, 2, (0, 1, 1))
    g = FinSetMap(2, 2, (1, 0))
    assert (g @ f).table == (1, 0, 0)
    with pytest.raises(ValueError):
        FinSetMap(2, 1, (0, 1))


def test_mono_epi_iso():
    assert is_injective(Matrix.of([[1], [0]])) and not is_surjective(Matrix.of([[1], [0]]))
    assert is_surjective(Matrix.of([[1, 1]])) and not is_injective(Matrix.of([[1, 1]]))
    assert is_isomorphism(Matrix.of([[0, 1], [1, 0]]))
    assert is_isomorphism(Matrix.zero(0, 0))
    assert is_isomorphism(FinSetMap(2, 2, (1, 0)))
    assert not is_isomorphism(FinSetMap(2, 2, (0, 0)))


# --------------------------------------------------------------- diagrams

def test_non_commuting_square_is_rejected():
    P = square()
    b, l, r, t = (P.index(n) for n in "blrt")
    one, two = Matrix.of([[1]]), Matrix.of([[2]])
    edges = {(b, l): one, (b, r): one, (l, t): one, (r, t): two}
    with pytest.raises(NotFunctorial) as info:
        Diagram(P, VECT, [1, 1, 1, 1], edges)
    assert "compose differently" in str(info.value)
    D = Diagram(P, VECT, [1, 1, 1, 1], edges, check=False)
    from poset_cosheaf.valcat import check_functorial
    result = check_functorial(D)
    assert not result and result.pair == (b, t)
    assert {result.paths[0], result.paths[1]} == {(b, l, t), (b, r, t)}


def test_commuting_square_accepted():
    P = square()
    b, l, r, t = (P.index(n) for n in "blrt")
    edges = {(b, l): Matrix.of([[2]]), (b, r): Matrix.of([[3]]), (l, t): Matrix.of([[3]]), (r, t): Matrix.of([[2]])}
    D = Diagram(P, VECT, [1, 1, 1, 1], edges)
    assert induced_map(D, b, t) == Matrix.of([[6]])


def test_diagram_shape_errors(Lam):
    x, y, z = (Lam.index(n) for n in "xyz")
    with pytest.raises(ValueError):
        Diagram(Lam, VECT, [1, 1, 1], {(z, x): Matrix.identity(1)})
    with pytest.raises(ValueError):
        Diagram(Lam, VECT, [1, 1, 1], {(z, x): Matrix.identity(2), (z, y): Matrix.identity(1)})
    with pytest.raises(TypeError):
        Diagram(Lam, VECT, [1, 1, 1], {(z, x): FinSetMap.identity(1), (z, y): Matrix.identity(1)})


def test_induced_map_requires_comparable(Lam):
    D = pushout_diagram()
    with pytest.raises(NotComparable):
        induced_map(D, Lam.index("x"), Lam.index("y"))
    assert induced_map(D, 0, 0) == identity(VECT, 1)


# --------------------------------------------------------------- colimits

def test_vect_pushout():
    C = colimit(pushout_diagram())
    assert C.object == 2
    for p, q in C.diagram.base.hasse_edges:
        assert C.legs[q] @ C.diagram.edge_maps[(p, q)] == C.legs[p]


def test_finset_pushout():
    C = colimit(finset_pushout())
    assert C.object == 2
    P = C.diagram.base
    x, y, z = (P.index(n) for n in "xyz")
    assert C.legs[x](0) == C.legs[y](0) == C.legs[z](0)
    assert C.legs[x](1) != C.legs[x](0)


def test_pushout_along_zero_kills_the_other_leg():
    # s = a via the identity and s = 0 via the zero map, so a dies
    P = from_named_relations(["s", "a", "b"], [("s", "a"), ("s", "b")])
    D = Diagram(P, VECT, [1, 1, 1], {(0, 1): Matrix.of([[1]]), (0, 2): Matrix.of([[0]])})
    C = colimit(D)
    assert C.object == 1
    assert C.legs[1] == Matrix.zero(1, 1) and is_isomorphism(C.legs[2])


def test_colimit_over_point_and_empty():
    D = constant_diagram(point(), VECT, 3)
    C = colimit(D)
    assert C.object == 3 and is_isomorphism(C.legs[0])
    E = constant_diagram(antichain(0), FINSET, 0)
    assert colimit(E).object == 0
    with pytest.raises(ValueError):
        factor_through(colimit(E), [])
    assert factor_through(colimit(E), [], codomain=2) == FinSetMap(0, 2, ())


def test_colimit_of_chain_is_top():
    D = Diagram(chain(3), VECT, [1, 2, 2], {(0, 1): Matrix.of([[1], [1]]), (1, 2): Matrix.of([[0, 1], [1, 0]])})
    C = colimit(D)
    assert C.object == 2 and is_isomorphism(C.legs[2])


def test_factor_through_pushout():
    C = colimit(pushout_diagram())
    P = C.diagram.base
    x, y, z = (P.index(n) for n in "xyz")
    M = Matrix.of([[1, -1], [2, 5], [0, 3]])
    cocone = [M @ leg for leg in C.legs]
    u = factor_through(C, cocone)
    assert u == M
    bad = list(cocone)
    bad[x] = Matrix.of([[7], [0], [0]])
    with pytest.raises(NotACocone):
        factor_through(C, bad)


def test_factor_through_finset_mapping_input():
    C = colimit(finset_pushout())
    g = FinSetMap(C.object, 3, (2, 0))
    u = factor_through(C, {p: g @ leg for p, leg in enumerate(C.legs)})
    assert u == g


def test_restrict_along_map():
    D = pushout_diagram()
    P = D.base
    E = PosetMap(chain(2), P, (P.index("z"), P.index("y")))
    R = restrict(D, E)
    assert R.objects == (1, 2)
    assert R.edge_maps[(0, 1)] == Matrix.of([[1], [0]])


# ----------------------------------------------------------- properties

diagram_seeds = st.tuples(st.integers(0, 10 ** 9), st.integers(0, 5), st.sampled_from([VECT, FINSET]),
                          st.integers(0, 3))


def build(seed):
    s, n, cat, size = seed
    rng = random.Random(s)
    return random_diagram(rng, random_poset(rng, n), cat, size)


@settings(max_examples=150)
@given(diagram_seeds)
def test_colimit_matches_oracle(seed):
    D = build(seed)
    C = colimit(D)
    expected = oracle_vect_dim(D) if D.category == VECT else oracle_finset_size(D)
    assert C.object == expected


@settings(max_examples=150)
@given(diagram_seeds)
def test_cocone_identity_and_universality(seed):
    D = build(seed)
    C = colimit(D)
    for p, q in D.base.relation_pairs():
        assert C.legs[q] @ induced_map(D, p, q) == C.legs[p]
    rng = random.Random(seed[0] + 1)
    if D.category == VECT:
        m = rng.randint(0, 3)
        g = Matrix.of([[rng.randint(-2, 2) for _ in range(C.object)] for _ in range(m)], rows=m, cols=C.object)
    else:
        m = rng.randint(1, 3)
        g = FinSetMap(C.object, m, tuple(rng.randrange(m) for _ in range(C.object)))
    u = factor_through(C, [g @ leg for leg in C.legs], codomain=m)
    assert u == g


@settings(max_examples=150)
@given(diagram_seeds)
def test_hasse_and_all_pairs_colimits_agree(seed):
    D = build(seed)
    a, b = colimit(D), colimit(D, relations="all")
    forward = factor_through(a, b.legs, codomain=b.object)
    backward = factor_through(b, a.legs, codomain=a.object)
    assert backward @ forward == identity(D.category, a.object)
    assert forward @ backward == identity(D.category, b.object)


@settings(max_examples=100)
@given(diagram_seeds)
def test_random_diagrams_are_functorial(seed):
    D = build(seed)
    rebuilt = Diagram(D.base, D.category, D.objects, D.edge_maps)
    assert rebuilt == D
    assert max(D.objects, default=0) <= seed[3]


@settings(max_examples=100)
@given(st.integers(0, 10 ** 9), st.integers(0, 6))
def test_constant_singleton_counts_components(seed, n):
    P = random_poset(random.Random(seed), n)
    assert colimit(constant_diagram(P, FINSET, 1)).object == len(connected_components(P))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([VECT, FINSET]))
def test_cofinal_maps_transport_colimits(seed, category):
    rng = random.Random(seed)
    J, Q = random_poset(rng, rng.randint(0, 5)), random_poset(rng, rng.randint(0, 5))
    E = random_poset_map(rng, J, Q)
    if E is None:
        return
    D = random_diagram(rng, Q, category, 2)
    verdict = is_cofinal(E)
    if verdict:
        assert is_isomorphism(transport_map(E, D))
    elif verdict.reason == "disconnected":
        probe = indicator_diagram(Q, verdict.witness)
        assert colimit(restrict(probe, E)).object >= 2 and colimit(probe).object == 1


def test_indicator_diagram():
    P = from_named_relations(["a", "b", "c"], [("c", "a"), ("c", "b")])
    D = indicator_diagram(P, P.index("c"))
    assert D.objects == (1, 1, 1) and colimit(D).object == 1
    D = indicator_diagram(P, P.index("a"))
    assert D.objects == (1, 0, 0)


def test_constant_singleton_misses_some_disconnected_commas():
    # c below a and b, plus a stray e; J = {a, b} maps onto a and b.
    # The comma over c is disconnected, yet both sides have two components,
    # so the constant singleton sees no difference; the indicator on the
    # up-set of c does.
    Q = from_named_relations(["a", "b", "c", "e"], [("c", "a"), ("c", "b")])
    E = PosetMap(antichain(2), Q, (Q.index("a"), Q.index("b")))
    verdict = is_cofinal(E)
    assert not verdict
    c = Q.index("c")
    const = constant_diagram(Q, FINSET, 1)
    assert colimit(restrict(const, E)).object == colimit(const).object == 2
    probe = indicator_diagram(Q, c)
    assert (colimit(restrict(probe, E)).object, colimit(probe).object) == (2, 1)
