"""The cosheaf condition for covers, and machine checks around it.

A :class:`Precosheaf` is a diagram indexed by some down-sets of a poset,
ordered by inclusion.  :func:`cosheaf_arrow` builds the universal map from the
colimit over a cover to the value on the covered set; :func:`verify_theorem`
sweeps that check over every basic cover for the Kan extension ``hat(F)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .covers import (Cover, enumerate_basic_covers, enumerate_covers,
                     is_basic_cover, member_poset, refines)
from .errors import MissingOpen, NotBasic, ParentMismatch
from .kan import KanExtension, hat, iterated_comparison
from .poset import (DownSet, FinitePoset, PosetMap, comma_under,
                    down_set_lattice, from_named_relations, full_subposet,
                    is_cofinal, same_parent)
from .valcat import (VECT, ColimitResult, Diagram, Matrix, ValueMap, colimit,
                     factor_through, identity, induced_map, is_injective,
                     is_isomorphism, is_surjective, restrict)


class Precosheaf:
    """A diagram whose index poset is a family of down-sets under inclusion."""

    def __init__(self, diagram: Diagram, opens: Sequence[DownSet]):
        opens = tuple(opens)
        if len(opens) != len(diagram.base):
            raise ValueError("need one open per diagram object")
        if opens:
            same_parent(*opens)
        masks = [S.mask for S in opens]
        if len(set(masks)) != len(masks):
            raise ValueError("opens must be distinct")
        B = diagram.base
        for i, a in enumerate(masks):
            for j, b in enumerate(masks):
                if B.leq(i, j) != (a & ~b == 0):
                    raise ValueError("diagram order does not match inclusion of opens")
        self.diagram = diagram
        self.opens = opens
        self._position = {m: i for i, m in enumerate(masks)}

    @classmethod
    def from_kan(cls, K: KanExtension) -> "Precosheaf":
        return cls(K.result, down_set_lattice(K.source.base).down_sets)

    @property
    def parent(self) -> FinitePoset | None:
        return self.opens[0].parent if self.opens else None

    def index(self, S: DownSet) -> int:
        if self.opens and S.parent != self.parent:
            raise ParentMismatch("open lives in a different poset")
        try:
            return self._position[S.mask]
        except KeyError:
            raise MissingOpen(f"{S.label()} is not an object of the precosheaf") from None

    def value(self, S: DownSet) -> int:
        return self.diagram.objects[self.index(S)]

    def __eq__(self, other):
        if not isinstance(other, Precosheaf):
            return NotImplemented
        return self.opens == other.opens and self.diagram == other.diagram

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CosheafCheck:
    precosheaf: Precosheaf
    cover: Cover
    arrow: ValueMap
    verdict: bool
    colimit_side: ColimitResult

    @property
    def dimension(self) -> int:
        return self.colimit_side.object


def cosheaf_arrow(G: Precosheaf, C: Cover) -> CosheafCheck:
    """The universal arrow colim_{V in C} G(V) -> G(target) and whether it is an isomorphism."""
    idx = tuple(G.index(m) for m in C.members)
    t = G.index(C.target)
    incl = PosetMap(member_poset(C), G.diagram.base, idx)
    side = colimit(restrict(G.diagram, incl))
    cocone = [induced_map(G.diagram, i, t) for i in idx]
    arrow = factor_through(side, cocone, codomain=G.diagram.objects[t])
    return CosheafCheck(G, C, arrow, is_isomorphism(arrow), side)


@dataclass
class TheoremReport:
    checks: int = 0
    failures: list[Cover] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_theorem(F: Diagram, max_cover_members: int, kan: KanExtension | None = None) -> TheoremReport:
    """Check the cosheaf arrow of hat(F) on every basic cover of every down-set.

    Down-sets include the empty set, whose covers include the empty cover.
    """
    K = hat(F) if kan is None else kan
    G = Precosheaf.from_kan(K)
    report = TheoremReport()
    for S in G.opens:
        for C in enumerate_basic_covers(S, max_cover_members):
            report.checks += 1
            if not cosheaf_arrow(G, C).verdict:
                report.failures.append(C)
    return report


# --------------------------------------------------- the auxiliary poset J

@dataclass(frozen=True, eq=False)
class AuxiliaryJ:
    """Pairs (V_i, p) with p in V_i, ordered componentwise."""

    cover: Cover
    carrier: FinitePoset
    pairs: tuple[tuple[int, int], ...]       # (member position, element of P)
    members: FinitePoset                      # the cover under inclusion
    pi1: PosetMap                             # carrier -> members
    pi2: PosetMap                             # carrier -> P_S
    sub: PosetMap                             # P_S -> P

    def position(self, i: int, p: int) -> int:
        return self.pairs.index((i, p))


def build_auxiliary_J(C: Cover) -> AuxiliaryJ:
    P = C.parent
    V = member_poset(C)
    sub = full_subposet(P, C.target.members)
    local = {p: k for k, p in enumerate(sub.assignment)}
    pairs = tuple((i, p) for i, m in enumerate(C.members) for p in m.members)
    down = []
    for i, p in pairs:
        mask = 0
        for k, (j, q) in enumerate(pairs):
            if V.leq(j, i) and P.leq(q, p):
                mask |= 1 << k
        down.append(mask)
    names = tuple(f"({C.members[i].label()},{P.names[p]})" for i, p in pairs)
    J = FinitePoset(names, tuple(down))
    pi1 = PosetMap(J, V, tuple(i for i, _ in pairs))
    pi2 = PosetMap(J, sub.source, tuple(local[p] for _, p in pairs))
    return AuxiliaryJ(C, J, pairs, V, pi1, pi2, sub)


@dataclass
class ProofStepReport:
    step_a: bool = True
    step_b: bool = True
    step_c: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.step_a and self.step_b and self.step_c


def check_proof_steps(F: Diagram, C: Cover, require_basic: bool = True) -> ProofStepReport:
    """Check the three intermediate isomorphisms behind the cosheaf property of hat(F).

    (a) each q -> (q in V_i in V_i) is cofinal into the comma poset over V_i,
        and the induced map of colimits is an isomorphism;
    (b) the colimit over J agrees with both iterated colimits (through the
        members and through P_S), via maps that are mutually inverse;
    (c) the extension of F along J -> P_S is F again: every structure map
        F(p) -> Lan F(p) at a pair (V_i, p) is an isomorphism, all of them
        coincide, and they are natural in p.
    """
    if C.parent != F.base:
        raise ParentMismatch("cover and diagram live over different posets")
    if require_basic and not is_basic_cover(C):
        raise NotBasic(f"{C!r} is not a basic cover")
    P = F.base
    aux = build_auxiliary_J(C)
    F_S = restrict(F, aux.sub)
    F_J = restrict(F_S, aux.pi2)
    report = ProofStepReport()

    for i, member in enumerate(C.members):
        comma = comma_under(aux.pi1, i)
        incl = full_subposet(P, member.members)
        j = PosetMap(incl.source, comma.carrier,
                     tuple(comma.position(aux.position(i, q)) for q in incl.assignment))
        if not is_cofinal(j):
            report.step_a = False
            report.notes.append(f"(a) not cofinal at {member.label()}")
            continue
        over_comma = colimit(restrict(F_J, comma.projection))
        over_member = colimit(restrict(F, incl))
        cmp = factor_through(over_member, [over_comma.legs[j(q)] for q in incl.source.elements],
                             codomain=over_comma.object)
        if not is_isomorphism(cmp):
            report.step_a = False
            report.notes.append(f"(a) colimit comparison not iso at {member.label()}")

    via1 = iterated_comparison(aux.pi1, F_J)
    via2 = iterated_comparison(aux.pi2, F_J)
    one_to_two = via2.forward @ via1.backward
    two_to_one = via1.forward @ via2.backward
    cat = F.category
    if not (via1.mutually_inverse() and via2.mutually_inverse()
            and two_to_one @ one_to_two == identity(cat, via1.iterated.object)
            and one_to_two @ two_to_one == identity(cat, via2.iterated.object)):
        report.step_b = False
        report.notes.append("(b) iterated colimits disagree")

    K2 = via2.kan
    reps = {}
    for s in aux.pi2.target.elements:
        legs = [K2.leg(s, k) for k, (_, p) in enumerate(aux.pairs) if aux.pi2(k) == s]
        if not legs or not all(is_isomorphism(m) for m in legs) or any(m != legs[0] for m in legs):
            report.step_c = False
            report.notes.append(f"(c) Lan F({P.names[aux.sub(s)]}) is not F({P.names[aux.sub(s)]})")
            continue
        reps[s] = legs[0]
    for (s, t), e in F_S.edge_maps.items():
        if s in reps and t in reps and induced_map(K2.result, s, t) @ reps[s] != reps[t] @ e:
            report.step_c = False
            report.notes.append(f"(c) not natural over {P.names[aux.sub(s)]}<{P.names[aux.sub(t)]}")
    return report


# ---------------------------------------------------- refinement and Fig. 1

def cover_comparison(G: Precosheaf, finer: Cover, coarser: Cover) -> ValueMap:
    """Canonical map colim over ``finer`` -> colim over ``coarser``.

    Each member of ``finer`` is sent through the first member of ``coarser``
    containing it; a NotACocone error means the choice is not coherent.
    """
    a, b = cosheaf_arrow(G, finer), cosheaf_arrow(G, coarser)
    cocone = []
    for m in finer.members:
        k = next((k for k, big in enumerate(coarser.members) if m <= big), None)
        if k is None:
            raise ValueError(f"{m.label()} lies in no member of the coarser cover")
        cocone.append(b.colimit_side.legs[k] @ induced_map(G.diagram, G.index(m), G.index(coarser.members[k])))
    return factor_through(a.colimit_side, cocone, codomain=b.dimension)


class Figure1(NamedTuple):
    poset: FinitePoset
    precosheaf: Precosheaf
    U1: Cover
    U2: Cover


FIGURE1_METADATA = {
    "description": "Subdivided interval v0-v1-v2-v3-v4; each edge sits below its two endpoints, "
                   "so principal down-sets are open stars. Values: X -> k, V2 -> k^2, every other "
                   "open -> k. Maps into V2 include into the first factor, V2 -> X projects onto it.",
    "status": "reconstruction: the cell count of the pictured interval is not stated; this is a "
              "smallest structure satisfying every stated property, all re-checked by the colimit engine",
}


def figure1_poset() -> FinitePoset:
    vertices = [f"v{i}" for i in range(5)]
    edges = [f"e{i}{i + 1}" for i in range(4)]
    relations = []
    for i, e in enumerate(edges):
        relations += [(e, vertices[i]), (e, vertices[i + 1])]
    return from_named_relations(vertices + edges, relations)


def figure1_fixture() -> Figure1:
    """Refinement counterexample: U1 refines U2, the arrow is iso for U1 but not for U2."""
    P = figure1_poset()
    named = {f"D_{P.names[p]}": DownSet(P, P.down[p]) for p in P.elements}
    named["V2"] = named["D_v1"] | named["D_v2"] | named["D_v3"]
    named["X"] = DownSet(P, (1 << len(P)) - 1)
    order = sorted(named, key=lambda k: (len(named[k]), named[k].mask))
    opens = [named[k] for k in order]
    masks = [S.mask for S in opens]
    base = FinitePoset(tuple(order), tuple(
        sum(1 << j for j, b in enumerate(masks) if b & ~a == 0) for a in masks))
    V2 = named["V2"]
    dims = [2 if S == V2 else 1 for S in opens]
    include_first = Matrix.of([[1], [0]])
    project_first = Matrix.of([[1, 0]])
    edges = {}
    for i, j in base.hasse_edges:
        if opens[j] == V2:
            edges[(i, j)] = include_first
        elif opens[i] == V2:
            edges[(i, j)] = project_first
        else:
            edges[(i, j)] = Matrix.identity(1)
    G = Precosheaf(Diagram(base, VECT, dims, edges), opens)
    U1 = Cover.of(named["X"], [named[k] for k in
                               ("D_v0", "D_e01", "D_v1", "D_e12", "D_v2", "D_e23", "D_v3", "D_e34", "D_v4")])
    U2 = Cover.of(named["X"], [named[k] for k in ("D_v0", "D_e01", "V2", "D_e34", "D_v4")])
    return Figure1(P, G, U1, U2)


@dataclass(frozen=True)
class CounterexampleReport:
    refines: bool
    dim_finer: int
    dim_coarser: int
    dim_target: int
    injective: bool
    surjective: bool
    composite_iso: bool
    coarser_iso: bool

    @property
    def ok(self) -> bool:
        return (self.refines and (self.dim_finer, self.dim_coarser, self.dim_target) == (1, 2, 1)
                and self.injective and self.surjective and self.composite_iso and not self.coarser_iso)

    def summary(self) -> str:
        def yes(flag, word):
            return word if flag else "not " + word
        return (f"dim F̂[U1]={self.dim_finer}, dim F̂[U2]={self.dim_coarser}, dim F(X)={self.dim_target}; "
                f"{yes(self.injective, 'injective')}; {yes(self.surjective, 'surjective')}; "
                f"composite {'iso' if self.composite_iso else 'not iso'}")


def counterexample_report(fixture: Figure1 | None = None) -> CounterexampleReport:
    P, G, U1, U2 = fixture or figure1_fixture()
    fine, coarse = cosheaf_arrow(G, U1), cosheaf_arrow(G, U2)
    first = cover_comparison(G, U1, U2)
    composite = coarse.arrow @ first
    return CounterexampleReport(
        refines=refines(U1, U2),
        dim_finer=fine.dimension,
        dim_coarser=coarse.dimension,
        dim_target=G.value(U1.target),
        injective=is_injective(first),
        surjective=is_surjective(coarse.arrow),
        composite_iso=is_isomorphism(composite) and composite == fine.arrow,
        coarser_iso=coarse.verdict,
    )


@dataclass(frozen=True, eq=False)
class RefinementWitness:
    finer: CosheafCheck
    coarser: CosheafCheck

    def summary(self) -> str:
        return (f"{self.finer.cover!r} refines {self.coarser.cover!r}: arrow iso for the finer "
                f"cover (dim {self.finer.dimension}), not for the coarser (dim {self.coarser.dimension})")


def falsify_refinement(G: Precosheaf, max_cover_members: int, kind: str = "all",
                       targets: Sequence[DownSet] | None = None) -> RefinementWitness | None:
    """Search for C1 refining C2 where the cosheaf arrow is iso for C1 but not for C2.

    Covers are drawn from the opens of G, optionally restricted to ``kind``
    "cech" or "basic".  The first witness in canonical order is returned:
    targets in the order of G's opens, then coarser covers, then finer ones.
    """
    for U in (G.opens if targets is None else targets):
        covers = enumerate_covers(U, max_cover_members, kind=kind, candidates=G.opens)
        checks = [cosheaf_arrow(G, C) for C in covers]
        bad = [c for c in checks if not c.verdict]
        if not bad:
            continue
        good = [c for c in checks if c.verdict]
        for c2 in bad:
            for c1 in good:
                if refines(c1.cover, c2.cover):
                    return RefinementWitness(c1, c2)
    return None
