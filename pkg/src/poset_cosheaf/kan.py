"""Pointwise left Kan extensions of diagrams along poset maps."""

from __future__ import annotations

from dataclasses import dataclass

from .poset import (CommaPoset, DownSetLattice, PosetMap, comma_under,
                    down_set_lattice, full_subposet, iota)
from .valcat import (ColimitResult, Diagram, ValueMap, colimit, factor_through,
                     identity, induced_map, is_isomorphism, restrict)


@dataclass(frozen=True, eq=False)
class KanExtension:
    """Lan_E F together with the comma colimit computed at every target element."""

    along: PosetMap
    source: Diagram
    result: Diagram
    commas: tuple[CommaPoset, ...]
    colimits: tuple[ColimitResult, ...]

    def leg(self, b: int, a: int) -> ValueMap:
        """The structure map F(a) -> Lan_E F(b), for E(a) <= b."""
        return self.colimits[b].legs[self.commas[b].position(a)]


def _assemble(E: PosetMap, F: Diagram, commas: list[CommaPoset]) -> KanExtension:
    colims = [colimit(restrict(F, c.projection)) for c in commas]
    edges = {}
    for b, b2 in E.target.hasse_edges:
        upper, lower = commas[b2], colims[b2]
        cocone = [lower.legs[upper.position(a)] for a in commas[b].labels]
        edges[(b, b2)] = factor_through(colims[b], cocone, codomain=lower.object)
    result = Diagram(E.target, F.category, [c.object for c in colims], edges, check=False)
    return KanExtension(E, F, result, tuple(commas), tuple(colims))


def lan(E: PosetMap, F: Diagram) -> KanExtension:
    """Left Kan extension of F along E, one comma-poset colimit per target element."""
    if E.source != F.base:
        raise ValueError("diagram is not indexed by the source of the map")
    return _assemble(E, F, [comma_under(E, b) for b in E.target.elements])


def hat(F: Diagram) -> KanExtension:
    """Lan of F along p -> D_p, computed directly as colimits over the sub-posets P_S.

    For the embedding into down-sets the comma poset over S is the full
    sub-poset on the elements of S, so no order comparisons in Down(P) are
    needed to build the index posets.
    """
    P = F.base
    E = iota(P)
    L = down_set_lattice(P)
    commas = []
    for S in L.down_sets:
        incl = full_subposet(P, S.members)
        commas.append(CommaPoset(incl.source, incl, incl.assignment))
    return _assemble(E, F, commas)


def lattice_of(K: KanExtension) -> DownSetLattice:
    return down_set_lattice(K.source.base)


def comparison_to_hat(generic: KanExtension, fast: KanExtension, b: int) -> tuple[ValueMap, ValueMap]:
    """Canonical maps between two Kan extensions of the same F along the same map, at b."""
    g, f = generic.colimits[b], fast.colimits[b]
    forward = factor_through(g, [fast.leg(b, a) for a in generic.commas[b].labels], codomain=f.object)
    backward = factor_through(f, [generic.leg(b, a) for a in fast.commas[b].labels], codomain=g.object)
    return forward, backward


@dataclass(frozen=True, eq=False)
class IteratedComparison:
    """colim F versus colim Lan_E F, with canonical maps both ways."""

    direct: ColimitResult
    iterated: ColimitResult
    kan: KanExtension
    forward: ValueMap
    backward: ValueMap

    def mutually_inverse(self) -> bool:
        cat = self.direct.category
        return (self.backward @ self.forward == identity(cat, self.direct.object)
                and self.forward @ self.backward == identity(cat, self.iterated.object))


def iterated_comparison(E: PosetMap, F: Diagram) -> IteratedComparison:
    """Compare colim F with colim (Lan_E F), i.e. Lan along the map to a point."""
    K = lan(E, F)
    direct = colimit(F)
    iterated = colimit(K.result)
    forward = factor_through(
        direct, [iterated.legs[E(a)] @ K.leg(E(a), a) for a in F.base.elements],
        codomain=iterated.object)
    per_b = [factor_through(K.colimits[b], [direct.legs[a] for a in K.commas[b].labels],
                            codomain=direct.object)
             for b in E.target.elements]
    backward = factor_through(iterated, per_b, codomain=direct.object)
    return IteratedComparison(direct, iterated, K, forward, backward)


def composite_comparison(E1: PosetMap, E2: PosetMap, F: Diagram) -> list[ValueMap]:
    """At each c, the canonical map Lan_{E2 E1} F(c) -> Lan_{E2} Lan_{E1} F(c)."""
    K1 = lan(E1, F)
    K2 = lan(E2, K1.result)
    K12 = lan(E2 @ E1, F)
    maps = []
    for c in E2.target.elements:
        cocone = [K2.leg(c, E1(a)) @ K1.leg(E1(a), a) for a in K12.commas[c].labels]
        maps.append(factor_through(K12.colimits[c], cocone, codomain=K2.colimits[c].object))
    return maps


@dataclass(frozen=True)
class RestrictionReport:
    """F(p) -> F^(D_p) isomorphisms and their naturality over Hasse edges."""

    non_iso: tuple[int, ...]
    non_natural: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.non_iso and not self.non_natural


def restriction_check(K: KanExtension) -> RestrictionReport:
    """For an extension along p -> D_p: each leg F(p) -> F^(D_p) is iso and natural in p."""
    F, E = K.source, K.along
    non_iso = tuple(p for p in F.base.elements if not is_isomorphism(K.leg(E(p), p)))
    bad = []
    for p, q in F.base.hasse_edges:
        left = induced_map(K.result, E(p), E(q)) @ K.leg(E(p), p)
        right = K.leg(E(q), q) @ F.edge_maps[(p, q)]
        if left != right:
            bad.append((p, q))
    return RestrictionReport(non_iso, tuple(bad))
