"""Exhaustive verification runs: every labeled poset up to a size, seeded diagrams on each.

Each (poset, category, trial) instance draws its diagram from its own
``random.Random`` seeded by a string built from the run seed and the instance
coordinates, so results do not depend on evaluation order or worker count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterator, Sequence

from .covers import _basic, _cech, enumerate_covers
from .cosheaf import (Precosheaf, check_proof_steps, falsify_refinement,
                      verify_theorem)
from .generate import labeled_posets, random_diagram
from .instance import InstanceFile, to_json
from .kan import hat, restriction_check
from .poset import FinitePoset, down_set_lattice
from .valcat import Diagram


@dataclass(frozen=True)
class Task:
    n: int
    index: int
    poset: FinitePoset
    category: str
    trial: int
    max_size: int


@dataclass
class InstanceResult:
    task: Task
    diagram: Diagram
    checks: int
    failures: list
    restriction_ok: bool | None = None
    falsifier_witness: bool | None = None
    proof_steps: int = 0
    proof_step_failures: list = field(default_factory=list)


@dataclass
class SweepReport:
    posets: int = 0
    instances: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)       # (InstanceResult, Cover)
    restriction_failures: list = field(default_factory=list)
    falsifier_witnesses: list = field(default_factory=list)
    proof_steps: int = 0
    proof_step_failures: list = field(default_factory=list)
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.failures or self.restriction_failures or self.falsifier_witnesses
                    or self.proof_step_failures)

    def summary(self) -> str:
        return f"{len(self.failures)} failures / {self.checks} checks"

    def to_json(self) -> dict:
        def replay(result, cover, reason):
            inst = InstanceFile(result.task.poset, diagram=result.diagram,
                                covers={"failing": cover} if cover is not None else {},
                                metadata={"reason": reason, "category": result.task.category,
                                          "trial": str(result.task.trial)})
            return to_json(inst)
        out = {
            "posets": self.posets,
            "instances": self.instances,
            "checks": self.checks,
            "failures": [replay(r, c, "universal arrow not an isomorphism") for r, c in self.failures],
        }
        if self.restriction_failures:
            out["restriction_failures"] = [replay(r, None, "F(p) -> F^(D_p) not natural iso")
                                           for r in self.restriction_failures]
        if self.falsifier_witnesses:
            out["falsifier_witnesses"] = [replay(r, None, "refinement witness among basic covers")
                                          for r in self.falsifier_witnesses]
        if self.proof_steps:
            out["proof_steps"] = self.proof_steps
            out["proof_step_failures"] = [replay(r, c, "; ".join(notes))
                                          for r, c, notes in self.proof_step_failures]
        return out


def posets_up_to(max_elements: int) -> list[tuple[int, int, FinitePoset]]:
    return [(n, i, P) for n in range(max_elements + 1) for i, P in enumerate(labeled_posets(n))]


def tasks(max_elements: int, sizes: dict[str, int], trials: int) -> Iterator[Task]:
    for n, i, P in posets_up_to(max_elements):
        for category, size in sizes.items():
            for t in range(trials):
                yield Task(n, i, P, category, t, size)


def task_rng(seed: int, task: Task) -> random.Random:
    return random.Random(f"{seed}:{task.n}:{task.index}:{task.category}:{task.trial}")


@dataclass(frozen=True)
class Options:
    seed: int
    max_cover: int
    restriction: bool = True
    falsify: bool = False
    proof_steps_up_to: int = -1


def run_task(task: Task, opts: Options) -> InstanceResult:
    F = random_diagram(task_rng(opts.seed, task), task.poset, task.category, task.max_size)
    K = hat(F)
    report = verify_theorem(F, opts.max_cover, kan=K)
    result = InstanceResult(task, F, report.checks, report.failures)
    if opts.restriction:
        result.restriction_ok = restriction_check(K).ok
    if opts.falsify:
        G = Precosheaf.from_kan(K)
        result.falsifier_witness = falsify_refinement(G, opts.max_cover, kind="basic") is not None
    if task.n <= opts.proof_steps_up_to:
        for S in down_set_lattice(task.poset).down_sets:
            for C in enumerate_covers(S, opts.max_cover, kind="basic"):
                result.proof_steps += 1
                steps = check_proof_steps(F, C)
                if not steps.ok:
                    result.proof_step_failures.append((C, steps.notes))
    return result


def _run_packed(args):
    return run_task(*args)


def run_sweep(max_elements: int, sizes: dict[str, int], max_cover: int, trials: int, seed: int,
              workers: int = 1, restriction: bool = True, falsify: bool = False,
              proof_steps_up_to: int = -1, keep_results: bool = False) -> SweepReport:
    """Verify the cosheaf property of hat(F) over every instance of the sweep."""
    opts = Options(seed, max_cover, restriction, falsify, proof_steps_up_to)
    work = [(t, opts) for t in tasks(max_elements, sizes, trials)]
    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_run_packed, work, chunksize=8)
    else:
        results = [run_task(*w) for w in work]
    report = SweepReport(posets=len(posets_up_to(max_elements)), instances=len(results))
    for r in results:
        report.checks += r.checks
        report.failures += [(r, c) for c in r.failures]
        if r.restriction_ok is False:
            report.restriction_failures.append(r)
        if r.falsifier_witness:
            report.falsifier_witnesses.append(r)
        report.proof_steps += r.proof_steps
        report.proof_step_failures += [(r, c, notes) for c, notes in r.proof_step_failures]
    if keep_results:
        report.results = results
    return report


@dataclass
class CoverCensus:
    """Cover predicates over every cover of every down-set, per poset."""

    covers: int = 0
    cech: int = 0
    basic: int = 0
    cech_not_basic: list = field(default_factory=list)


def cover_census(posets: Sequence[FinitePoset], max_cover: int) -> CoverCensus:
    census = CoverCensus()
    for P in posets:
        for S in down_set_lattice(P).down_sets:
            for C in enumerate_covers(S, max_cover):
                census.covers += 1
                cech, basic = _cech(C.masks), _basic(C.masks)
                census.cech += cech
                census.basic += basic
                if cech and not basic:
                    census.cech_not_basic.append(C)
    return census
