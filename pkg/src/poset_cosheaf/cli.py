"""Command-line driver.

Exit codes: 0 success, 1 a verdict failed, 2 invalid input, 3 size bound hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .covers import is_basic_cover, is_cech_cover, is_complete_cover
from .cosheaf import (counterexample_report, cosheaf_arrow, falsify_refinement,
                      figure1_fixture)
from .errors import ParseError, SizeError, ValidationError
from .instance import InstanceFile, cover_json, diagram_json, load, save
from .kan import hat
from .poset import down_set_lattice
from .sweep import run_sweep
from .valcat import FINSET, VECT

EXIT_OK, EXIT_VERDICT, EXIT_INVALID, EXIT_SIZE = 0, 1, 2, 3


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _write_report(path: str | None, payload: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def cmd_check_cover(args) -> int:
    inst = load(args.input)
    C = inst.cover(args.cover)
    print(f"cover: yes, cech: {_yes(is_cech_cover(C))}, basic: {_yes(is_basic_cover(C))}, "
          f"complete: {_yes(is_complete_cover(C))}")
    return EXIT_OK


def cmd_kan(args) -> int:
    inst = load(args.input)
    if inst.diagram is None or inst.opens is not None:
        raise ValidationError("kan needs a diagram indexed by the poset elements")
    K = hat(inst.diagram)
    L = down_set_lattice(inst.poset)
    out = InstanceFile(inst.poset, diagram=K.result, opens=L.down_sets,
                       open_names=tuple(S.label() for S in L.down_sets),
                       covers=dict(inst.covers),
                       metadata={**inst.metadata, "derived": "left Kan extension along p -> D_p"})
    save(out, args.output)
    print(f"wrote {len(L.down_sets)} down-sets to {args.output}")
    return EXIT_OK


def cmd_check_cosheaf(args) -> int:
    inst = load(args.input)
    G = inst.precosheaf()
    C = inst.cover(args.cover)
    check = cosheaf_arrow(G, C)
    print(f"dim colim over cover={check.dimension}, dim target={G.value(C.target)}, "
          f"iso: {_yes(check.verdict)}")
    return EXIT_OK if check.verdict else EXIT_VERDICT


def cmd_verify_theorem(args) -> int:
    report = run_sweep(args.max_elements, {args.category: args.max_dim}, args.max_cover,
                       args.trials, args.seed, workers=args.workers)
    print(f"posets: {report.posets}, instances: {report.instances}, category: {args.category}")
    print(report.summary())
    _write_report(args.json_report, report.to_json())
    return EXIT_OK if not report.failures else EXIT_VERDICT


def cmd_counterexample(args) -> int:
    if args.input:
        inst = load(args.input)
        fixture = (inst.poset, inst.precosheaf(), inst.cover(args.finer), inst.cover(args.coarser))
    else:
        fixture = figure1_fixture()
    report = counterexample_report(fixture)
    print(report.summary())
    _write_report(args.json_report, {
        "refines": report.refines, "dim_finer": report.dim_finer,
        "dim_coarser": report.dim_coarser, "dim_target": report.dim_target,
        "injective": report.injective, "surjective": report.surjective,
        "composite_iso": report.composite_iso, "ok": report.ok})
    return EXIT_OK if report.ok else EXIT_VERDICT


def cmd_falsify(args) -> int:
    inst = load(args.input)
    G = inst.precosheaf()
    w = falsify_refinement(G, args.max_cover, kind=args.kind)
    print("none" if w is None else w.summary())
    payload: dict = {"witness": None}
    if w is not None:
        payload["witness"] = {
            "diagram": diagram_json(G.diagram),
            "finer": cover_json(w.finer.cover), "coarser": cover_json(w.coarser.cover),
            "dim_finer": w.finer.dimension, "dim_coarser": w.coarser.dimension}
    _write_report(args.json_report, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poset-cosheaf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-cover", help="print the cover predicates of a named cover")
    p.add_argument("--input", required=True)
    p.add_argument("--cover", required=True)
    p.set_defaults(func=cmd_check_cover)

    p = sub.add_parser("kan", help="write the Kan extension over the down-set lattice")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_kan)

    p = sub.add_parser("check-cosheaf", help="test the universal arrow for a named cover")
    p.add_argument("--input", required=True)
    p.add_argument("--cover", required=True)
    p.set_defaults(func=cmd_check_cosheaf)

    p = sub.add_parser("verify-theorem", help="exhaustive sweep over small labeled posets")
    p.add_argument("--max-elements", type=int, default=4)
    p.add_argument("--max-dim", type=int, default=2, help="max dimension (vect) or cardinality (finset)")
    p.add_argument("--max-cover", type=int, default=4)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--category", choices=[VECT, FINSET], default=VECT)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json-report")
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("counterexample", help="reproduce the refinement counterexample")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=["figure1"])
    src.add_argument("--input")
    p.add_argument("--finer", default="U1")
    p.add_argument("--coarser", default="U2")
    p.add_argument("--json-report")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("falsify-refinement", help="search for a refinement witness")
    p.add_argument("--input", required=True)
    p.add_argument("--max-cover", type=int, default=4)
    p.add_argument("--kind", choices=["all", "cech", "basic"], default="all")
    p.add_argument("--json-report")
    p.set_defaults(func=cmd_falsify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
