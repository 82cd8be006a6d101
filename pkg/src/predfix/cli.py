"""Command-line surface: solve, check, enumerate, oracle, um.

Exit codes: 0 success, 1 internal invariant breach or oracle mismatch,
2 rejected input.  All output is canonical and byte-stable for fixed
inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import io as docio
from . import oracle
from .core import Multifunction
from .errors import InternalInvariantError, ValidationError
from .instance import ControlInstance, SelectionMap
from .nonanticipation import (
    first_violation,
    greatest_selection,
    is_nonanticipating,
    is_vacuous,
    selection_sizes,
    trivial_windows,
)
from .order import narrow_to_function
from .randgen import random_instance
from .unlock import (
    complement_map,
    intersect_maps,
    restrict_map,
    union_maps,
    unlocking_bottom,
    unlocking_top,
)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError("E_IO", path, str(e)) from None


def _fmt_values(ids: tuple[str, ...]) -> str:
    return ",".join(ids) if ids else "-"


def _selection_line(label: str, phi: SelectionMap) -> str:
    parts = " ".join(
        f"{w}={_fmt_values(phi.value(w))}" for w in phi.instance.uncertainties.ids
    )
    return f"{label}: {parts}"


def _vacuity(instance: ControlInstance) -> dict:
    return {
        "vacuous": is_vacuous(instance),
        "trivial_windows": [
            list(instance.window_ids(a)) for a in trivial_windows(instance)
        ],
    }


def cmd_solve(args: argparse.Namespace) -> int:
    instance = docio.parse_instance(_read(args.instance))
    result, trace = greatest_selection(instance)
    doc = docio.SolutionDocument(
        selection=result.to_dict(),
        iterations=trace.steps,
        vacuity=_vacuity(instance),
        iteration_sizes=selection_sizes(trace) if args.trace else None,
    )
    text = docio.serialize_solution(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"iterations: {trace.steps}")
        sizes = " ".join(
            f"{w}={len(result.value(w))}" for w in instance.uncertainties.ids
        )
        print(f"sizes: {sizes}")
        print(f"vacuous: {'true' if doc.vacuity['vacuous'] else 'false'}")
        print(f"wrote: {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def _selection_from_doc(
    instance: ControlInstance, selection: dict[str, list[str]]
) -> SelectionMap:
    unc = set(instance.uncertainties.ids)
    given = set(selection)
    for w in sorted(given - unc):
        raise ValidationError(
            "E_DANGLING_REF", f"selection.{w}", "unknown uncertainty id"
        )
    missing = sorted(unc - given)
    if missing:
        raise ValidationError(
            "E_SCHEMA", "selection", f"missing uncertainty ids: {', '.join(missing)}"
        )
    for w, ids in selection.items():
        if len(set(ids)) != len(ids):
            raise ValidationError("E_SCHEMA", f"selection.{w}", "duplicate control id")
        for c in ids:
            if c not in instance.controls:
                raise ValidationError(
                    "E_DANGLING_REF", f"selection.{w}", f"unknown control id {c!r}"
                )
    return SelectionMap.from_dict(instance, selection)


def cmd_check(args: argparse.Namespace) -> int:
    instance = docio.parse_instance(_read(args.instance))
    selection = docio.parse_selection_only(_read(args.selection))
    phi = _selection_from_doc(instance, selection)
    if not phi.le(instance.beta_selection()):
        raise ValidationError(
            "E_SELECTION_EXCEEDS_BOUND", "selection", "selection is not below beta"
        )
    print("selection: within-bound")
    verdict = is_nonanticipating(phi)
    witness = first_violation(phi)
    if verdict != (witness is None):
        raise InternalInvariantError("witness search disagrees with the check")
    print(f"non-anticipating: {'yes' if verdict else 'no'}")
    if witness is not None:
        print(f"witness window: {','.join(witness.window)}")
        print(f"witness pair: {witness.member} {witness.other}")
        print(f"witness trace: {','.join(f'{t}={v}' for t, v in witness.trace)}")
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    instance = docio.parse_instance(_read(args.instance))
    for phi in oracle.all_selections(instance, cap=args.cap):
        print(
            json.dumps(
                {w: list(phi.value(w)) for w in instance.uncertainties.ids},
                separators=(",", ":"),
            )
        )
    return 0


def _compare_one(instance: ControlInstance, cap: int) -> bool:
    solved, _ = greatest_selection(instance)
    brute = oracle.greatest_nonanticipating(instance, cap=cap)
    return solved.masks.tolist() == brute.masks.tolist()


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.random is not None:
        if args.instance is not None:
            raise ValidationError(
                "E_SCHEMA", "arguments", "give either an instance path or --random"
            )
        rng = random.Random(args.seed)
        status = 0
        for k in range(1, args.random + 1):
            instance = random_instance(rng, beta_pair_cap=min(args.cap, 10))
            ok = _compare_one(instance, args.cap)
            print(f"instance {k}: {'MATCH' if ok else 'MISMATCH'}")
            if not ok:
                status = 1
        return status
    if args.instance is None:
        raise ValidationError(
            "E_SCHEMA", "arguments", "an instance path or --random is required"
        )
    instance = docio.parse_instance(_read(args.instance))
    solved, _ = greatest_selection(instance)
    brute = oracle.greatest_nonanticipating(instance, cap=args.cap)
    print(_selection_line("solver", solved))
    print(_selection_line("oracle", brute))
    if solved.masks.tolist() == brute.masks.tolist():
        print("MATCH")
        return 0
    print("MISMATCH")
    return 1


def _table_lines(f: Multifunction) -> list[str]:
    return [
        f"{x}: {' '.join(f.value(x).ids())}".rstrip() for x in f.domain.elements
    ]


def _print_table(f: Multifunction) -> None:
    for line in _table_lines(f):
        print(line)


def _base_map(doc: docio.CalculusDocument, which: str, predicate=None):
    p = predicate if predicate is not None else doc.predicate
    return unlocking_top(p) if which == "top" else unlocking_bottom(p)


def cmd_um(args: argparse.Namespace) -> int:
    from .core import fix_points

    doc = docio.parse_calculus(_read(args.document))
    if args.action == "top":
        _print_table(unlocking_top(doc.predicate))
    elif args.action == "bot":
        _print_table(unlocking_bottom(doc.predicate))
    elif args.action == "combine":
        g = _base_map(doc, args.use)
        if args.op == "not":
            combined = complement_map(g)
        else:
            if doc.predicate_q is None:
                raise ValidationError(
                    "E_SCHEMA", "predicate_q", "combine with and/or needs a second predicate"
                )
            q = _base_map(doc, args.use, doc.predicate_q)
            combined = intersect_maps(g, q) if args.op == "and" else union_maps(g, q)
        _print_table(combined)
        print(f"fix: {' '.join(fix_points(combined).ids())}".rstrip())
    elif args.action == "restrict":
        if doc.subset is None:
            raise ValidationError("E_SCHEMA", "subset", "restrict needs a subset")
        _print_table(restrict_map(_base_map(doc, args.use), doc.subset))
    elif args.action == "narrow":
        if doc.poset is None:
            raise ValidationError("E_SCHEMA", "order", "narrow needs an order")
        result = narrow_to_function(_base_map(doc, args.use), doc.predicate, doc.poset)
        print(f"Y: {' '.join(result.domain.ids())}".rstrip())
        mapping = " ".join(f"{x}->{result.mapping[x]}" for x in result.domain.ids())
        print(f"g: {mapping}".rstrip())
        print(f"fix: {' '.join(result.fixed_points())}".rstrip())
        if result.closure_violations:
            pairs = " ".join(f"{x}->{y}" for x, y in result.closure_violations)
            print(f"closure violations: {pairs}")
        else:
            print("closure violations: -")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predfix",
        description="Greatest non-anticipating selections and the unlocking calculus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute the greatest selection")
    p_solve.add_argument("instance")
    p_solve.add_argument("--trace", action="store_true", help="record per-iteration sizes")
    p_solve.add_argument("--output", help="write the solution document here")
    p_solve.set_defaults(func=cmd_solve)

    p_check = sub.add_parser("check", help="check a selection for non-anticipation")
    p_check.add_argument("instance")
    p_check.add_argument("selection")
    p_check.set_defaults(func=cmd_check)

    p_enum = sub.add_parser("enumerate", help="list all selections below the bound")
    p_enum.add_argument("instance")
    p_enum.add_argument("--cap", type=int, default=20, help="refuse beyond 2**cap")
    p_enum.set_defaults(func=cmd_enumerate)

    p_oracle = sub.add_parser("oracle", help="compare solver against brute force")
    p_oracle.add_argument("instance", nargs="?")
    p_oracle.add_argument("--random", type=int, help="check N random instances")
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--cap", type=int, default=20, help="refuse beyond 2**cap")
    p_oracle.set_defaults(func=cmd_oracle)

    p_um = sub.add_parser("um", help="unlocking-calculus demos")
    p_um.add_argument("action", choices=["top", "bot", "combine", "restrict", "narrow"])
    p_um.add_argument("document")
    p_um.add_argument("--op", choices=["and", "or", "not"], default="and")
    p_um.add_argument("--use", choices=["top", "bottom"], default="bottom")
    p_um.set_defaults(func=cmd_um)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"error {e.code} at {e.path}: {e.message}", file=sys.stderr)
        return 2
    except InternalInvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
