"""Command-line front door: extract, eval, synth, distances."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .clustering import ClusterConfig, RoundTrace, extract_tree_with_trace
from .documents import (
    ManifestEntry,
    dumps_json,
    layout_to_doc,
    read_layout,
    read_manifest,
    read_tree,
    write_json,
)
from .evaluation import CaseVerdict, EvalCase, build_report, evaluate_case
from .geometry import GeometryConfig
from .model import ParseError, reading_order, serialize_tree, validate_tree
from .synth import GenerationError, SynthSpec, generate_with_certificate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--align-tolerance",
        type=float,
        default=2.0,
        help="max edge offset that still counts as aligned (default 2.0)",
    )
    parser.add_argument(
        "--align-floor",
        type=float,
        default=0.5,
        help="lower clamp for the alignment divisor (default 0.5)",
    )
    parser.add_argument(
        "--epsilon-slack",
        type=float,
        default=1e-9,
        help="relative slack when comparing distances to the merge radius (default 1e-9)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formtree",
        description="Group form fields into their visual hierarchy from bounding boxes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract the grouping tree from a layout file")
    p.add_argument("layout", type=Path, help="layout JSON file")
    p.add_argument("--out", type=Path, help="write the tree document here instead of stdout")
    p.add_argument(
        "--dump-distances",
        type=Path,
        help="also write round-by-round distance matrices and radii to this file",
    )
    _add_config_flags(p)

    p = sub.add_parser("eval", help="score a corpus manifest against its gold trees")
    p.add_argument("manifest", type=Path, help="manifest JSON file")
    p.add_argument("--report", type=Path, help="also write the machine-readable report here")
    _add_config_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic corpus with known gold trees")
    p.add_argument("--out-dir", type=Path, required=True, help="directory for the corpus")
    p.add_argument("--count", type=int, default=10, help="number of cases (default 10)")
    p.add_argument("--seed", type=int, default=0, help="seed of the first case (default 0)")
    p.add_argument("--n-groups", nargs=2, type=int, default=(2, 4), metavar=("LO", "HI"))
    p.add_argument("--fields-per-group", nargs=2, type=int, default=(2, 4), metavar=("LO", "HI"))
    p.add_argument("--intra-gap", nargs=2, type=int, default=(4, 12), metavar=("LO", "HI"))
    p.add_argument("--field-size", nargs=2, type=int, default=(16, 64), metavar=("LO", "HI"))
    p.add_argument("--gap-ratio", type=float, default=3.0)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--nesting-depth", type=int, default=1)
    p.add_argument("--domain", default="synthetic", help="domain recorded in the manifest")
    p.add_argument(
        "--verbose", action="store_true", help="print the per-case separation certificates"
    )
    _add_config_flags(p)

    p = sub.add_parser("distances", help="print the field distance diagnostics of a layout")
    p.add_argument("layout", type=Path, help="layout JSON file")
    _add_config_flags(p)

    return parser


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _geometry(args: argparse.Namespace) -> GeometryConfig:
    return GeometryConfig(align_tolerance=args.align_tolerance, align_floor=args.align_floor)


def _cluster_config(args: argparse.Namespace) -> ClusterConfig:
    return ClusterConfig(geometry=_geometry(args), epsilon_slack=args.epsilon_slack)


def _trace_doc(trace: list[RoundTrace]) -> dict:
    return {
        "rounds": [
            {
                "elements": [list(member) for member in r.members],
                "matrix": [list(row) for row in r.matrix],
                "epsilon": r.epsilon,
                "merged": [list(group) for group in r.merged],
            }
            for r in trace
        ]
    }


def cmd_extract(args: argparse.Namespace) -> int:
    try:
        layout = read_layout(args.layout)
    except (OSError, ParseError) as exc:
        return _fail(str(exc))
    try:
        tree, trace = extract_tree_with_trace(layout, _cluster_config(args))
    except ValueError as exc:
        return _fail(str(exc))
    violations = validate_tree(tree, layout)
    if violations:
        for v in violations:
            print(f"invalid result: {v.path}: {v.message}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        if args.dump_distances:
            write_json(args.dump_distances, _trace_doc(trace))
        doc = serialize_tree(tree)
        if args.out:
            write_json(args.out, doc)
        else:
            print(dumps_json(doc), end="")
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_OK


def _load_case(entry: ManifestEntry) -> EvalCase:
    layout = read_layout(entry.layout_path)
    gold = read_tree(entry.gold_path)
    mismatches = validate_tree(gold, layout)
    if mismatches:
        details = "; ".join(f"{v.path}: {v.message}" for v in mismatches)
        raise ParseError(f"{entry.gold_path}: gold tree does not fit the layout: {details}")
    return EvalCase(
        name=entry.name,
        layout=layout,
        gold=gold,
        domain=entry.domain,
        normalize_gold_order=entry.normalize_gold_order,
    )


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        entries = read_manifest(args.manifest)
    except (OSError, ParseError) as exc:
        return _fail(str(exc))
    if not entries:
        return _fail(f"{args.manifest}: manifest has no cases")
    cfg = _cluster_config(args)
    verdicts: list[CaseVerdict] = []
    for entry in entries:
        try:
            case = _load_case(entry)
        except (OSError, ParseError) as exc:
            # an unreadable case must not abort the run; it scores as an error
            verdicts.append(
                CaseVerdict(
                    name=entry.name,
                    domain=entry.domain,
                    matched=False,
                    errored=True,
                    error=str(exc),
                )
            )
            continue
        verdicts.append(evaluate_case(case, cfg))
    report = build_report(verdicts)
    try:
        if args.report:
            write_json(args.report, report.to_doc())
    except OSError as exc:
        return _fail(str(exc))
    print(report.format_table())
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    if args.count < 1:
        return _fail("--count must be at least 1")
    try:
        base_spec = SynthSpec(
            seed=args.seed,
            n_groups=tuple(args.n_groups),
            fields_per_group=tuple(args.fields_per_group),
            intra_gap=tuple(args.intra_gap),
            gap_ratio=args.gap_ratio,
            jitter=args.jitter,
            nesting_depth=args.nesting_depth,
            field_size=tuple(args.field_size),
        )
    except ValueError as exc:
        return _fail(str(exc))
    geometry = _geometry(args)
    out_dir: Path = args.out_dir
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        cases = []
        for i in range(args.count):
            spec = replace(base_spec, seed=args.seed + i)
            layout, gold, certificate = generate_with_certificate(spec, geometry)
            layout_name = f"{layout.name}.layout.json"
            gold_name = f"{layout.name}.gold.json"
            write_json(out_dir / layout_name, layout_to_doc(layout))
            write_json(out_dir / gold_name, serialize_tree(gold))
            cases.append(
                {
                    "name": layout.name,
                    "layout_path": layout_name,
                    "gold_path": gold_name,
                    "domain": args.domain,
                    "normalize_gold_order": False,
                }
            )
            if args.verbose:
                print(
                    f"{layout.name}: separation ratio {certificate.ratio:.3f} "
                    f"(min inter {certificate.min_inter_distance:.3f}, "
                    f"max intra {certificate.max_intra_distance:.3f})"
                )
        write_json(out_dir / "manifest.json", {"cases": cases})
    except (OSError, GenerationError) as exc:
        return _fail(str(exc))
    print(f"wrote {args.count} cases to {out_dir}")
    return EXIT_OK


def cmd_distances(args: argparse.Namespace) -> int:
    try:
        layout = read_layout(args.layout)
    except (OSError, ParseError) as exc:
        return _fail(str(exc))
    geometry = _geometry(args)
    cfg = ClusterConfig(geometry=geometry, epsilon_slack=args.epsilon_slack)
    from .clustering import Element, compute_epsilon, distance_matrix
    from .geometry import alignment_score
    from .model import Leaf

    fields = reading_order(layout.fields, geometry)
    elements = [Element(Leaf(f.id), f.bbox, i) for i, f in enumerate(fields)]
    matrix = distance_matrix(elements, cfg)
    width = max(len(f.id) for f in fields)
    print("pair distances:")
    for f, row in zip(fields, matrix):
        print(f"  {f.id.rjust(width)}  " + "  ".join(f"{v:10.4f}" for v in row))
    print("alignment scores:")
    for f in fields:
        scores = [alignment_score(f.bbox, g.bbox, geometry) for g in fields]
        print(f"  {f.id.rjust(width)}  " + "  ".join(f"{s:10d}" for s in scores))
    if len(fields) < 2:
        print("epsilon: undefined (single field)")
    else:
        print(f"epsilon: {compute_epsilon(matrix):.4f}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "extract": cmd_extract,
        "eval": cmd_eval,
        "synth": cmd_synth,
        "distances": cmd_distances,
    }
    return handlers[args.command](args)


def cli() -> None:
    raise SystemExit(main())
