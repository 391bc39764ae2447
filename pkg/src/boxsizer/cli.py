"""Command-line surface.

Subcommands: gen (synthetic data), optimize (pick a box suite), evaluate
(score a suite on shipments), tune (choose the backward-pass start), sweep
(air-vs-K curve for a K range), baseline (1D volume clustering). Every
command is a pure function of its input files and flags: machine reports are
byte-identical across reruns. Human-readable summaries go to stdout with the
air percentage at 0.1 pp; the JSON report keeps full precision.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .baseline import dp_1d
from .data import (
    SCHEMA_VERSION,
    load_boxes,
    load_catalog,
    load_shipments,
    write_catalog,
    write_report,
    write_shipments,
)
from .evaluation import EvalReport, evaluate, k_sweep, weighted_air
from .model import Catalog, Dims, SolverConfig, total_volume
from .pipeline import KCurve, backward_pass, elbow, forward_pass, solve, tune_scan
from .synth import PERIODS, PROFILES, gen_synthetic


def _sorted_boxes(boxes) -> list[Dims]:
    return sorted(boxes, key=lambda d: (d.volume(), d.as_tuple()))


def _box_rows(boxes) -> list[list[float]]:
    return [[b.length, b.width, b.height] for b in boxes]


def _eval_doc(report: EvalReport) -> dict:
    return {
        "total_product_volume": report.total_product_volume,
        "total_box_volume": report.total_box_volume,
        "xi": report.xi,
        "fitted_shipments": report.fitted_shipments,
        "per_box": [
            {
                "box": [u.box.length, u.box.width, u.box.height],
                "shipment_share": u.shipment_share,
                "volume_share": u.volume_share,
            }
            for u in report.per_box
        ],
        "unfittable": [
            {"product_id": pid, "count": count} for pid, count in report.unfittable
        ],
        "oversize_box": (
            None
            if report.oversize_box is None
            else [report.oversize_box.length, report.oversize_box.width, report.oversize_box.height]
        ),
    }


def _curve_rows(curve: KCurve) -> list[dict]:
    return [
        {"k": p.k, "total_volume": p.total_volume, "xi": p.xi} for p in curve.entries
    ]


def _base_doc(command: str, config: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "units": "cm",
        "config": config,
    }


def _write(doc: dict, out: str | None) -> None:
    if out:
        write_report(out, doc)


def _solver_config(args, k_tilde: int) -> SolverConfig:
    return SolverConfig(
        k=args.k,
        k_tilde=k_tilde,
        t_max=args.t_max,
        canonicalize=args.canonicalize_dims,
        reassign=not args.no_reassign,
        refine=not args.no_refine,
    )


# ---------------------------------------------------------------------------
# commands

def cmd_optimize(args) -> dict:
    catalog = load_catalog(args.catalog, canonicalize=args.canonicalize_dims)
    k_tilde = args.k if args.forward_only else (args.k_tilde or 3 * args.k)
    config = _solver_config(args, k_tilde)
    result = solve(catalog, config)
    boxes = _sorted_boxes(result.boxes)
    doc = _base_doc(
        "optimize",
        {
            "catalog": str(args.catalog),
            "k": args.k,
            "k_tilde": k_tilde,
            "t_max": args.t_max,
            "forward_only": bool(args.forward_only),
            "reassign": config.reassign,
            "refine": config.refine,
            "canonicalize": config.canonicalize,
        },
    )
    doc["boxes"] = _box_rows(boxes)
    doc["exhausted"] = result.exhausted
    training: dict = {"total_volume": total_volume(result.solution)}
    try:
        p, v, xi = weighted_air(boxes, catalog)
        training.update({"product_volume": p, "box_volume": v, "xi": xi})
    except ValueError:
        training.update({"product_volume": 0.0, "box_volume": 0.0, "xi": None})
    doc["training"] = training
    doc["stage_log"] = result.stage_log.as_rows()
    _write(doc, args.out)
    print(f"{len(boxes)} boxes (target k={args.k}, start k_tilde={k_tilde})")
    for b in boxes:
        print(f"  {b.length:.2f} x {b.width:.2f} x {b.height:.2f}")
    if training.get("xi") is not None:
        print(f"training air: {training['xi']:.1f}%")
    if result.exhausted:
        print("note: splits exhausted before the requested cluster count")
    return doc


def cmd_evaluate(args) -> dict:
    catalog = load_catalog(args.catalog, canonicalize=args.canonicalize_dims)
    boxes = load_boxes(args.boxes)
    if args.canonicalize_dims:
        boxes = [b.canonical() for b in boxes]
    shipments = load_shipments(args.shipments)
    report = evaluate(boxes, shipments, catalog, oversize_box=args.oversize_box)
    doc = _base_doc(
        "evaluate",
        {
            "catalog": str(args.catalog),
            "boxes": str(args.boxes),
            "shipments": str(args.shipments),
            "canonicalize": args.canonicalize_dims,
        },
    )
    doc["boxes"] = _box_rows(boxes)
    doc["evaluation"] = _eval_doc(report)
    _write(doc, args.out)
    print(f"air: {report.xi:.1f}% over {report.fitted_shipments} shipments")
    if report.unfittable:
        skipped = sum(c for _, c in report.unfittable)
        print(f"unfittable: {len(report.unfittable)} products, {skipped} shipments excluded")
    return doc


def cmd_tune(args) -> dict:
    catalog = load_catalog(args.catalog, canonicalize=args.canonicalize_dims)
    shipments = load_shipments(args.shipments)
    candidates = [int(tok) for tok in args.candidates.split(",") if tok.strip()]
    scan = tune_scan(
        catalog,
        shipments,
        args.k,
        candidates,
        args.t_max,
        reassign=not args.no_reassign,
        refine=not args.no_refine,
    )
    best_k, best_xi = scan[0]
    for cand, xi in scan[1:]:
        if xi < best_xi:
            best_k, best_xi = cand, xi
    doc = _base_doc(
        "tune",
        {
            "catalog": str(args.catalog),
            "shipments": str(args.shipments),
            "k": args.k,
            "candidates": candidates,
            "t_max": args.t_max,
        },
    )
    doc["curve"] = [{"k_start": c, "xi": xi} for c, xi in scan]
    doc["k_tilde"] = best_k
    _write(doc, args.out)
    for cand, xi in scan:
        print(f"  start {cand}: validation air {xi:.1f}%")
    print(f"chosen k_tilde: {best_k}")
    return doc


def cmd_sweep(args) -> dict:
    catalog = load_catalog(args.catalog, canonicalize=args.canonicalize_dims)
    shipments = load_shipments(args.shipments)
    if args.k_max < args.k_min:
        raise ValueError("k-max must be >= k-min")
    wanted = range(args.k_min, args.k_max + 1)
    k_tilde = args.k_tilde or 3 * args.k_max
    reassign = not args.no_reassign
    refine = not args.no_refine
    if args.forward_only:
        fw = forward_pass(
            catalog, max(k_tilde, args.k_max), args.t_max,
            reassign=reassign, refine=refine, record=wanted,
        )
        ladder = fw.ladder
    else:
        fw = forward_pass(
            catalog, k_tilde, args.t_max, reassign=reassign, refine=refine
        )
        ladder = backward_pass(
            fw.solution, catalog, args.k_min, args.t_max,
            reassign=reassign, refine=refine, record=wanted,
        )
    curve = k_sweep(ladder, shipments, catalog)
    doc = _base_doc(
        "sweep",
        {
            "catalog": str(args.catalog),
            "shipments": str(args.shipments),
            "k_min": args.k_min,
            "k_max": args.k_max,
            "k_tilde": k_tilde,
            "t_max": args.t_max,
            "forward_only": bool(args.forward_only),
            "reassign": reassign,
            "refine": refine,
        },
    )
    doc["k_curve"] = _curve_rows(curve)
    ks = [p.k for p in curve.entries]
    consecutive = all(b - a == 1 for a, b in zip(ks, ks[1:]))
    doc["elbow_k"] = elbow(curve) if len(ks) >= 3 and consecutive else None
    _write(doc, args.out)
    if args.csv_out:
        lines = ["k,total_volume,xi"]
        lines += [f"{p.k},{p.total_volume!r},{p.xi!r}" for p in curve.entries]
        Path(args.csv_out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    for p in curve.entries:
        print(f"  k={p.k}: air {p.xi:.1f}%")
    if doc["elbow_k"] is not None:
        print(f"elbow at k={doc['elbow_k']}")
    return doc


def cmd_baseline(args) -> dict:
    catalog = load_catalog(args.catalog, canonicalize=args.canonicalize_dims)
    result = dp_1d(catalog, args.k)
    boxes = _sorted_boxes(result.boxes)
    doc = _base_doc(
        "baseline",
        {"catalog": str(args.catalog), "k": args.k, "canonicalize": args.canonicalize_dims},
    )
    doc["boxes"] = _box_rows(boxes)
    doc["v_tilde"] = result.v_tilde
    doc["total_volume"] = total_volume(result.solution)
    if args.shipments:
        shipments = load_shipments(args.shipments)
        doc["evaluation"] = _eval_doc(evaluate(boxes, shipments, catalog))
    _write(doc, args.out)
    print(f"1D objective: {result.v_tilde!r}")
    if "evaluation" in doc:
        print(f"air: {doc['evaluation']['xi']:.1f}%")
    return doc


def cmd_gen(args) -> dict:
    catalog, shipments = gen_synthetic(args.n, args.seed, args.profile)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    catalog_path = out / "catalog.csv"
    write_catalog(catalog_path, catalog)
    paths = {"catalog": str(catalog_path)}
    for period in PERIODS:
        path = out / f"shipments_{period}.csv"
        write_shipments(path, shipments[period])
        paths[period] = str(path)
    print(f"wrote {len(catalog)} products and {len(PERIODS)} shipment periods to {out}")
    return paths


# ---------------------------------------------------------------------------
# parser

def _add_common_solver_flags(p) -> None:
    p.add_argument("--t-max", type=int, default=50, help="refinement iteration cap")
    p.add_argument("--no-refine", action="store_true", help="skip iterative refinement")
    p.add_argument("--no-reassign", action="store_true", help="skip product reassignment")
    p.add_argument(
        "--canonicalize-dims",
        action="store_true",
        help="sort dimension triples descending (products may be rotated into boxes)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxsizer",
        description="Compute and evaluate shipping-box dimension suites.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="choose k box sizes for a catalog")
    p.add_argument("--catalog", required=True)
    p.add_argument("--k", type=int, required=True, help="number of box sizes")
    p.add_argument("--k-tilde", type=int, default=None, help="backward-pass start (default 3k)")
    p.add_argument("--forward-only", action="store_true", help="no backward pass (k_tilde = k)")
    _add_common_solver_flags(p)
    p.add_argument("--out", default=None, help="JSON report path")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("evaluate", help="score a box suite on a shipment history")
    p.add_argument("--boxes", required=True, help="boxes CSV or a report JSON")
    p.add_argument("--catalog", required=True)
    p.add_argument("--shipments", required=True)
    p.add_argument("--oversize-box", action="store_true",
                   help="report a virtual box covering unfittable shipments")
    p.add_argument("--canonicalize-dims", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("tune", help="pick the backward-pass starting count")
    p.add_argument("--catalog", required=True, help="training catalog")
    p.add_argument("--shipments", required=True, help="validation shipments")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--candidates", required=True, help="comma-separated starting counts")
    _add_common_solver_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("sweep", help="air-vs-K curve over a K range")
    p.add_argument("--catalog", required=True, help="training catalog")
    p.add_argument("--shipments", required=True, help="test shipments")
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--k-tilde", type=int, default=None, help="backward-pass start (default 3*k_max)")
    p.add_argument("--forward-only", action="store_true")
    _add_common_solver_flags(p)
    p.add_argument("--out", default=None)
    p.add_argument("--csv-out", default=None, help="plot-ready CSV for the curve")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baseline", help="1D dynamic-programming volume clustering")
    p.add_argument("--catalog", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--shipments", default=None, help="optionally score on shipments")
    p.add_argument("--canonicalize-dims", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("gen", help="generate a synthetic catalog and shipment periods")
    p.add_argument("--n", type=int, required=True, help="number of products")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", default="skewed", choices=sorted(PROFILES))
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
