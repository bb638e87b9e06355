"""Command-line surface: score, evaluate, merge, stats, split, benchmark.

Exit codes: 0 success, 1 input/format error, 2 domain error (an image with
no assessable pixels). All machine-readable reports are JSON with a
``schema_version`` field and are byte-deterministic for identical inputs
unless ``--timestamp`` is given.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from .adjudication import merge_conservative
from .codec import load_depth, load_mask, save_mask
from .dataset import (
    ManifestError,
    benchmark_grouped_scores,
    class_histogram,
    load_manifest,
    save_manifest,
    split_dataset,
)
from .metrics import mean_iou
from .severity import score_image
from .types import (
    DamageClass,
    DimensionMismatchError,
    ScoringConfig,
    UnassessableImageError,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_DOMAIN_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input errors (exit 1), not domain errors
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_INPUT_ERROR)


def _report(payload: dict, args) -> dict:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    if getattr(args, "timestamp", False):
        payload["generated_at"] = datetime.now(timezone.utc).isoformat()
    return payload


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def cmd_score(args) -> int:
    cfg = ScoringConfig(ds_weight=args.ds_weight, depth_floor=args.depth_floor)
    mask = load_mask(args.mask)
    depth = load_depth(args.depth)
    try:
        score = score_image(mask, depth, cfg)
    except UnassessableImageError as exc:
        raise UnassessableImageError(f"{args.mask}: {exc}") from exc
    except DimensionMismatchError as exc:
        raise DimensionMismatchError(f"{args.mask} vs {args.depth}: {exc}") from exc
    if args.json:
        _emit_json(
            _report(
                {
                    "score": score.value,
                    "assessable_pixels": score.assessable_pixels,
                    "config": {"ds_weight": cfg.ds_weight, "depth_floor": cfg.depth_floor},
                },
                args,
            )
        )
    else:
        print(score.value)
    return EXIT_OK


def _evaluate_entry(entry) -> dict:
    try:
        if entry.pred_mask is None:
            raise ManifestError("entry has no pred_mask")
        gt = load_mask(entry.mask_path)
        pred = load_mask(entry.pred_mask_path)
        report = mean_iou(gt, pred)
        return {"id": entry.id, **report.to_json_dict()}
    except Exception as exc:
        return {"id": entry.id, "error": str(exc)}


def cmd_evaluate(args) -> int:
    entries = sorted(load_manifest(args.manifest), key=lambda e: e.id)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_evaluate_entry, entries))
    else:
        rows = [_evaluate_entry(entry) for entry in entries]
    means = [row["mean"] for row in rows if "error" not in row]
    failed = len(rows) - len(means)
    dataset_mean = sum(means) / len(means) if means else None
    payload = _report(
        {"entries": rows, "dataset_mean_iou": dataset_mean, "failed": failed}, args
    )
    if args.json:
        _emit_json(payload)
    else:
        for row in rows:
            if "error" in row:
                print(f"{row['id']}: ERROR {row['error']}")
            else:
                print(f"{row['id']}: mean IoU {row['mean']:.6f}")
        if dataset_mean is not None:
            print(f"dataset mean IoU: {dataset_mean:.6f} over {len(means)} images")
        if failed:
            print(f"failed entries: {failed}", file=sys.stderr)
    return EXIT_INPUT_ERROR if failed else EXIT_OK


def cmd_merge(args) -> int:
    a = load_mask(args.mask_a)
    b = load_mask(args.mask_b)
    try:
        merged = merge_conservative(a, b)
    except DimensionMismatchError as exc:
        raise DimensionMismatchError(f"{args.mask_a} vs {args.mask_b}: {exc}") from exc
    save_mask(merged, args.out)
    if args.json:
        _emit_json(_report({"out": str(args.out), "width": merged.width, "height": merged.height}, args))
    else:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    entries = sorted(load_manifest(args.manifest), key=lambda e: e.id)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            masks = list(pool.map(lambda e: load_mask(e.mask_path), entries))
    else:
        masks = [load_mask(entry.mask_path) for entry in entries]
    hist = class_histogram(masks)
    payload = _report(
        {"images": len(masks), "total_pixels": hist.total, "counts": hist.to_json_dict()}, args
    )
    if args.json:
        _emit_json(payload)
    else:
        print(f"images: {len(masks)}  pixels: {hist.total}")
        for cls in DamageClass:
            print(f"  {cls.name.lower():<10} {hist.counts[cls]}")
    return EXIT_OK


def cmd_split(args) -> int:
    manifest = Path(args.manifest)
    entries = load_manifest(manifest)
    train, val = split_dataset(entries, args.ratio, args.seed)
    out_train = Path(args.out_train) if args.out_train else manifest.with_suffix(".train.jsonl")
    out_val = Path(args.out_val) if args.out_val else manifest.with_suffix(".val.jsonl")
    save_manifest(train, out_train)
    save_manifest(val, out_val)
    payload = _report(
        {
            "train": {"path": str(out_train), "entries": len(train)},
            "val": {"path": str(out_val), "entries": len(val)},
            "ratio": args.ratio,
            "seed": args.seed,
        },
        args,
    )
    if args.json:
        _emit_json(payload)
    else:
        print(f"train: {len(train)} entries -> {out_train}")
        print(f"val:   {len(val)} entries -> {out_val}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    cfg = ScoringConfig(ds_weight=args.ds_weight, depth_floor=args.depth_floor)
    entries = load_manifest(args.manifest)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # skipped entries are reported below
        report = benchmark_grouped_scores(entries, cfg, jobs=args.jobs)
    payload = _report(report.to_json_dict(), args)
    if args.json:
        _emit_json(payload)
    else:
        for label, group in report.groups.items():
            print(f"{label.value:<13} mean score {group.mean_score:.6f}  (n={group.n})")
        print(f"ordering_ok: {str(report.ordering_ok).lower()}")
    for eid, reason in report.skipped:
        print(f"warning: skipped '{eid}': {reason}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report on stdout")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker threads for per-entry work (default 1)")
    common.add_argument("--timestamp", action="store_true",
                        help="include a generation timestamp in JSON reports")

    parser = _Parser(prog="quakesev",
                     description="Damage severity scoring and evaluation for segmentation masks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="severity score of one mask + depth pair")
    p.add_argument("--mask", required=True, help="mask PNG (palette, RGB, or grayscale form)")
    p.add_argument("--depth", required=True, help="16-bit grayscale depth PNG")
    p.add_argument("--ds-weight", type=float, default=0.65,
                   help="weight of a damaged-structure pixel relative to debris (default 0.65)")
    p.add_argument("--depth-floor", type=float, default=0.1,
                   help="lower end of the normalized depth range (default 0.1)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", parents=[common],
                       help="per-image and dataset mean IoU of predictions vs ground truth")
    p.add_argument("manifest", help="JSON Lines manifest with mask and pred_mask per entry")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("merge", parents=[common],
                       help="conservative merge of two annotator masks")
    p.add_argument("mask_a")
    p.add_argument("mask_b")
    p.add_argument("out", help="output mask PNG path")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("stats", parents=[common], help="class pixel histogram over manifest masks")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("split", parents=[common],
                       help="deterministic train/validation split of a manifest")
    p.add_argument("manifest")
    p.add_argument("--ratio", type=float, default=0.8, help="train fraction (default 0.8)")
    p.add_argument("--seed", type=int, default=0, help="shuffle seed (default 0)")
    p.add_argument("--out-train", help="train manifest path (default <manifest>.train.jsonl)")
    p.add_argument("--out-val", help="validation manifest path (default <manifest>.val.jsonl)")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("benchmark", parents=[common],
                       help="mean severity score per label group, with ordering check")
    p.add_argument("manifest", help="manifest whose entries carry label, mask, and depth")
    p.add_argument("--ds-weight", type=float, default=0.65)
    p.add_argument("--depth-floor", type=float, default=0.1)
    p.set_defaults(func=cmd_benchmark)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UnassessableImageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def run() -> None:
    """Console-script entry point."""
    raise SystemExit(main())
