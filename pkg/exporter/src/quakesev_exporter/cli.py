"""Command line for the exporter.

    quakesev-export export --images DIR --out DIR [--seg-checkpoint REF]
                           [--depth-model REF] [--jobs N]

Exit codes: 0 every image exported, 1 on input errors or if any image
failed (failures are still recorded in the manifest).
"""
from __future__ import annotations

import argparse
import sys

from .export import ExportError, export_batch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quakesev-export",
        description="Write quakesev-compatible mask/depth PNGs and a manifest for a folder of photos",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("export", help="export one folder of images")
    p.add_argument("--images", required=True, help="directory of input photos (png/jpg)")
    p.add_argument("--out", required=True, help="output directory for masks, depths, manifest.jsonl")
    p.add_argument("--seg-checkpoint", default="stub",
                   help="segmentation checkpoint path or hub id; 'stub' uses the color-matching test backend")
    p.add_argument("--depth-model", default="stub",
                   help="depth checkpoint path or hub id; 'stub' uses the luminance test backend")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads (default 1)")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        manifest, ok, failed = export_batch(
            args.images, args.out,
            seg_ref=args.seg_checkpoint, depth_ref=args.depth_model, jobs=args.jobs,
        )
    except (ExportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"exported {ok} image(s), {failed} failure(s) -> {manifest}")
    return 1 if failed else 0


def run() -> None:
    raise SystemExit(main())
