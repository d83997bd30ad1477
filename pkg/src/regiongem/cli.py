"""Command-line entry point: index, query, evaluate, masks, serve."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from regiongem import _kernels
from regiongem.errors import RegionGemError
from regiongem.evaluation import (
    evaluate,
    format_comparison,
    load_external_results,
    render_contact_sheet,
    write_report,
)
from regiongem.features import BinConfig, describe
from regiongem.imaging import decode_image, downscale_max_dim
from regiongem.index import build_index, load_index, save_index, write_skip_report
from regiongem.ingest import (
    Manifest,
    scan_class_folders,
    scan_csv_metadata,
    split_manifest,
)
from regiongem.regions import REGION_NAMES, build_masks, make_region_spec
from regiongem.similarity import rank

# One color per region in canonical order, for the masks subcommand.
_MASK_COLORS = (
    (214, 69, 65),
    (65, 131, 215),
    (246, 195, 59),
    (46, 160, 67),
    (142, 68, 173),
)


def _parse_bins(text: str) -> BinConfig:
    try:
        hue, sat, val = (int(p) for p in text.split(","))
        return BinConfig(hue_bins=hue, sat_bins=sat, val_bins=val)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"bins must be three comma-separated positive integers, got {text!r}"
        ) from exc


def _parse_filter(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"filter must look like column=value, got {text!r}")
    key, value = text.split("=", 1)
    return key, value


def _default_jobs() -> int | None:
    env = os.environ.get("REGIONGEM_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return None  # executor default: logical CPU count


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--class-folders", metavar="DIR", help="root with one folder per class")
    src.add_argument("--csv", metavar="FILE", help="id-keyed CSV metadata file")
    p.add_argument("--images", metavar="DIR", help="image directory for --csv mode")
    p.add_argument(
        "--filter",
        type=_parse_filter,
        action="append",
        default=[],
        metavar="COL=VALUE",
        help="keep CSV rows where COL equals VALUE (repeatable)",
    )
    p.add_argument("--label-column", default="articleType", help="CSV class label column")
    p.add_argument("--dataset-name", default=None)


def _add_extract_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bins", type=_parse_bins, default=BinConfig(), metavar="H,S,V")
    p.add_argument(
        "--downscale",
        type=int,
        default=0,
        metavar="PX",
        help="cap the longest image side at PX during extraction (0 = off)",
    )
    p.add_argument("--jobs", type=int, default=_default_jobs(), metavar="N")


def _scan(args) -> Manifest:
    if args.class_folders:
        return scan_class_folders(args.class_folders, args.dataset_name)
    if not args.images:
        raise RegionGemError("--csv mode requires --images")
    return scan_csv_metadata(
        args.csv,
        args.images,
        row_filter=dict(args.filter) if args.filter else None,
        label_column=args.label_column,
        dataset_name=args.dataset_name,
    )


def _provenance(args, **extra) -> str:
    bits = []
    if hasattr(args, "bins"):
        b = args.bins
        bits.append(f"bins={b.hue_bins}x{b.sat_bins}x{b.val_bins}")
    if hasattr(args, "downscale") and args.downscale:
        bits.append(f"downscale={args.downscale}")
    bits += [f"{k}={v}" for k, v in extra.items()]
    bits.append(f"backend={_kernels.BACKEND_NAME}")
    return "# " + " ".join(bits)


def cmd_index(args) -> int:
    manifest = _scan(args)
    print(_provenance(args, dataset=manifest.dataset_name))
    if manifest.skipped:
        print(f"csv rows without images: {len(manifest.skipped)}", file=sys.stderr)
    index, skipped = build_index(
        manifest, args.bins, downscale=args.downscale, jobs=args.jobs
    )
    save_index(index, args.out)
    print(f"indexed {len(index)} images, {len(index.class_labels)} classes")
    if skipped:
        report_path = args.skip_report or f"{args.out}.skips.jsonl"
        write_skip_report(skipped, report_path)
        print(f"skipped {len(skipped)} images; report: {report_path}")
    return 0


def cmd_query(args) -> int:
    index = load_index(args.index)
    with open(args.image, "rb") as fh:
        img = decode_image(fh.read())
    if index.downscale:
        img = downscale_max_dim(img, index.downscale)
    feature = describe(img, index.config)
    result = rank(feature, index, args.k, query_id=args.image)
    print(_provenance(args, k=args.k, index_size=len(index)))
    for pos, hit in enumerate(result.hits, start=1):
        print(f"{pos}\t{hit.image_id}\t{hit.distance:.6f}\t{hit.class_label}")
    if args.sheet:
        render_contact_sheet(
            args.image, result, index, args.sheet, query_label=args.label
        )
        print(f"contact sheet: {args.sheet}")
    return 0


def cmd_evaluate(args) -> int:
    manifest = _scan(args)
    split = split_manifest(manifest, ratio=args.ratio, seed=args.seed)
    train = manifest.subset(split.train_ids, "train")
    test = manifest.subset(split.test_ids, "test")
    print(
        _provenance(
            args,
            dataset=manifest.dataset_name,
            seed=args.seed,
            ratio=args.ratio,
            k_max=args.k_max,
            train=len(train),
            test=len(test),
        )
    )
    index, skipped = build_index(
        train, args.bins, downscale=args.downscale, jobs=args.jobs
    )
    if skipped:
        print(f"skipped {len(skipped)} train images", file=sys.stderr)
    report = evaluate(
        index,
        test,
        k_max=args.k_max,
        seed=args.seed,
        ratio=args.ratio,
        jobs=args.jobs,
    )
    for k in report.k_values:
        print(f"top {k}: {report.accuracies[k] * 100:.2f}%")
    if args.report:
        write_report(report, args.report)
        print(f"report: {args.report}")
    if args.external:
        print(format_comparison(report, load_external_results(args.external)))
    return 0


def cmd_masks(args) -> int:
    spec = make_region_spec(args.width, args.height)
    masks = build_masks(spec)
    canvas = np.zeros((args.height, args.width, 3), dtype=np.uint8)
    for mask, color in zip(masks.masks, _MASK_COLORS):
        canvas[mask] = color
    Image.fromarray(canvas).save(args.out, format="PNG")
    print(
        f"masks {args.width}x{args.height} center=({spec.cx},{spec.cy}) "
        f"axes=({spec.axes_x},{spec.axes_y}) -> {args.out}"
    )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from regiongem.service import ServiceConfig, create_app

    config = ServiceConfig(
        index_path=args.index,
        max_upload_bytes=args.max_upload,
        default_k=args.default_k,
        cors_origins=tuple(args.cors or ()),
        thumb_cache_dir=args.thumb_cache,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regiongem",
        description="Region-masked HSV histogram image search engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="extract features for a dataset and save an index")
    _add_dataset_args(p)
    _add_extract_args(p)
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--skip-report", default=None, metavar="FILE")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="rank index entries against one image")
    p.add_argument("--index", required=True, metavar="FILE")
    p.add_argument("image", metavar="IMAGE")
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--sheet", default=None, metavar="OUT.png", help="render a contact sheet")
    p.add_argument("--label", default=None, help="query class label for sheet coloring")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("evaluate", help="split a dataset, index train, score test")
    _add_dataset_args(p)
    _add_extract_args(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--ratio", type=float, default=0.9)
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--report", default=None, metavar="FILE")
    p.add_argument("--external", default=None, metavar="CSV", help="method,k,accuracy rows")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("masks", help="write a five-color PNG of the region geometry")
    p.add_argument("width", type=int)
    p.add_argument("height", type=int)
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_masks)

    p = sub.add_parser("serve", help="run the HTTP query service")
    p.add_argument("--index", required=True, metavar="FILE")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--max-upload", type=int, default=8 * 1024 * 1024)
    p.add_argument("--default-k", type=int, default=20)
    p.add_argument("--cors", nargs="*", default=None, metavar="ORIGIN")
    p.add_argument("--thumb-cache", default=None, metavar="DIR")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RegionGemError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
