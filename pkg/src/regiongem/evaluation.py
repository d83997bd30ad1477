"""Top-k retrieval accuracy harness and result rendering.

A query "hits" at k when any of its k nearest indexed images shares the
query's class label. The report carries one outcome per query so aggregate
numbers stay auditable, plus the seed/ratio provenance of the split.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from PIL import Image, ImageOps

from regiongem.errors import EmptyQuerySet, RegionGemError
from regiongem.features import describe
from regiongem.imaging import RgbImage, decode_image, downscale_max_dim
from regiongem.index import FeatureIndex, SkippedImage
from regiongem.ingest import Manifest
from regiongem.similarity import RankedResult, rank

DEFAULT_K_VALUES = (1, 5, 10, 15, 20)


@dataclass(frozen=True)
class QueryOutcome:
    query_id: str
    class_label: str
    hit_rank: int | None  # 1-based rank of the first same-class hit


@dataclass
class EvalReport:
    dataset_name: str
    seed: int
    ratio: float
    k_values: list[int]
    accuracies: dict[int, float]
    per_query: list[QueryOutcome]
    wall_time: float
    index_size: int
    label_mismatches: list[str] = field(default_factory=list)
    skipped: list[SkippedImage] = field(default_factory=list)


def _query_features(record, index: FeatureIndex):
    with open(record.path, "rb") as fh:
        img = decode_image(fh.read())
    if index.downscale:
        img = downscale_max_dim(img, index.downscale)
    return describe(img, index.config)


def evaluate(
    index: FeatureIndex,
    queries: Manifest,
    k_max: int = 20,
    *,
    k_values: tuple[int, ...] = DEFAULT_K_VALUES,
    seed: int = 42,
    ratio: float = 0.9,
    jobs: int | None = None,
) -> EvalReport:
    """Rank every query against the index and tabulate top-k accuracy.

    Queries whose class label is absent from the index are reported and
    counted as misses at every k. Queries that fail to decode are skipped
    and reported; they do not enter the accuracy denominator.
    """
    if not queries.records:
        raise EmptyQuerySet(f"no query records in {queries.dataset_name!r}")
    ks = sorted(k for k in k_values if k <= k_max)
    if not ks or ks[-1] != k_max:
        ks.append(k_max)
    started = time.perf_counter()

    index_labels = index.class_labels

    def run_one(record):
        try:
            feature = _query_features(record, index)
        except (RegionGemError, OSError) as exc:
            return SkippedImage(record.path, type(exc).__name__, str(exc))
        result = rank(feature, index, k_max, query_id=record.image_id)
        hit_rank = next(
            (
                pos
                for pos, hit in enumerate(result.hits, start=1)
                if hit.class_label == record.class_label
            ),
            None,
        )
        return QueryOutcome(record.image_id, record.class_label, hit_rank)

    workers = jobs or os.cpu_count() or 1
    if workers > 1 and len(queries.records) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, queries.records))
    else:
        results = [run_one(r) for r in queries.records]

    outcomes = [r for r in results if isinstance(r, QueryOutcome)]
    skipped = [r for r in results if isinstance(r, SkippedImage)]
    if not outcomes:
        raise EmptyQuerySet("every query image failed to decode")
    mismatches = [o.query_id for o in outcomes if o.class_label not in index_labels]

    total = len(outcomes)
    accuracies = {
        k: sum(1 for o in outcomes if o.hit_rank is not None and o.hit_rank <= k) / total
        for k in ks
    }
    return EvalReport(
        dataset_name=queries.dataset_name,
        seed=seed,
        ratio=ratio,
        k_values=ks,
        accuracies=accuracies,
        per_query=outcomes,
        wall_time=time.perf_counter() - started,
        index_size=len(index),
        label_mismatches=mismatches,
        skipped=skipped,
    )


def write_report(report: EvalReport, path: str | Path) -> None:
    """Text export: header block, one line per query, one line per k."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dataset: {report.dataset_name}\n")
        fh.write(f"seed: {report.seed}\n")
        fh.write(f"ratio: {report.ratio}\n")
        fh.write(f"index-size: {report.index_size}\n")
        fh.write(f"queries: {len(report.per_query)}\n")
        fh.write(f"label-mismatches: {len(report.label_mismatches)}\n")
        fh.write(f"skipped: {len(report.skipped)}\n")
        fh.write(f"wall-time-s: {report.wall_time:.3f}\n")
        fh.write("\n")
        for o in report.per_query:
            mark = o.hit_rank if o.hit_rank is not None else "-"
            fh.write(f"query\t{o.query_id}\t{o.class_label}\t{mark}\n")
        for k in report.k_values:
            fh.write(f"top\t{k}\t{report.accuracies[k]:.6f}\n")


def load_external_results(path: str | Path) -> dict[str, dict[int, float]]:
    """Import third-party numbers: CSV rows of method, k, accuracy."""
    out: dict[str, dict[int, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0].strip().lower() == "method":
                continue
            method, k, acc = row[0].strip(), int(row[1]), float(row[2])
            out.setdefault(method, {})[k] = acc
    return out


def format_comparison(
    report: EvalReport, external: dict[str, dict[int, float]], our_name: str = "ours"
) -> str:
    """Accuracy table of the report alongside imported external methods."""
    ks = report.k_values
    header = "method".ljust(24) + "".join(f"top-{k}".rjust(10) for k in ks)
    lines = [header]
    for method, accs in external.items():
        cells = "".join(
            f"{accs[k]:.2f}".rjust(10) if k in accs else "-".rjust(10) for k in ks
        )
        lines.append(method.ljust(24) + cells)
    ours = "".join(f"{report.accuracies[k] * 100:.2f}".rjust(10) for k in ks)
    lines.append(our_name.ljust(24) + ours)
    return "\n".join(lines)


_GREEN = (46, 160, 67)
_RED = (208, 58, 58)
_NEUTRAL = (128, 128, 128)
_QUERY_BORDER = (40, 90, 200)


def _thumb_on_border(path: str, cell: int, border: int, color) -> Image.Image:
    img = Image.open(path)
    img = ImageOps.exif_transpose(img).convert("RGB")
    img.thumbnail((cell, cell), Image.Resampling.BILINEAR)
    tile = Image.new("RGB", (cell + 2 * border, cell + 2 * border), color)
    inner = Image.new("RGB", (cell, cell), (245, 245, 245))
    inner.paste(img, ((cell - img.width) // 2, (cell - img.height) // 2))
    tile.paste(inner, (border, border))
    return tile


def render_contact_sheet(
    query_image_path: str,
    results: RankedResult,
    index: FeatureIndex,
    out_path: str | Path,
    query_label: str | None = None,
    max_results: int = 5,
    cell: int = 128,
    border: int = 5,
) -> Path:
    """Query at left, top results at right; borders green on class match,
    red on mismatch, neutral when the query label is unknown."""
    if not results.hits:
        raise ValueError("cannot render a contact sheet for empty results")
    hits = results.hits[:max_results]
    tiles = [_thumb_on_border(query_image_path, cell, border, _QUERY_BORDER)]
    for hit in hits:
        entry = index.get(hit.image_id)
        if entry is None:
            raise KeyError(f"result {hit.image_id!r} is not in the index")
        if query_label is None:
            color = _NEUTRAL
        else:
            color = _GREEN if hit.class_label == query_label else _RED
        tiles.append(_thumb_on_border(entry.source_path, cell, border, color))

    gap = border * 2
    tile_w = cell + 2 * border
    sheet = Image.new(
        "RGB", (tile_w * len(tiles) + gap, tile_w), (255, 255, 255)
    )
    x = 0
    for i, tile in enumerate(tiles):
        sheet.paste(tile, (x, 0))
        x += tile_w + (gap if i == 0 else 0)
    out_path = Path(out_path)
    sheet.save(out_path, format="PNG")
    return out_path
