"""Dataset ingestion: folder/CSV scanning into manifests, and train/test splits.

Two on-disk layouts are supported: one subdirectory per class with images
inside, and an id-keyed CSV metadata table (comma-separated, UTF-8, header
row) with image files named by id in a flat directory.
"""

from __future__ import annotations

import csv
import hashlib
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from regiongem.errors import (
    EmptyDataset,
    EmptyManifest,
    MalformedCsv,
    UnreadableDirectory,
)

IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png")


@dataclass(frozen=True)
class ManifestRecord:
    image_id: str
    class_label: str
    path: str


@dataclass(frozen=True)
class SkippedRow:
    """CSV row that passed the filter but had no readable image file."""

    image_id: str
    reason: str


@dataclass
class Manifest:
    dataset_name: str
    records: list[ManifestRecord]
    skipped: list[SkippedRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def class_labels(self) -> set[str]:
        return {r.class_label for r in self.records}

    def subset(self, ids: set[str] | frozenset[str], suffix: str) -> "Manifest":
        """New manifest with only the given ids, preserving record order."""
        return Manifest(
            dataset_name=f"{self.dataset_name}/{suffix}",
            records=[r for r in self.records if r.image_id in ids],
        )


@dataclass(frozen=True)
class Split:
    """Stratified train/test id partition of a manifest."""

    train_ids: frozenset[str]
    test_ids: frozenset[str]
    seed: int
    ratio: float


def scan_class_folders(root: str | Path, dataset_name: str | None = None) -> Manifest:
    """One record per image under one-subdirectory-per-class `root`.

    classLabel is the subdirectory name, imageId the posix relative path.
    Records are sorted lexicographically by path so scans reproduce across
    filesystems.
    """
    root = Path(root)
    if not root.is_dir():
        raise UnreadableDirectory(f"{root} is not a readable directory")
    records = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for img in sorted(class_dir.rglob("*")):
            if img.is_file() and img.suffix.lower() in IMAGE_EXTENSIONS:
                rel = img.relative_to(root).as_posix()
                records.append(ManifestRecord(rel, class_dir.name, str(img)))
    if not records:
        raise EmptyDataset(f"no class folders with images under {root}")
    records.sort(key=lambda r: r.path)
    return Manifest(dataset_name or root.name, records)


def scan_csv_metadata(
    csv_path: str | Path,
    image_root: str | Path,
    row_filter: Mapping[str, str] | Callable[[dict], bool] | None = None,
    label_column: str = "articleType",
    id_column: str = "id",
    dataset_name: str | None = None,
) -> Manifest:
    """Manifest from an id-keyed CSV, keeping rows that pass the filter.

    `row_filter` is either a column->value equality mapping (all must match)
    or a predicate over the row dict. Rows whose image file is absent are
    skipped and recorded on the returned manifest, not fatal.
    """
    csv_path = Path(csv_path)
    image_root = Path(image_root)
    if not image_root.is_dir():
        raise UnreadableDirectory(f"{image_root} is not a readable directory")

    if row_filter is None:
        passes = lambda row: True  # noqa: E731
    elif callable(row_filter):
        passes = row_filter
    else:
        passes = lambda row: all(row.get(k) == v for k, v in row_filter.items())  # noqa: E731

    records: list[ManifestRecord] = []
    skipped: list[SkippedRow] = []
    try:
        with open(csv_path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or id_column not in reader.fieldnames:
                raise MalformedCsv(f"{csv_path} has no {id_column!r} column")
            if label_column not in reader.fieldnames:
                raise MalformedCsv(f"{csv_path} has no {label_column!r} column")
            for row in reader:
                if None in row or row.get(id_column) is None:
                    raise MalformedCsv(f"{csv_path}: ragged row {reader.line_num}")
                if not passes(row):
                    continue
                image_id = row[id_column]
                path = _find_image(image_root, image_id)
                if path is None:
                    skipped.append(SkippedRow(image_id, "MissingImageFile"))
                    continue
                records.append(ManifestRecord(image_id, row[label_column], str(path)))
    except csv.Error as exc:
        raise MalformedCsv(f"{csv_path}: {exc}") from exc
    records.sort(key=lambda r: r.path)
    return Manifest(dataset_name or csv_path.stem, records, skipped)


def _find_image(image_root: Path, image_id: str) -> Path | None:
    for ext in IMAGE_EXTENSIONS:
        candidate = image_root / f"{image_id}{ext}"
        if candidate.is_file():
            return candidate
    return None


def _class_rng(seed: int, label: str) -> random.Random:
    # Hash-derived seed keeps shuffles stable across platforms and runs.
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def split_manifest(manifest: Manifest, ratio: float = 0.9, seed: int = 42) -> Split:
    """Deterministic stratified split.

    Per class: shuffle with an rng seeded by (seed, classLabel), send
    floor(count * ratio) records to train (at least 1 when count >= 2), the
    rest to test. Single-record classes go entirely to train.
    """
    if not manifest.records:
        raise EmptyManifest(f"manifest {manifest.dataset_name!r} has no records")
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")

    by_class: dict[str, list[str]] = {}
    for record in manifest.records:
        by_class.setdefault(record.class_label, []).append(record.image_id)

    train: set[str] = set()
    test: set[str] = set()
    for label in sorted(by_class):
        ids = sorted(by_class[label])
        _class_rng(seed, label).shuffle(ids)
        if len(ids) == 1:
            train.add(ids[0])
            continue
        n_train = max(1, int(len(ids) * ratio))
        train.update(ids[:n_train])
        test.update(ids[n_train:])
    return Split(frozenset(train), frozenset(test), seed=seed, ratio=ratio)


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    """Line-delimited export for inspection: id, label, path per line."""
    import json

    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dataset": manifest.dataset_name}) + "\n")
        for r in manifest.records:
            fh.write(
                json.dumps({"id": r.image_id, "label": r.class_label, "path": r.path})
                + "\n"
            )


def read_manifest(path: str | Path) -> Manifest:
    import json

    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        records = [
            ManifestRecord(d["id"], d["label"], d["path"])
            for d in (json.loads(line) for line in fh if line.strip())
        ]
    return Manifest(header["dataset"], records)
