"""Feature index: build over a manifest, binary save/load with integrity digest.

On-disk layout (little-endian throughout): magic, format version, bin counts,
ingestion downscale, region-name list, entry count, then one record per entry
(length-prefixed id/label/path plus the raw float64 feature values), closed by
a sha256 digest over everything before it.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import struct
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from regiongem.errors import (
    AllImagesFailed,
    ChecksumMismatch,
    EmptyManifest,
    RegionGemError,
    VersionMismatch,
)
from regiongem.features import BinConfig, FeatureVector, describe
from regiongem.imaging import decode_image, downscale_max_dim
from regiongem.ingest import Manifest
from regiongem.regions import REGION_NAMES

MAGIC = b"RGEMIDX\n"
FORMAT_VERSION = 1
_DIGEST_SIZE = 32


@dataclass(frozen=True)
class IndexEntry:
    image_id: str
    class_label: str
    source_path: str
    feature: FeatureVector


@dataclass(frozen=True)
class SkippedImage:
    """One non-fatal ingestion failure: which file and what kind of error."""

    path: str
    error_kind: str
    detail: str


@dataclass(eq=False)
class FeatureIndex:
    config: BinConfig
    entries: list[IndexEntry]
    format_version: int = FORMAT_VERSION
    region_order: tuple[str, ...] = REGION_NAMES
    downscale: int = 0  # max-dimension cap applied at ingestion; 0 = off
    _matrix: np.ndarray | None = field(default=None, repr=False, compare=False)
    _by_id: dict[str, IndexEntry] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        ids = [e.image_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("imageIds must be unique within an index")

    def __len__(self) -> int:
        return len(self.entries)

    def feature_matrix(self) -> np.ndarray:
        """Entry features stacked row-wise, cached after first use."""
        if self._matrix is None:
            self._matrix = np.ascontiguousarray(
                np.stack([e.feature.values for e in self.entries])
            )
        return self._matrix

    def get(self, image_id: str) -> IndexEntry | None:
        if self._by_id is None:
            self._by_id = {e.image_id: e for e in self.entries}
        return self._by_id.get(image_id)

    @property
    def class_labels(self) -> set[str]:
        return {e.class_label for e in self.entries}


def _extract_entry(
    record, config: BinConfig, downscale: int
) -> IndexEntry | SkippedImage:
    try:
        with open(record.path, "rb") as fh:
            data = fh.read()
        img = decode_image(data)
        if downscale:
            img = downscale_max_dim(img, downscale)
        feature = describe(img, config)
    except (RegionGemError, OSError) as exc:
        return SkippedImage(record.path, type(exc).__name__, str(exc))
    return IndexEntry(record.image_id, record.class_label, record.path, feature)


def build_index(
    manifest: Manifest,
    config: BinConfig = BinConfig(),
    *,
    downscale: int = 0,
    jobs: int | None = None,
) -> tuple[FeatureIndex, list[SkippedImage]]:
    """Extract features for every manifest record, in manifest order.

    Images that fail to decode are skipped and reported, not fatal. Raises
    EmptyManifest for an empty manifest and AllImagesFailed when nothing
    could be extracted.
    """
    if not manifest.records:
        raise EmptyManifest(f"manifest {manifest.dataset_name!r} has no records")
    workers = jobs or os.cpu_count() or 1
    if workers > 1 and len(manifest.records) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda r: _extract_entry(r, config, downscale), manifest.records)
            )
    else:
        results = [_extract_entry(r, config, downscale) for r in manifest.records]

    entries = [r for r in results if isinstance(r, IndexEntry)]
    skipped = [r for r in results if isinstance(r, SkippedImage)]
    if not entries:
        raise AllImagesFailed(
            f"all {len(manifest.records)} images in {manifest.dataset_name!r} failed"
        )
    return FeatureIndex(config=config, entries=entries, downscale=downscale), skipped


def _pack_str(out: io.BytesIO, text: str) -> None:
    raw = text.encode("utf-8")
    out.write(struct.pack("<I", len(raw)))
    out.write(raw)


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise ChecksumMismatch("index payload ended early")
        out = self.buf[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def text(self) -> str:
        return self.take(self.u32()).decode("utf-8")


def save_index(index: FeatureIndex, path: str | os.PathLike) -> None:
    """Serialize to the binary container; load_index(save_index(x)) == x."""
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(
        struct.pack(
            "<IIIII",
            index.format_version,
            index.config.hue_bins,
            index.config.sat_bins,
            index.config.val_bins,
            index.downscale,
        )
    )
    out.write(struct.pack("<B", len(index.region_order)))
    for name in index.region_order:
        raw = name.encode("ascii")
        out.write(struct.pack("<B", len(raw)))
        out.write(raw)
    out.write(struct.pack("<I", len(index.entries)))
    expected = index.config.total_bins
    for entry in index.entries:
        _pack_str(out, entry.image_id)
        _pack_str(out, entry.class_label)
        _pack_str(out, entry.source_path)
        values = entry.feature.values
        if values.shape != (expected,):
            raise ValueError(
                f"entry {entry.image_id!r} has {values.shape} values, expected {expected}"
            )
        out.write(np.ascontiguousarray(values, dtype="<f8").tobytes())
    payload = out.getvalue()
    digest = hashlib.sha256(payload).digest()
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(digest)


def load_index(path: str | os.PathLike) -> FeatureIndex:
    """Read and verify an index file written by save_index."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + _DIGEST_SIZE or not blob.startswith(MAGIC):
        raise ChecksumMismatch(f"{path} is not a regiongem index")
    payload, digest = blob[:-_DIGEST_SIZE], blob[-_DIGEST_SIZE:]
    if hashlib.sha256(payload).digest() != digest:
        raise ChecksumMismatch(f"{path} failed its integrity check")

    r = _Reader(payload)
    r.take(len(MAGIC))
    version, hue, sat, val, downscale = struct.unpack("<IIIII", r.take(20))
    if version > FORMAT_VERSION:
        raise VersionMismatch(
            f"{path} uses format version {version}; this reader supports "
            f"up to {FORMAT_VERSION}"
        )
    (n_regions,) = struct.unpack("<B", r.take(1))
    region_order = tuple(
        r.take(struct.unpack("<B", r.take(1))[0]).decode("ascii")
        for _ in range(n_regions)
    )
    config = BinConfig(hue_bins=hue, sat_bins=sat, val_bins=val)
    entry_count = r.u32()
    n_values = n_regions * config.bins_per_region
    entries = []
    for _ in range(entry_count):
        image_id = r.text()
        label = r.text()
        source = r.text()
        values = np.frombuffer(r.take(n_values * 8), dtype="<f8").astype(np.float64)
        entries.append(
            IndexEntry(image_id, label, source, FeatureVector(config, values))
        )
    return FeatureIndex(
        config=config,
        entries=entries,
        format_version=version,
        region_order=region_order,
        downscale=downscale,
    )


def write_skip_report(skipped: list[SkippedImage], path: str | os.PathLike) -> None:
    """Line-delimited JSON, one record per failed image."""
    with open(path, "w", encoding="utf-8") as fh:
        for s in skipped:
            fh.write(
                json.dumps({"path": s.path, "error": s.error_kind, "detail": s.detail})
                + "\n"
            )
