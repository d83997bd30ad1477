"""regiongem: content-based image retrieval with region-masked HSV histograms.

The descriptor splits an image into four corner rectangles around a central
ellipse, histograms each region in quantized HSV space, and concatenates the
L1-normalized blocks; queries are ranked by chi-square distance over a
persisted feature index.
"""

from regiongem.features import BinConfig, FeatureVector, describe, extract_features
from regiongem.imaging import HsvImage, RgbImage, decode_image, rgb_to_hsv
from regiongem.index import FeatureIndex, IndexEntry, build_index, load_index, save_index
from regiongem.ingest import Manifest, Split, scan_class_folders, scan_csv_metadata, split_manifest
from regiongem.regions import (
    REGION_NAMES,
    RegionMaskSet,
    RegionSpec,
    build_masks,
    make_region_spec,
    region_pixel_counts,
)
from regiongem.similarity import Hit, RankedResult, chi_square, rank

__version__ = "0.1.0"

__all__ = [
    "BinConfig",
    "FeatureIndex",
    "FeatureVector",
    "HsvImage",
    "Hit",
    "IndexEntry",
    "Manifest",
    "REGION_NAMES",
    "RankedResult",
    "RegionMaskSet",
    "RegionSpec",
    "RgbImage",
    "Split",
    "build_index",
    "build_masks",
    "chi_square",
    "decode_image",
    "describe",
    "extract_features",
    "load_index",
    "make_region_spec",
    "rank",
    "region_pixel_counts",
    "rgb_to_hsv",
    "save_index",
    "scan_class_folders",
    "scan_csv_metadata",
    "split_manifest",
]
