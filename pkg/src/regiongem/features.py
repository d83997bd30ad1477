"""Region-masked HSV histogram descriptor.

For each of the five regions, pixels are quantized into a 3D hue/saturation/
value grid and counted; each region's histogram is L1-normalized and the five
blocks are concatenated in canonical region order into one feature vector
(2100 components at the default 10x14x3 bins).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from regiongem import _kernels
from regiongem.errors import DimensionMismatch, DomainError
from regiongem.imaging import HsvImage, RgbImage, rgb_to_hsv
from regiongem.regions import REGION_NAMES, RegionMaskSet, build_masks, make_region_spec


@dataclass(frozen=True)
class BinConfig:
    """Histogram bin counts per HSV channel."""

    hue_bins: int = 10
    sat_bins: int = 14
    val_bins: int = 3

    def __post_init__(self):
        if min(self.hue_bins, self.sat_bins, self.val_bins) < 1:
            raise ValueError("all bin counts must be >= 1")

    @property
    def bins_per_region(self) -> int:
        return self.hue_bins * self.sat_bins * self.val_bins

    @property
    def total_bins(self) -> int:
        return len(REGION_NAMES) * self.bins_per_region


DEFAULT_BINS = BinConfig()


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Concatenated per-region histograms, regions in REGION_NAMES order.

    Each non-empty region block sums to 1; a block for a region with zero
    pixels is all zeros.
    """

    config: BinConfig
    values: np.ndarray  # (5 * bins_per_region,) float64

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        expected = len(REGION_NAMES) * self.config.bins_per_region
        if values.shape != (expected,):
            raise DimensionMismatch(
                f"feature vector needs {expected} components, got {values.shape}"
            )
        object.__setattr__(self, "values", values)

    def region_block(self, region_index: int) -> np.ndarray:
        n = self.config.bins_per_region
        return self.values[region_index * n : (region_index + 1) * n]


def bin_index(pixel: tuple[float, float, float], config: BinConfig = DEFAULT_BINS) -> int:
    """Flat 3D bin index of one (h, s, v) pixel.

    hIdx = floor(h/360 * hueBins), sIdx = floor(s * satBins),
    vIdx = floor(v * valBins), each clamped to its top bin, flattened as
    (hIdx * satBins + sIdx) * valBins + vIdx.
    """
    h, s, v = pixel
    if not (0.0 <= h < 360.0):
        raise DomainError(f"hue {h!r} outside [0, 360)")
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"saturation {s!r} outside [0, 1]")
    if not (0.0 <= v <= 1.0):
        raise DomainError(f"value {v!r} outside [0, 1]")
    h_idx = min(int(h / 360.0 * config.hue_bins), config.hue_bins - 1)
    s_idx = min(int(s * config.sat_bins), config.sat_bins - 1)
    v_idx = min(int(v * config.val_bins), config.val_bins - 1)
    return (h_idx * config.sat_bins + s_idx) * config.val_bins + v_idx


def raw_region_counts(
    img: HsvImage, masks: RegionMaskSet, config: BinConfig = DEFAULT_BINS
) -> np.ndarray:
    """Unnormalized per-region bin counts, shape (5, bins_per_region), int64."""
    if (img.height, img.width) != (masks.height, masks.width):
        raise DimensionMismatch(
            f"image is {img.width}x{img.height} but masks are "
            f"{masks.width}x{masks.height}"
        )
    px = np.ascontiguousarray(img.pixels, dtype=np.float64)
    flat = px.reshape(-1, 3)
    return _kernels.region_histograms(
        np.ascontiguousarray(flat[:, 0]),
        np.ascontiguousarray(flat[:, 1]),
        np.ascontiguousarray(flat[:, 2]),
        np.ascontiguousarray(masks.labels.reshape(-1)),
        config.hue_bins,
        config.sat_bins,
        config.val_bins,
        len(REGION_NAMES),
    )


def extract_features(
    img: HsvImage, masks: RegionMaskSet, config: BinConfig = DEFAULT_BINS
) -> FeatureVector:
    """L1-normalize each region's counts and concatenate in canonical order."""
    counts = raw_region_counts(img, masks, config).astype(np.float64)
    totals = counts.sum(axis=1, keepdims=True)
    blocks = np.divide(counts, totals, out=np.zeros_like(counts), where=totals > 0)
    return FeatureVector(config=config, values=blocks.reshape(-1))


def describe(img: RgbImage, config: BinConfig = DEFAULT_BINS) -> FeatureVector:
    """Full descriptor pipeline for one RGB image: HSV, masks, histograms."""
    spec = make_region_spec(img.width, img.height)
    masks = build_masks(spec)
    return extract_features(rgb_to_hsv(img), masks, config)
