"""Vectorized numpy implementations of the hot kernels.

Pure fallback for environments where the compiled extension is unavailable.
The binning expressions must stay operation-for-operation identical to the
compiled kernels so raw counts match bit for bit across backends.
"""

from __future__ import annotations

import numpy as np


def region_histograms(
    h: np.ndarray,
    s: np.ndarray,
    v: np.ndarray,
    labels: np.ndarray,
    hue_bins: int,
    sat_bins: int,
    val_bins: int,
    n_regions: int = 5,
) -> np.ndarray:
    """Raw per-region bin counts, shape (n_regions, hue*sat*val), int64.

    Inputs are flat float64 channel arrays plus a flat uint8 region label
    array of the same length. Bin index per pixel: floor(h/360*hueBins),
    floor(s*satBins), floor(v*valBins), each clamped to its top bin.
    """
    h_idx = np.floor(h / 360.0 * hue_bins).astype(np.int64)
    s_idx = np.floor(s * sat_bins).astype(np.int64)
    v_idx = np.floor(v * val_bins).astype(np.int64)
    np.clip(h_idx, 0, hue_bins - 1, out=h_idx)
    np.clip(s_idx, 0, sat_bins - 1, out=s_idx)
    np.clip(v_idx, 0, val_bins - 1, out=v_idx)
    bins_per_region = hue_bins * sat_bins * val_bins
    flat = (h_idx * sat_bins + s_idx) * val_bins + v_idx
    combined = labels.astype(np.int64) * bins_per_region + flat
    counts = np.bincount(combined, minlength=n_regions * bins_per_region)
    return counts.reshape(n_regions, bins_per_region)


def chi_square_batch(query: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """0.5 * sum((x-y)^2 / (x+y)) per matrix row; 0/0 terms contribute 0."""
    diff = matrix - query
    denom = matrix + query
    np.square(diff, out=diff)
    terms = np.divide(diff, denom, out=np.zeros_like(diff), where=denom > 0)
    return 0.5 * terms.sum(axis=1)
