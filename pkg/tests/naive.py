"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: per-pixel Python loops and stdlib
conversions. No code is shared with the production kernels, so agreement
between the two is evidence, not tautology.
"""

from __future__ import annotations

import colorsys
import math


def hsv_oracle(r: int, g: int, b: int) -> tuple[float, float, float]:
    """stdlib hexcone conversion, rescaled to h in degrees."""
    h, s, v = colorsys.rgb_to_hsv(r / 255.0, g / 255.0, b / 255.0)
    return h * 360.0, s, v


def hsv_to_rgb_oracle(h: float, s: float, v: float) -> tuple[float, float, float]:
    """Inverse hexcone via stdlib; returns channels in [0, 255] floats."""
    r, g, b = colorsys.hsv_to_rgb(h / 360.0, s, v)
    return r * 255.0, g * 255.0, b * 255.0


def bin_index_oracle(
    h: float, s: float, v: float, hue_bins: int, sat_bins: int, val_bins: int
) -> int:
    hi = min(int(math.floor(h / 360.0 * hue_bins)), hue_bins - 1)
    si = min(int(math.floor(s * sat_bins)), sat_bins - 1)
    vi = min(int(math.floor(v * val_bins)), val_bins - 1)
    return (hi * sat_bins + si) * val_bins + vi


def region_counts_oracle(hsv_pixels, labels, hue_bins, sat_bins, val_bins, n_regions=5):
    """Double-loop histogram accumulation.

    hsv_pixels: nested lists [y][x] -> (h, s, v); labels: nested [y][x] -> int.
    Returns a list of n_regions count lists.
    """
    per_region = hue_bins * sat_bins * val_bins
    counts = [[0] * per_region for _ in range(n_regions)]
    for row, label_row in zip(hsv_pixels, labels):
        for (h, s, v), label in zip(row, label_row):
            counts[label][bin_index_oracle(h, s, v, hue_bins, sat_bins, val_bins)] += 1
    return counts


def ellipse_oracle(width, height, cx, cy, ax, ay):
    """Per-pixel evaluation of ((x-cx)/ax)^2 + ((y-cy)/ay)^2 <= 1.

    Cross-multiplied to integers so evaluation is exact; empty when either
    semi-axis is zero. Returns nested bool lists [y][x].
    """
    if ax == 0 or ay == 0:
        return [[False] * width for _ in range(height)]
    ax2 = ax * ax
    ay2 = ay * ay
    bound = ax2 * ay2
    rows = []
    for y in range(height):
        part = (y - cy) * (y - cy) * ax2
        rows.append([(x - cx) * (x - cx) * ay2 + part <= bound for x in range(width)])
    return rows


def chi_square_oracle(xs, ys) -> float:
    total = 0.0
    for a, b in zip(xs, ys):
        d = a + b
        if d > 0.0:
            diff = a - b
            total += diff * diff / d
    return 0.5 * total


def rank_oracle(query_values, entries) -> list[str]:
    """Full naive sort; entries are (image_id, values) pairs.

    Returns ids ordered by ascending distance, ties by ascending id.
    """
    scored = [(chi_square_oracle(query_values, vals), iid) for iid, vals in entries]
    scored.sort()
    return [iid for _, iid in scored]
