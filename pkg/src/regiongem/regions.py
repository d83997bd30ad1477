"""Five-region geometry: four corner rectangles around a central ellipse.

The five masks partition the pixel grid: corner rectangles are half-open
quadrants split at the center column/row, each minus the ellipse pixels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from regiongem.errors import DegenerateImage
from regiongem.imaging import MIN_DIMENSION

# Canonical region order, frozen into feature vectors and the index format.
REGION_NAMES = ("rTl", "rTr", "rBr", "rBl", "ellipseC")


@dataclass(frozen=True)
class RegionSpec:
    """Geometry parameters derived from an image's width and height."""

    width: int
    height: int
    cx: int
    cy: int
    axes_x: int
    axes_y: int


@dataclass(frozen=True, eq=False)
class RegionMaskSet:
    """Five boolean rasters in REGION_NAMES order plus a label raster.

    `labels` maps each pixel to the position of its region in REGION_NAMES;
    it is well defined because the masks partition the grid.
    """

    spec: RegionSpec
    masks: tuple[np.ndarray, ...]
    labels: np.ndarray

    @property
    def width(self) -> int:
        return self.spec.width

    @property
    def height(self) -> int:
        return self.spec.height


def make_region_spec(width: int, height: int) -> RegionSpec:
    """Compute center and ellipse semi-axes for a width x height grid.

    The semi-axes floor 0.7*dim through a float before halving: 290 * 0.7 is
    202.99999999999997 in IEEE doubles, so int(290 * 0.7) is 202, not 203.
    """
    if width < MIN_DIMENSION or height < MIN_DIMENSION:
        raise DegenerateImage(f"{width}x{height} grid cannot host five regions")
    return RegionSpec(
        width=width,
        height=height,
        cx=width // 2,
        cy=height // 2,
        axes_x=int(width * 0.7) // 2,
        axes_y=int(height * 0.7) // 2,
    )


def build_masks(spec: RegionSpec) -> RegionMaskSet:
    """Rasterize the five regions for a RegionSpec.

    The ellipse holds pixels with ((x-cx)/ax)^2 + ((y-cy)/ay)^2 <= 1,
    evaluated exactly in integer arithmetic, and is empty when either
    semi-axis is 0. Corner rectangles exclude ellipse pixels.
    """
    w, h = spec.width, spec.height
    cx, cy, ax, ay = spec.cx, spec.cy, spec.axes_x, spec.axes_y

    xs = np.arange(w, dtype=np.int64)[None, :]
    ys = np.arange(h, dtype=np.int64)[:, None]
    if ax > 0 and ay > 0:
        # Cross-multiplied form of the inequality; exact for int64 sizes here.
        ellipse = (xs - cx) ** 2 * (ay * ay) + (ys - cy) ** 2 * (ax * ax) <= (
            ax * ax * ay * ay
        )
    else:
        ellipse = np.zeros((h, w), dtype=bool)

    left = xs < cx
    top = ys < cy
    not_e = ~ellipse
    masks = (
        (left & top) & not_e,
        (~left & top) & not_e,
        (~left & ~top) & not_e,
        (left & ~top) & not_e,
        ellipse,
    )
    labels = np.zeros((h, w), dtype=np.uint8)
    for i, mask in enumerate(masks):
        labels[mask] = i
    return RegionMaskSet(spec=spec, masks=masks, labels=labels)


def region_pixel_counts(masks: RegionMaskSet) -> list[int]:
    """True-pixel count per mask in canonical order; sums to width * height."""
    return [int(m.sum()) for m in masks.masks]
