"""Image decoding and RGB to HSV conversion.

HSV convention used throughout the engine: h in [0, 360) degrees, s and v in
[0, 1]. Achromatic pixels get h = 0 and s = 0 so histograms stay reproducible.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageOps, UnidentifiedImageError

from regiongem.errors import CorruptImage, DegenerateImage, UnsupportedFormat

# Anything smaller cannot host four corner regions.
MIN_DIMENSION = 2


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit RGB raster, pixels shaped (height, width, 3), dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        px = self.pixels
        if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
            raise ValueError("pixels must be an (h, w, 3) uint8 array")
        if px.shape[0] < MIN_DIMENSION or px.shape[1] < MIN_DIMENSION:
            raise DegenerateImage(
                f"{px.shape[1]}x{px.shape[0]} image is too small (need >= 2x2)"
            )

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True, eq=False)
class HsvImage:
    """HSV raster, pixels shaped (height, width, 3), dtype float64.

    Channel 0 is hue in [0, 360), channels 1 and 2 are saturation and value
    in [0, 1].
    """

    pixels: np.ndarray

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def decode_image(data: bytes) -> RgbImage:
    """Decode PNG or JPEG bytes into an RgbImage.

    Alpha channels are discarded (not composited), grayscale sources are
    replicated across r, g, b, and the EXIF orientation tag is applied when
    the decoder exposes one.
    """
    try:
        img = Image.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(str(exc)) from exc
    try:
        img = ImageOps.exif_transpose(img)
        if img.mode != "RGB":
            img = img.convert("RGB")
        img.load()
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptImage(str(exc)) from exc
    arr = np.asarray(img, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[0] < MIN_DIMENSION or arr.shape[1] < MIN_DIMENSION:
        raise DegenerateImage(f"decoded image is {img.width}x{img.height}")
    return RgbImage(arr)


def rgb_to_hsv(img: RgbImage) -> HsvImage:
    """Convert per pixel with the standard hexcone model.

    v = max/255, s = (max - min)/max (0 for black), h = 60 degrees times the
    sector offset, wrapped into [0, 360).
    """
    rgb = img.pixels.astype(np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    cmax = rgb.max(axis=-1)
    cmin = rgb.min(axis=-1)
    delta = cmax - cmin

    v = cmax / 255.0
    # cmax is integral, so max(cmax, 1) == cmax whenever the pixel is not black.
    s = delta / np.maximum(cmax, 1.0)

    chromatic = delta > 0
    rmax = chromatic & (cmax == r)
    gmax = chromatic & ~rmax & (cmax == g)
    bmax = chromatic & ~rmax & ~gmax
    safe = np.where(chromatic, delta, 1.0)
    h = np.zeros_like(cmax)
    h = np.where(rmax, ((g - b) / safe) % 6.0, h)
    h = np.where(gmax, (b - r) / safe + 2.0, h)
    h = np.where(bmax, (r - g) / safe + 4.0, h)
    h = h * 60.0
    return HsvImage(np.stack([h, s, v], axis=-1))


def downscale_max_dim(img: RgbImage, limit: int) -> RgbImage:
    """Shrink so the longest side is at most `limit` px, preserving aspect.

    Images already within the limit are returned unchanged. Both output sides
    are kept >= 2 so extreme aspect ratios stay valid inputs.
    """
    if limit < MIN_DIMENSION:
        raise ValueError(f"downscale limit must be >= {MIN_DIMENSION}")
    side = max(img.width, img.height)
    if side <= limit:
        return img
    scale = limit / side
    new_w = max(MIN_DIMENSION, round(img.width * scale))
    new_h = max(MIN_DIMENSION, round(img.height * scale))
    resized = Image.fromarray(img.pixels).resize(
        (new_w, new_h), Image.Resampling.BILINEAR
    )
    return RgbImage(np.asarray(resized, dtype=np.uint8))
