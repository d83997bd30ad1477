// Crop rectangle arithmetic and the canvas-based cropper.
// The service always receives a pre-cropped query, so the crop must be
// validated and applied client-side before anything leaves the browser.

export interface CropRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface SourceSize {
  width: number;
  height: number;
}

export const MIN_CROP_SIDE = 2;

/** Returns a human-readable problem, or null when the rect is usable. */
export function validateCrop(rect: CropRect, source: SourceSize): string | null {
  const { x, y, width, height } = rect;
  if (![x, y, width, height].every(Number.isFinite)) return 'crop values must be numbers';
  if (!Number.isInteger(x) || !Number.isInteger(y) || !Number.isInteger(width) || !Number.isInteger(height)) {
    return 'crop values must be whole pixels';
  }
  if (width < MIN_CROP_SIDE || height < MIN_CROP_SIDE) {
    return `crop must be at least ${MIN_CROP_SIDE}x${MIN_CROP_SIDE} pixels`;
  }
  if (x < 0 || y < 0) return 'crop starts outside the image';
  if (x + width > source.width || y + height > source.height) {
    return 'crop extends beyond the image';
  }
  return null;
}

/** Snap an arbitrary drag rectangle to a valid integer rect inside the source. */
export function normalizeDrag(
  x0: number,
  y0: number,
  x1: number,
  y1: number,
  source: SourceSize,
): CropRect {
  const clampX = (v: number) => Math.min(Math.max(Math.round(v), 0), source.width);
  const clampY = (v: number) => Math.min(Math.max(Math.round(v), 0), source.height);
  let left = clampX(Math.min(x0, x1));
  let top = clampY(Math.min(y0, y1));
  let width = clampX(Math.max(x0, x1)) - left;
  let height = clampY(Math.max(y0, y1)) - top;
  if (width < MIN_CROP_SIDE) {
    width = MIN_CROP_SIDE;
    left = Math.min(left, source.width - MIN_CROP_SIDE);
  }
  if (height < MIN_CROP_SIDE) {
    height = MIN_CROP_SIDE;
    top = Math.min(top, source.height - MIN_CROP_SIDE);
  }
  return { x: left, y: top, width, height };
}

export function fullFrame(source: SourceSize): CropRect {
  return { x: 0, y: 0, width: source.width, height: source.height };
}

/** A cropper turns (source image, rect) into the bytes sent to the service. */
export type Cropper<S> = (source: S, rect: CropRect) => Promise<Blob>;

/**
 * Browser cropper: draws the selected region onto an offscreen canvas so the
 * uploaded PNG decodes to exactly rect.width x rect.height pixels.
 */
export async function cropImageToBlob(
  image: HTMLImageElement | ImageBitmap,
  rect: CropRect,
): Promise<Blob> {
  const canvas = document.createElement('canvas');
  canvas.width = rect.width;
  canvas.height = rect.height;
  const ctx = canvas.getContext('2d');
  if (!ctx) throw new Error('canvas 2D context unavailable');
  ctx.drawImage(
    image,
    rect.x, rect.y, rect.width, rect.height,
    0, 0, rect.width, rect.height,
  );
  return new Promise<Blob>((resolve, reject) => {
    canvas.toBlob((blob) => {
      if (blob) resolve(blob);
      else reject(new Error('canvas produced no image data'));
    }, 'image/png');
  });
}
