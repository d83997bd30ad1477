// Query session state machine: crop, submit, adjust k, keep history.
// Pure of DOM concerns; the cropper and API client are injected so the same
// logic runs in the browser and in node-based tests.

import { ApiError, ResultCard, SearchApi } from './api.js';
import { CropRect, Cropper, SourceSize, fullFrame, validateCrop } from './crop.js';

export interface HistoryEntry {
  crop: CropRect;
  topResultId: string | null;
}

export const MIN_K = 1;
export const MAX_K = 100;

export class QuerySession<S extends SourceSize> {
  source: S | null = null;
  crop: CropRect | null = null;
  k = 5;
  results: ResultCard[] = [];
  history: HistoryEntry[] = [];
  /** Inline error from validation or the service; never clears results. */
  error: string | null = null;
  /** Set when a re-query with larger k changed the established prefix. */
  prefixWarning: string | null = null;

  private inflight: AbortController | null = null;
  private requestSerial = 0;

  constructor(
    private readonly api: SearchApi,
    private readonly cropper: Cropper<S>,
  ) {}

  setSource(source: S): void {
    this.source = source;
    this.crop = fullFrame(source);
    this.error = null;
    this.prefixWarning = null;
  }

  setCrop(rect: CropRect): void {
    this.crop = rect;
  }

  setK(k: number): string | null {
    if (!Number.isInteger(k) || k < MIN_K || k > MAX_K) {
      this.error = `k must be an integer in [${MIN_K}, ${MAX_K}]`;
      return this.error;
    }
    this.k = k;
    return null;
  }

  get busy(): boolean {
    return this.inflight !== null;
  }

  /**
   * Crop locally and query the service. Validation failures never produce a
   * request; service errors surface in `error` with prior results retained.
   * A submission while one is pending cancels the pending one.
   */
  async submit(): Promise<ResultCard[] | null> {
    if (!this.source || !this.crop) {
      this.error = 'load an image first';
      return null;
    }
    const problem = validateCrop(this.crop, this.source);
    if (problem) {
      this.error = problem;
      return null;
    }
    this.error = null;

    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const serial = ++this.requestSerial;

    try {
      const blob = await this.cropper(this.source, this.crop);
      const response = await this.api.query(blob, this.k, controller.signal);
      if (serial !== this.requestSerial) return null; // superseded
      this.results = response.results; // displayed order == response order
      this.history.push({
        crop: { ...this.crop },
        topResultId: response.results[0]?.imageId ?? null,
      });
      return this.results;
    } catch (err) {
      if (isAbort(err)) return null;
      if (serial === this.requestSerial) {
        this.error = err instanceof ApiError ? `service: ${err.message}` : String(err);
      }
      return null;
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  /**
   * Re-query with a new k. Ranking is deterministic server-side, so the old
   * results should be a prefix of (or extend) the new ones; a violation is
   * surfaced as a debug warning but the response order is still displayed.
   */
  async adjustK(k: number): Promise<ResultCard[] | null> {
    if (this.setK(k) !== null) return null;
    const previous = this.results;
    const updated = await this.submit();
    if (updated) {
      this.prefixWarning = null;
      const overlap = Math.min(previous.length, updated.length);
      for (let i = 0; i < overlap; i++) {
        if (previous[i].imageId !== updated[i].imageId) {
          this.prefixWarning =
            `result ${i + 1} changed from ${previous[i].imageId} to ` +
            `${updated[i].imageId} after k=${k}`;
          break;
        }
      }
    }
    return updated;
  }
}

function isAbort(err: unknown): boolean {
  return err instanceof Error && err.name === 'AbortError';
}
