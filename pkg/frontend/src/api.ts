// Typed client for the regiongem HTTP service. The service owns all ranking;
// this client never reorders, filters, or rescores what it returns.

export interface ResultCard {
  imageId: string;
  distance: number;
  classLabel: string;
  thumbnailUrl: string;
}

export interface QueryEcho {
  width: number;
  height: number;
  extractionMs: number;
}

export interface QueryResponse {
  query: QueryEcho;
  results: ResultCard[];
}

export interface HealthInfo {
  status: string;
  indexSize: number;
  binConfig: { hueBins: number; satBins: number; valBins: number };
  formatVersion: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function errorDetail(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { detail?: string };
    if (body && typeof body.detail === 'string') return body.detail;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `${resp.status} ${resp.statusText}`;
}

export class SearchApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/+$/, '') + path;
  }

  async query(image: Blob, k: number, signal?: AbortSignal): Promise<QueryResponse> {
    const form = new FormData();
    form.append('image', image, 'query.png');
    const resp = await this.fetchFn(this.url(`/api/query?k=${k}`), {
      method: 'POST',
      body: form,
      signal,
    });
    if (!resp.ok) throw new ApiError(resp.status, await errorDetail(resp));
    return (await resp.json()) as QueryResponse;
  }

  async health(): Promise<HealthInfo> {
    const resp = await this.fetchFn(this.url('/api/health'));
    if (!resp.ok) throw new ApiError(resp.status, await errorDetail(resp));
    return (await resp.json()) as HealthInfo;
  }

  // Thumbnail URLs in responses are service-relative; make them absolute.
  resolveThumb(thumbnailUrl: string): string {
    if (/^https?:/.test(thumbnailUrl)) return thumbnailUrl;
    return this.url(thumbnailUrl);
  }
}
