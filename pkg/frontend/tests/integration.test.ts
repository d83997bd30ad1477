// End-to-end session against the real service: build a 10-item fixture
// index, start the server, then upload / crop / submit / adjust k through
// the same session code the browser runs. Requires the Python package to be
// installed in the environment (see frontend/README.md).

import { ChildProcess, spawn } from 'node:child_process';
import { mkdtemp, readFile } from 'node:fs/promises';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { SearchApi } from '../src/api.js';
import { CropRect } from '../src/crop.js';
import { QuerySession } from '../src/session.js';

const PORT = 8731;
const BASE = `http://127.0.0.1:${PORT}`;
const QUERY_CROP: CropRect = { x: 24, y: 24, width: 48, height: 48 };

let server: ChildProcess | null = null;
let fixtureDir = '';

function run(cmd: string, args: string[]): Promise<void> {
  return new Promise((resolve, reject) => {
    const child = spawn(cmd, args, { stdio: 'inherit' });
    child.on('exit', (code) =>
      code === 0 ? resolve() : reject(new Error(`${cmd} exited with ${code}`)),
    );
    child.on('error', reject);
  });
}

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/health`);
      if (resp.ok) return;
    } catch {
      // not listening yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error('service did not become healthy in time');
}

function pngSize(bytes: Uint8Array): { width: number; height: number } {
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  return { width: view.getUint32(16), height: view.getUint32(20) };
}

beforeAll(async () => {
  fixtureDir = await mkdtemp(join(tmpdir(), 'regiongem-ui-'));
  await run('python3', [join(import.meta.dirname, '..', 'scripts', 'make_fixture.py'), fixtureDir]);
  server = spawn(
    'python3',
    ['-m', 'regiongem.cli', 'serve', '--index', join(fixtureDir, 'fixture.idx'), '--port', String(PORT)],
    { stdio: 'ignore' },
  );
  await waitForHealth();
}, 120_000);

afterAll(() => {
  server?.kill();
});

interface FixtureSource {
  width: number;
  height: number;
}

/** Stands in for the canvas: serves the pre-cropped bytes for the known rect. */
async function fixtureCropper(_source: FixtureSource, rect: CropRect): Promise<Blob> {
  expect(rect).toEqual(QUERY_CROP);
  const bytes = await readFile(join(fixtureDir, 'query_crop.png'));
  return new Blob([bytes], { type: 'image/png' });
}

function makeSession(): QuerySession<FixtureSource> {
  const session = new QuerySession<FixtureSource>(new SearchApi(BASE), fixtureCropper);
  session.setSource({ width: 96, height: 96 });
  session.setCrop(QUERY_CROP);
  return session;
}

describe('scripted session against the live service', () => {
  it('reports a healthy 10-item index', async () => {
    const health = await new SearchApi(BASE).health();
    expect(health.indexSize).toBe(10);
    expect(health.binConfig).toEqual({ hueBins: 10, satBins: 14, valBins: 3 });
  });

  it('uploads a crop that decodes to exactly the crop rect', async () => {
    const blob = await fixtureCropper({ width: 96, height: 96 }, QUERY_CROP);
    const size = pngSize(new Uint8Array(await blob.arrayBuffer()));
    expect(size).toEqual({ width: QUERY_CROP.width, height: QUERY_CROP.height });
  });

  it('renders the grid in exactly the raw /api/query order', async () => {
    const session = makeSession();
    session.setK(5);
    const results = await session.submit();
    expect(session.error).toBeNull();
    expect(results).toHaveLength(5);
    expect(results![0].classLabel).toBe('warm');

    const form = new FormData();
    form.append('image', await fixtureCropper({ width: 96, height: 96 }, QUERY_CROP), 'query.png');
    const raw = await fetch(`${BASE}/api/query?k=5`, { method: 'POST', body: form });
    const rawBody = (await raw.json()) as { results: { imageId: string; distance: number }[] };
    expect(results!.map((c) => c.imageId)).toEqual(rawBody.results.map((c) => c.imageId));
    expect(results!.map((c) => c.distance)).toEqual(rawBody.results.map((c) => c.distance));
    expect(session.history).toHaveLength(1);
    expect(session.history[0].topResultId).toBe(rawBody.results[0].imageId);
  });

  it('adjusting k from 5 to 10 preserves the first five cards', async () => {
    const session = makeSession();
    session.setK(5);
    const five = await session.submit();
    const ten = await session.adjustK(10);
    expect(ten).toHaveLength(10);
    expect(session.prefixWarning).toBeNull();
    expect(ten!.slice(0, 5).map((c) => c.imageId)).toEqual(five!.map((c) => c.imageId));
  });

  it('thumbnails of results are fetchable PNGs', async () => {
    const session = makeSession();
    session.setK(3);
    const results = await session.submit();
    const api = new SearchApi(BASE);
    const resp = await fetch(api.resolveThumb(results![0].thumbnailUrl));
    expect(resp.status).toBe(200);
    expect(resp.headers.get('content-type')).toBe('image/png');
  });

  it('surfaces a service 400 inline without losing state', async () => {
    const session = new QuerySession<FixtureSource>(
      new SearchApi(BASE),
      async () => new Blob([new Uint8Array([0, 1, 2])], { type: 'image/png' }),
    );
    session.setSource({ width: 96, height: 96 });
    const before = await session.submit();
    expect(before).toBeNull();
    expect(session.error).toMatch(/service:/);
    expect(session.history).toHaveLength(0);
  });
});
