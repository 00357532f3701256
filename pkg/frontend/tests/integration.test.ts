// Acceptance: drive the real service. The queue shows each escalated item
// exactly once; approval increments the client's template version; a raced
// decision surfaces the conflict state without losing anything.

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { QueueStore } from '../src/queue.js';

const PORT = 8733;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let storeDir: string;

function strokePbm(phase: number, width = 80, height = 30): string {
  const rows = Array.from({ length: height }, () => Array(width).fill('0'));
  for (let c = 0; c < width; c++) {
    const y = 0.5 + 0.35 * Math.sin((2 * Math.PI * c) / (width - 1) + phase);
    const r = Math.min(height - 1, Math.max(0, Math.round(y * (height - 1))));
    rows[r]![c] = '1';
  }
  return `P1\n${width} ${height}\n${rows.map((r) => r.join(' ')).join('\n')}\n`;
}

const b64 = (text: string): string => Buffer.from(text, 'binary').toString('base64');

async function post(path: string, payload: unknown): Promise<Response> {
  return fetch(BASE + path, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(payload),
  });
}

async function waitForService(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error('service did not come up');
}

beforeAll(async () => {
  storeDir = mkdtempSync(join(tmpdir(), 'sigcloud-ui-test-'));
  // accept_below 0 means nothing auto-accepts: every genuine probe escalates
  server = spawn(
    'python3',
    [
      '-m', 'sigcloud.cli',
      '--store', join(storeDir, 'store'),
      'serve', '--port', String(PORT),
      '--accept-below', '0', '--reject-at', '10',
    ],
    { stdio: 'ignore' },
  );
  await waitForService();

  const enrollment = [0, 0.05, 0.1].map((phase) => b64(strokePbm(phase)));
  const response = await post('/clients/walter/enroll', {
    signatures: enrollment,
    m: 8,
    sa: { t0: 1.0, r: 0.9, it: 30, t_min: 0.0, seed: 5 },
  });
  expect(response.status).toBe(201);
});

afterAll(() => {
  server?.kill();
  if (storeDir) rmSync(storeDir, { recursive: true, force: true });
});

async function escalate(phase: number): Promise<string> {
  const response = await post('/clients/walter/verify', { signature: b64(strokePbm(phase)) });
  expect(response.status).toBe(200);
  const outcome = await response.json();
  expect(outcome.decision).toBe('escalated');
  return outcome.request_id as string;
}

describe('supervisor UI against the live service', () => {
  it('shows an escalated item exactly once and approval bumps the template version', async () => {
    const rid = await escalate(0.02);
    const api = new ApiClient(BASE);
    const store = new QueueStore(api, 'sup-ui');

    await store.refresh();
    const ids = store.snapshot().pageItems.map((i) => i.request_id);
    expect(ids.filter((id) => id === rid)).toHaveLength(1);

    const before = (await api.getTemplate('walter')).version;
    await store.submit(rid, 'approve');
    expect(store.snapshot().pageItems.map((i) => i.request_id)).not.toContain(rid);
    const after = (await api.getTemplate('walter')).version;
    expect(after).toBe(before + 1);
  });

  it('surfaces a raced decision as a conflict without data loss', async () => {
    const rid = await escalate(0.04);
    const api = new ApiClient(BASE);
    const ours = new QueueStore(api, 'sup-a');
    const theirs = new QueueStore(api, 'sup-b');
    await ours.refresh();
    await theirs.refresh();

    await theirs.submit(rid, 'deny'); // the other supervisor wins the race
    await ours.submit(rid, 'approve');

    const snap = ours.snapshot();
    const state = snap.states[rid];
    expect(state?.kind).toBe('conflict');
    if (state?.kind === 'conflict') {
      expect(state.winner.status).toBe('denied');
      expect(state.winner.decided_by).toBe('sup-b');
    }
    // the losing card is still on screen until dismissed: nothing was lost
    expect(snap.pageItems.map((i) => i.request_id)).toContain(rid);

    // the next poll removes it from pending but keeps a dismissable notice
    await ours.refresh();
    expect(ours.snapshot().pageItems.map((i) => i.request_id)).not.toContain(rid);
    expect(ours.snapshot().resolved.map((r) => r.item.request_id)).toContain(rid);
  });
});
