import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError, NetworkError } from '../src/api.js';

function fakeFetch(status: number, body: unknown) {
  const calls: { input: string; init?: RequestInit }[] = [];
  const fn = async (input: string, init?: RequestInit) => {
    calls.push({ input, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'Content-Type': 'application/json' },
    });
  };
  return { fn, calls };
}

describe('ApiClient', () => {
  it('hits the documented endpoints', async () => {
    const { fn, calls } = fakeFetch(200, { reviews: [], thresholds: {} });
    const api = new ApiClient('http://svc:8000', fn);
    await api.listPending();
    expect(calls[0]!.input).toBe('http://svc:8000/reviews?status=pending');

    await api.getTemplate('alice');
    expect(calls[1]!.input).toBe('http://svc:8000/clients/alice/template');
  });

  it('posts exactly the decision payload', async () => {
    const { fn, calls } = fakeFetch(200, { request_id: 'r', status: 'approved' });
    const api = new ApiClient('http://svc:8000', fn);
    await api.decide('req-1', 'approve', 'sup-1');
    const call = calls[0]!;
    expect(call.input).toBe('http://svc:8000/reviews/req-1');
    expect(call.init?.method).toBe('POST');
    expect(JSON.parse(String(call.init?.body))).toEqual({
      decision: 'approve',
      supervisor: 'sup-1',
    });
  });

  it('maps the error envelope onto ApiError', async () => {
    const { fn } = fakeFetch(409, { error: { code: 'conflict', message: 'already decided' } });
    const api = new ApiClient('http://svc:8000', fn);
    const err = await api.decide('req-1', 'deny', 's').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe('conflict');
    expect(err.message).toMatch(/already decided/);
  });

  it('wraps transport failures in NetworkError', async () => {
    const api = new ApiClient('http://svc:8000', async () => {
      throw new TypeError('fetch failed');
    });
    const err = await api.listPending().catch((e) => e);
    expect(err).toBeInstanceOf(NetworkError);
  });
});
