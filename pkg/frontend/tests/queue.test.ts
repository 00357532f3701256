import { describe, expect, it } from 'vitest';

import { ApiError, NetworkError, type ReviewApi } from '../src/api.js';
import { QueueStore } from '../src/queue.js';
import type { Decision, ReviewItem, ReviewListing } from '../src/types.js';

const thresholds = { accept_below: 0.06, reject_at_or_above: 0.14 };

function item(id: string, submittedAt: string, overrides: Partial<ReviewItem> = {}): ReviewItem {
  return {
    request_id: id,
    client_id: 'alice',
    score: 0.1,
    candidate_curve: [
      [0, 0.5],
      [1, 0.5],
    ],
    template_version: 1,
    submitted_at: submittedAt,
    status: 'pending',
    decided_by: null,
    ...overrides,
  };
}

/** In-memory service double implementing the review contract (409 on repeat). */
class FakeService implements ReviewApi {
  pending = new Map<string, ReviewItem>();
  decided = new Map<string, ReviewItem>();
  offline = false;
  decideCalls = 0;
  failNextDecides = 0; // network failures injected before the call lands

  add(review: ReviewItem): void {
    this.pending.set(review.request_id, review);
  }

  async listPending(): Promise<ReviewListing> {
    if (this.offline) throw new NetworkError('connection refused');
    const reviews = [...this.pending.values()].sort((a, b) =>
      a.submitted_at < b.submitted_at ? 1 : -1,
    );
    return { reviews, thresholds };
  }

  async getReview(id: string): Promise<ReviewItem> {
    if (this.offline) throw new NetworkError('connection refused');
    const found = this.pending.get(id) ?? this.decided.get(id);
    if (!found) throw new ApiError(404, 'not_found', `no review ${id}`);
    return found;
  }

  async decide(id: string, decision: Decision, supervisor: string): Promise<ReviewItem> {
    if (this.offline || this.failNextDecides > 0) {
      this.failNextDecides = Math.max(0, this.failNextDecides - 1);
      throw new NetworkError('connection reset');
    }
    this.decideCalls += 1;
    if (this.decided.has(id)) throw new ApiError(409, 'conflict', `already decided`);
    const pending = this.pending.get(id);
    if (!pending) throw new ApiError(404, 'not_found', `no review ${id}`);
    const updated: ReviewItem = {
      ...pending,
      status: decision === 'approve' ? 'approved' : 'denied',
      decided_by: supervisor,
    };
    this.pending.delete(id);
    this.decided.set(id, updated);
    return updated;
  }
}

describe('QueueStore.refresh', () => {
  it('shows each pending item exactly once, newest first', async () => {
    const service = new FakeService();
    service.add(item('req-b', '2026-01-02T00:00:00'));
    service.add(item('req-a', '2026-01-01T00:00:00'));
    service.add(item('req-c', '2026-01-03T00:00:00'));
    const store = new QueueStore(service, 'sup');
    await store.refresh();
    const snap = store.snapshot();
    expect(snap.pageItems.map((i) => i.request_id)).toEqual(['req-c', 'req-b', 'req-a']);
    expect(snap.total).toBe(3);
    expect(snap.thresholds).toEqual(thresholds);
  });

  it('represents the empty queue explicitly', async () => {
    const store = new QueueStore(new FakeService(), 'sup');
    await store.refresh();
    expect(store.snapshot().total).toBe(0);
    expect(store.snapshot().banner).toBeNull();
  });

  it('paginates 50 items in submitted_at descending order', async () => {
    const service = new FakeService();
    for (let i = 0; i < 50; i++) {
      service.add(item(`req-${String(i).padStart(2, '0')}`, `2026-01-01T00:00:${String(i).padStart(2, '0')}`));
    }
    const store = new QueueStore(service, 'sup', 20);
    await store.refresh();
    let snap = store.snapshot();
    expect(snap.pageCount).toBe(3);
    expect(snap.pageItems).toHaveLength(20);
    expect(snap.pageItems[0]!.request_id).toBe('req-49'); // newest first
    store.setPage(2);
    snap = store.snapshot();
    expect(snap.pageItems).toHaveLength(10);
    expect(snap.pageItems.at(-1)!.request_id).toBe('req-00');
  });

  it('raises the banner when the service is unreachable and clears it after', async () => {
    const service = new FakeService();
    service.add(item('req-a', '2026-01-01T00:00:00'));
    const store = new QueueStore(service, 'sup');
    await store.refresh();
    service.offline = true;
    await store.refresh();
    let snap = store.snapshot();
    expect(snap.banner).toMatch(/unreachable/);
    expect(snap.total).toBe(1); // stale items stay visible
    service.offline = false;
    await store.refresh();
    expect(store.snapshot().banner).toBeNull();
  });
});

describe('QueueStore.submit', () => {
  it('removes the card when the decision lands', async () => {
    const service = new FakeService();
    service.add(item('req-a', '2026-01-01T00:00:00'));
    const store = new QueueStore(service, 'sup');
    await store.refresh();
    await store.submit('req-a', 'approve');
    expect(store.snapshot().total).toBe(0);
    expect(service.decided.get('req-a')!.status).toBe('approved');
    expect(service.decideCalls).toBe(1); // exactly one HTTP call
  });

  it('shows the winning decision on a lost race, destroying nothing', async () => {
    const service = new FakeService();
    service.add(item('req-a', '2026-01-01T00:00:00'));
    const store = new QueueStore(service, 'sup-我');
    await store.refresh();
    await service.decide('req-a', 'deny', 'sup-other'); // the race winner
    await store.submit('req-a', 'approve');
    const snap = store.snapshot();
    expect(snap.total).toBe(1); // card still visible
    const state = snap.states['req-a'];
    expect(state?.kind).toBe('conflict');
    if (state?.kind === 'conflict') {
      expect(state.winner.status).toBe('denied');
      expect(state.winner.decided_by).toBe('sup-other');
    }
    store.dismissConflict('req-a');
    expect(store.snapshot().total).toBe(0);
  });

  it('turns a conflict card into a dismissable notice on the next poll', async () => {
    const service = new FakeService();
    service.add(item('req-a', '2026-01-01T00:00:00'));
    const store = new QueueStore(service, 'sup');
    await store.refresh();
    await service.decide('req-a', 'deny', 'sup-other');
    await store.submit('req-a', 'approve');
    expect(store.snapshot().states['req-a']?.kind).toBe('conflict');

    await store.refresh(); // poll tick: item left pending, notice must survive
    const snap = store.snapshot();
    expect(snap.total).toBe(0);
    expect(snap.resolved.map((r) => r.item.request_id)).toEqual(['req-a']);
    expect(snap.resolved[0]!.winner.decided_by).toBe('sup-other');
  });

  it('retains a decision that never reached the service and retries it', async () => {
    const service = new FakeService();
    service.add(item('req-a', '2026-01-01T00:00:00'));
    const store = new QueueStore(service, 'sup');
    await store.refresh();

    service.failNextDecides = 1;
    await store.submit('req-a', 'approve');
    let state = store.snapshot().states['req-a'];
    expect(state?.kind).toBe('unsent'); // visible, never dropped
    expect(service.decided.size).toBe(0);

    await store.refresh(); // next poll tick flushes the unsent decision
    expect(store.snapshot().total).toBe(0);
    expect(service.decided.get('req-a')!.status).toBe('approved');
  });

  it('resolves an unsent decision that was decided elsewhere meanwhile', async () => {
    const service = new FakeService();
    service.add(item('req-a', '2026-01-01T00:00:00'));
    const store = new QueueStore(service, 'sup');
    await store.refresh();

    service.failNextDecides = 1;
    await store.submit('req-a', 'approve');
    await service.decide('req-a', 'deny', 'sup-other');

    await store.refresh();
    const snap = store.snapshot();
    expect(snap.states['req-a']).toBeUndefined();
    expect(snap.resolved).toHaveLength(1);
    expect(snap.resolved[0]!.winner.status).toBe('denied');
    store.dismissResolved('req-a');
    expect(store.snapshot().resolved).toHaveLength(0);
  });

  it('keeps unsent decisions across offline refreshes', async () => {
    const service = new FakeService();
    service.add(item('req-a', '2026-01-01T00:00:00'));
    const store = new QueueStore(service, 'sup');
    await store.refresh();

    service.offline = true;
    await store.submit('req-a', 'deny');
    await store.refresh();
    await store.refresh();
    expect(store.snapshot().states['req-a']?.kind).toBe('unsent');

    service.offline = false;
    await store.refresh();
    expect(service.decided.get('req-a')!.status).toBe('denied');
  });
});
