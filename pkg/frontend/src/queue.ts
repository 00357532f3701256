// Review-queue state machine. All decisions and scores come from the
// service; this store only tracks what the supervisor sees: the pending
// page, in-flight submissions, unsent decisions awaiting retry, and
// conflicts lost to another supervisor.

import { ApiError, NetworkError, type ReviewApi } from './api.js';
import type { Decision, ReviewItem, Thresholds } from './types.js';

export type CardState =
  | { kind: 'pending' }
  | { kind: 'submitting'; decision: Decision }
  | { kind: 'unsent'; decision: Decision; error: string }
  | { kind: 'conflict'; winner: ReviewItem };

export interface ResolvedCard {
  item: ReviewItem;
  winner: ReviewItem;
}

export interface QueueSnapshot {
  pageItems: ReviewItem[];
  total: number;
  page: number;
  pageCount: number;
  states: Record<string, CardState>;
  thresholds: Thresholds | null;
  banner: string | null;
  resolved: ResolvedCard[];
}

const newestFirst = (a: ReviewItem, b: ReviewItem): number => {
  if (a.submitted_at !== b.submitted_at) return a.submitted_at < b.submitted_at ? 1 : -1;
  return a.request_id < b.request_id ? 1 : -1;
};

export class QueueStore {
  private items: ReviewItem[] = [];
  private states = new Map<string, CardState>();
  private resolved: ResolvedCard[] = [];
  private thresholds: Thresholds | null = null;
  private banner: string | null = null;
  private page = 0;
  private listeners = new Set<(snap: QueueSnapshot) => void>();

  constructor(
    private readonly api: ReviewApi,
    readonly supervisor: string,
    readonly pageSize = 20,
  ) {}

  subscribe(listener: (snap: QueueSnapshot) => void): () => void {
    this.listeners.add(listener);
    listener(this.snapshot());
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const listener of this.listeners) listener(snap);
  }

  snapshot(): QueueSnapshot {
    const pageCount = Math.max(1, Math.ceil(this.items.length / this.pageSize));
    const page = Math.min(this.page, pageCount - 1);
    const start = page * this.pageSize;
    return {
      pageItems: this.items.slice(start, start + this.pageSize),
      total: this.items.length,
      page,
      pageCount,
      states: Object.fromEntries(this.states),
      thresholds: this.thresholds,
      banner: this.banner,
      resolved: [...this.resolved],
    };
  }

  stateOf(requestId: string): CardState {
    return this.states.get(requestId) ?? { kind: 'pending' };
  }

  setPage(page: number): void {
    this.page = Math.max(0, page);
    this.emit();
  }

  /** One poll tick: pull the pending queue and retry anything unsent. */
  async refresh(): Promise<void> {
    let listing;
    try {
      listing = await this.api.listPending();
    } catch (err) {
      if (err instanceof NetworkError) {
        this.banner = `service unreachable: ${err.message}`;
        this.emit();
        return;
      }
      throw err;
    }
    this.banner = null;
    this.thresholds = listing.thresholds;
    // dedupe by request id, newest first (the service already orders; sort defensively)
    const seen = new Map<string, ReviewItem>();
    for (const item of listing.reviews) seen.set(item.request_id, item);
    this.items = [...seen.values()].sort(newestFirst);

    const present = new Set(this.items.map((item) => item.request_id));
    for (const [id, state] of [...this.states]) {
      if (state.kind === 'unsent') continue; // never drop an undelivered decision
      if (!present.has(id)) {
        // a conflict card leaving the pending list stays visible as a
        // dismissable notice; nothing disappears behind the user's back
        if (state.kind === 'conflict' && !this.resolved.some((r) => r.item.request_id === id)) {
          this.resolved.push({ item: state.winner, winner: state.winner });
        }
        this.states.delete(id);
      }
    }
    this.emit();
    await this.flushUnsent(present);
  }

  /** Re-send decisions that failed on the network; resolve ones decided elsewhere. */
  private async flushUnsent(present: Set<string>): Promise<void> {
    for (const [id, state] of [...this.states]) {
      if (state.kind !== 'unsent') continue;
      if (present.has(id)) {
        await this.submit(id, state.decision);
      } else {
        // gone from the queue: someone decided it (possibly our lost call)
        try {
          const winner = await this.api.getReview(id);
          this.states.delete(id);
          this.resolved.push({ item: winner, winner });
          this.emit();
        } catch {
          // keep the unsent state; next tick retries
        }
      }
    }
  }

  /** Submit one decision: exactly one POST per user action (plus retries of it). */
  async submit(requestId: string, decision: Decision): Promise<void> {
    const item = this.items.find((i) => i.request_id === requestId);
    this.states.set(requestId, { kind: 'submitting', decision });
    this.emit();
    try {
      await this.api.decide(requestId, decision, this.supervisor);
      // success: the card leaves the queue
      this.items = this.items.filter((i) => i.request_id !== requestId);
      this.states.delete(requestId);
      this.emit();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // lost the race: show the winning decision, destroy nothing
        let winner: ReviewItem | null = null;
        try {
          winner = await this.api.getReview(requestId);
        } catch {
          winner = null;
        }
        if (winner) {
          this.states.set(requestId, { kind: 'conflict', winner });
        } else {
          this.states.set(requestId, { kind: 'unsent', decision, error: err.message });
        }
        this.emit();
        return;
      }
      if (err instanceof NetworkError) {
        // retained locally, visible as unsent, retried on the next tick
        this.states.set(requestId, { kind: 'unsent', decision, error: err.message });
        this.emit();
        return;
      }
      this.states.set(requestId, { kind: 'pending' });
      this.banner = err instanceof Error ? err.message : String(err);
      this.emit();
      if (item === undefined) throw err;
    }
  }

  dismissConflict(requestId: string): void {
    const state = this.states.get(requestId);
    if (state?.kind === 'conflict') {
      this.items = this.items.filter((i) => i.request_id !== requestId);
      this.states.delete(requestId);
      this.emit();
    }
  }

  dismissResolved(requestId: string): void {
    this.resolved = this.resolved.filter((r) => r.item.request_id !== requestId);
    this.emit();
  }
}
