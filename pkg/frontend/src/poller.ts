// Repeating poll with exponential backoff while the service is unreachable.

export interface PollerOptions {
  intervalMs?: number;
  maxBackoffMs?: number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
}

export class Poller {
  private readonly intervalMs: number;
  private readonly maxBackoffMs: number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;
  private readonly clearTimer: (handle: unknown) => void;
  private backoffMs: number;
  private handle: unknown = null;
  private running = false;

  constructor(
    private readonly tick: () => Promise<boolean>, // true = reachable
    options: PollerOptions = {},
  ) {
    this.intervalMs = options.intervalMs ?? 4000;
    this.maxBackoffMs = options.maxBackoffMs ?? 60000;
    this.setTimer = options.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = options.clearTimer ?? ((h) => clearTimeout(h as number));
    this.backoffMs = this.intervalMs;
  }

  get currentDelay(): number {
    return this.backoffMs;
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    void this.runOnce();
  }

  stop(): void {
    this.running = false;
    if (this.handle !== null) this.clearTimer(this.handle);
    this.handle = null;
  }

  private async runOnce(): Promise<void> {
    if (!this.running) return;
    let reachable = false;
    try {
      reachable = await this.tick();
    } catch {
      reachable = false;
    }
    this.backoffMs = reachable
      ? this.intervalMs
      : Math.min(this.backoffMs * 2, this.maxBackoffMs);
    if (!this.running) return;
    this.handle = this.setTimer(() => void this.runOnce(), this.backoffMs);
  }
}
