// Thin typed client over the service HTTP API. The UI talks to nothing else.

import type { Decision, ReviewItem, ReviewListing, Template } from './types.js';

/** Non-2xx response carrying the service error envelope. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

/** The request never reached the service (offline, refused, timeout). */
export class NetworkError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'NetworkError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** The slice of the service the queue store needs; ApiClient implements it. */
export interface ReviewApi {
  listPending(): Promise<ReviewListing>;
  getReview(requestId: string): Promise<ReviewItem>;
  decide(requestId: string, decision: Decision, supervisor: string): Promise<ReviewItem>;
}

export class ApiClient implements ReviewApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new NetworkError(err instanceof Error ? err.message : String(err));
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const code = body?.error?.code ?? 'unknown';
      const message = body?.error?.message ?? `HTTP ${response.status}`;
      throw new ApiError(response.status, code, message);
    }
    return body as T;
  }

  listPending(): Promise<ReviewListing> {
    return this.request<ReviewListing>('/reviews?status=pending');
  }

  getReview(requestId: string): Promise<ReviewItem> {
    return this.request<ReviewItem>(`/reviews/${requestId}`);
  }

  decide(requestId: string, decision: Decision, supervisor: string): Promise<ReviewItem> {
    return this.request<ReviewItem>(`/reviews/${requestId}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ decision, supervisor }),
    });
  }

  getTemplate(clientId: string): Promise<Template> {
    return this.request<Template>(`/clients/${clientId}/template`);
  }

  health(): Promise<{ status: string }> {
    return this.request<{ status: string }>('/healthz');
  }
}
