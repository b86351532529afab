/** Typed client for the retrieval API, plus the request-sequence bookkeeping
 * that lets views discard stale responses. */

import type {
  DocResponse,
  EntityFrequency,
  HealthResponse,
  RelationFrequency,
  SearchResponse,
  SentenceResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string) => Promise<Response>;

export interface SearchParams {
  q: string;
  top?: number;
  offset?: number;
  sigma?: number;
  theta?: number;
  eta?: number;
  k?: number;
  b?: number;
  normalize?: boolean;
}

type QueryValue = string | number | boolean | undefined;

export class ApiClient {
  constructor(
    readonly base: string = "",
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string, params?: Record<string, QueryValue>): Promise<T> {
    const qs = new URLSearchParams();
    if (params) {
      for (const [key, value] of Object.entries(params)) {
        if (value !== undefined) qs.set(key, String(value));
      }
    }
    const query = qs.toString();
    const response = await this.fetchFn(`${this.base}${path}${query ? `?${query}` : ""}`);
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body: unknown = await response.json();
        if (
          typeof body === "object" &&
          body !== null &&
          typeof (body as { detail?: unknown }).detail === "string"
        ) {
          detail = (body as { detail: string }).detail;
        }
      } catch {
        // non-JSON error body; keep the generic detail
      }
      throw new ApiError(response.status, detail);
    }
    return response.json() as Promise<T>;
  }

  search(params: SearchParams): Promise<SearchResponse> {
    return this.get("/api/search", {
      q: params.q,
      top: params.top,
      offset: params.offset,
      sigma: params.sigma,
      theta: params.theta,
      eta: params.eta,
      k: params.k,
      b: params.b,
      normalize: params.normalize,
    });
  }

  doc(docId: string, focus?: number): Promise<DocResponse> {
    return this.get(`/api/doc/${encodeURIComponent(docId)}`, { focus });
  }

  sentence(sentenceId: number): Promise<SentenceResponse> {
    return this.get(`/api/sentence/${sentenceId}`);
  }

  entities(opts: { type?: string; top?: number } = {}): Promise<EntityFrequency[]> {
    return this.get("/api/analytics/entities", { type: opts.type, top: opts.top });
  }

  relations(opts: { top?: number; group_id?: number } = {}): Promise<RelationFrequency[]> {
    return this.get("/api/analytics/relations", { top: opts.top, group_id: opts.group_id });
  }

  health(): Promise<HealthResponse> {
    return this.get("/api/health");
  }
}

/** Monotonic ticket source. Each view that issues requests owns one; a
 * response is applied only if its ticket is still the latest, so a slow
 * response can never overwrite the result of a newer request. */
export class RequestSequence {
  private latest = 0;

  issue(): number {
    return ++this.latest;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.latest;
  }
}

export type Settled<T> = { stale: false; value: T } | { stale: true };

/** Run one request under a fresh ticket from `seq`. The result is marked
 * stale — and any failure swallowed — if a newer ticket was issued while the
 * request was in flight. Errors from the current request propagate. */
export async function withTicket<T>(seq: RequestSequence, run: () => Promise<T>): Promise<Settled<T>> {
  const ticket = seq.issue();
  try {
    const value = await run();
    return seq.isCurrent(ticket) ? { stale: false, value } : { stale: true };
  } catch (err) {
    if (seq.isCurrent(ticket)) throw err;
    return { stale: true };
  }
}

/** API base URL chosen at build time (dist/config.js); same-origin default. */
export function configuredApiBase(): string {
  const scope = globalThis as { EVIDEX_API_BASE?: unknown };
  return typeof scope.EVIDEX_API_BASE === "string" ? scope.EVIDEX_API_BASE : "";
}
