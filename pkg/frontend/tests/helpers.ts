/** Shared fixture loading and fake-fetch plumbing for the UI tests.
 *
 * Fixtures are verbatim API payloads frozen from a live server over the
 * bundled demo corpus (scripts/freeze_fixtures.py); the tests replay them so
 * rendering is checked against exactly what the API produces.
 */

import { readdirSync, readFileSync } from "node:fs";
import { join, resolve } from "node:path";

import type {
  DocResponse,
  EntityFrequency,
  HealthResponse,
  RelationFrequency,
  SearchResponse,
} from "../src/types.js";

// vitest runs with the frontend package root as the working directory.
const FIXTURE_DIR = resolve(process.cwd(), "tests", "fixtures");

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, `${name}.json`), "utf-8")) as T;
}

export interface SearchFixture {
  params: { q: string; top?: number; normalize?: boolean };
  response: SearchResponse;
}

export function searchFixtureNames(): string[] {
  return readdirSync(FIXTURE_DIR)
    .filter((f) => f.startsWith("search-") && f.endsWith(".json"))
    .map((f) => f.replace(/\.json$/, ""))
    .sort();
}

export function allSearchFixtures(): Array<[string, SearchFixture]> {
  return searchFixtureNames().map((name) => [name, loadFixture<SearchFixture>(name)]);
}

export const docAntiviral = (): DocResponse => loadFixture<DocResponse>("doc-antiviral");
export const docTitled = (): DocResponse => loadFixture<DocResponse>("doc-titled");
export const analyticsEntities = (): EntityFrequency[] => loadFixture<EntityFrequency[]>("analytics-entities");
export const analyticsRelations = (): RelationFrequency[] => loadFixture<RelationFrequency[]>("analytics-relations");
export const healthFixture = (): HealthResponse => loadFixture<HealthResponse>("health");

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Fake fetch that answers from a routing function and records every URL. */
export function fakeFetch(route: (url: URL) => Response | Promise<Response>) {
  const requests: URL[] = [];
  const fetchFn = (raw: string): Promise<Response> => {
    const url = new URL(raw, "http://fixture.test");
    requests.push(url);
    return Promise.resolve(route(url));
  };
  return { fetchFn, requests };
}

/** Routing function that serves the frozen demo payloads the way the live
 * server would: search by q, doc by id, analytics with the type filter
 * applied, 404 for unknown ids. */
export function demoRouter(): (url: URL) => Response {
  const searches = allSearchFixtures();
  const docs: Record<string, DocResponse> = {
    "antiviral-01": docAntiviral(),
    "uv-kill-01": docTitled(),
  };
  return (url) => {
    if (url.pathname === "/api/health") return jsonResponse(healthFixture());
    if (url.pathname === "/api/search") {
      const q = url.searchParams.get("q") ?? "";
      if (q.trim() === "") return jsonResponse({ detail: "q must not be empty" }, 400);
      const hit = searches.find(([, f]) => f.params.q === q);
      // Any query without a frozen payload answers like a miss: a valid
      // response with zero results.
      if (!hit) {
        const empty = structuredClone(searches[0][1].response);
        empty.results = [];
        empty.total_candidates = 0;
        return jsonResponse(empty);
      }
      return jsonResponse(hit[1].response);
    }
    const docMatch = url.pathname.match(/^\/api\/doc\/(.+)$/);
    if (docMatch) {
      const docId = decodeURIComponent(docMatch[1]);
      const doc = docs[docId];
      return doc ? jsonResponse(doc) : jsonResponse({ detail: `no document '${docId}'` }, 404);
    }
    if (url.pathname === "/api/analytics/entities") {
      const type = url.searchParams.get("type");
      const rows = analyticsEntities().filter((e) => type === null || e.entity_type === type);
      return jsonResponse(rows);
    }
    if (url.pathname === "/api/analytics/relations") {
      return jsonResponse(analyticsRelations());
    }
    return jsonResponse({ detail: `unrouted path ${url.pathname}` }, 404);
  };
}
