/** Application-level behavior driven through the DOM: analytics
 * click-through into the search box, stale search responses never
 * rendering, document focus and not-found handling, and the analytics
 * empty state. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App, docHash, initApp, parseRoute } from "../src/app.js";
import { relationQueryString } from "../src/types.js";
import {
  allSearchFixtures,
  analyticsRelations,
  demoRouter,
  fakeFetch,
  healthFixture,
  jsonResponse,
  loadFixture,
  type SearchFixture,
} from "./helpers.js";

function buildApp(route = demoRouter()): { app: App; root: HTMLElement; requests: URL[] } {
  const { fetchFn, requests } = fakeFetch(route);
  const root = document.createElement("div");
  document.body.append(root);
  const app = initApp(root, new ApiClient("", fetchFn));
  return { app, root, requests };
}

beforeEach(() => {
  window.location.hash = "";
  document.body.replaceChildren();
});

describe("routing", () => {
  it("parses the three hash forms", () => {
    expect(parseRoute("")).toEqual({ view: "search" });
    expect(parseRoute("#/search")).toEqual({ view: "search" });
    expect(parseRoute("#/analytics")).toEqual({ view: "analytics" });
    expect(parseRoute("#/doc/abc?focus=13")).toEqual({ view: "doc", docId: "abc", focus: 13 });
    expect(parseRoute("#/doc/with%2Fslash")).toEqual({ view: "doc", docId: "with/slash", focus: undefined });
    expect(parseRoute(docHash("a b", 3))).toEqual({ view: "doc", docId: "a b", focus: 3 });
  });
});

describe("search flow", () => {
  it("renders results and the parsed-query chips from the response", async () => {
    const { app, root } = buildApp();
    const fixture = loadFixture<SearchFixture>("search-03-triple-remdesivir");
    (root.querySelector("#query-input") as HTMLInputElement).value = fixture.params.q;
    root.querySelector("form.query-form")!.dispatchEvent(new Event("submit", { cancelable: true }));
    await app.settle();

    const results = root.querySelectorAll("#search-results .result");
    expect(results).toHaveLength(fixture.response.results.length);
    expect(root.querySelector("#parsed-query")!.textContent).toContain("form: triple");

    // Scores appear exactly as the API reported them, never recomputed.
    const first = fixture.response.results[0];
    const badge = results[0].querySelector(".badge-total")!;
    expect(badge.getAttribute("title")).toBe(`total = ${first.total}`);
    expect(results[0].querySelector(".result-text")!.textContent).toBe(first.text);
  });

  it("shows the health summary from the API", async () => {
    const { app, root } = buildApp();
    await app.settle();
    const health = healthFixture();
    expect(root.querySelector("#health-summary")!.textContent).toBe(
      `${health.documents} docs · ${health.sentences} sentences · ${health.patterns} patterns`,
    );
  });

  it("never renders a stale response delivered after a newer one", async () => {
    const older = loadFixture<SearchFixture>("search-01-triple-uv");
    const newer = loadFixture<SearchFixture>("search-03-triple-remdesivir");
    const deferred: Array<{ q: string; resolve: (r: Response) => void }> = [];
    const { fetchFn } = fakeFetch((url) => {
      if (url.pathname === "/api/search") {
        return new Promise<Response>((resolve) => {
          deferred.push({ q: url.searchParams.get("q") ?? "", resolve });
        });
      }
      return jsonResponse(healthFixture());
    });
    const root = document.createElement("div");
    document.body.append(root);
    const app = initApp(root, new ApiClient("", fetchFn));

    const input = root.querySelector("#query-input") as HTMLInputElement;
    const form = root.querySelector("form.query-form")!;
    input.value = older.params.q;
    form.dispatchEvent(new Event("submit", { cancelable: true }));
    input.value = newer.params.q;
    form.dispatchEvent(new Event("submit", { cancelable: true }));

    expect(deferred.map((d) => d.q)).toEqual([older.params.q, newer.params.q]);
    // Deliver out of order: the newer request answers first.
    deferred[1].resolve(jsonResponse(newer.response));
    deferred[0].resolve(jsonResponse(older.response));
    await app.settle();

    const firstResult = root.querySelector("#search-results .result .result-text")!;
    expect(firstResult.textContent).toBe(newer.response.results[0].text);
    expect(root.querySelector("#search-status")!.textContent).toContain(
      `${newer.response.results.length} of ${newer.response.total_candidates}`,
    );
    // Nothing from the stale response is anywhere in the list.
    const texts = [...root.querySelectorAll("#search-results .result-text")].map((n) => n.textContent);
    expect(texts).toEqual(newer.response.results.map((r) => r.text));
  });

  it("surfaces API validation errors as messages", async () => {
    const { app, root } = buildApp();
    (root.querySelector("#query-input") as HTMLInputElement).value = "   ";
    root.querySelector("form.query-form")!.dispatchEvent(new Event("submit", { cancelable: true }));
    await app.settle();
    expect(root.querySelector("#search-status")!.textContent).toBe("enter a query first");
  });
});

describe("document view", () => {
  it("renders the document with mentions highlighted and the focus marked", async () => {
    const { app, root } = buildApp();
    app.navigate(docHash("uv-kill-01", 1));
    await app.settle();

    const focused = root.querySelector(".sentence.focused")!;
    expect(focused).not.toBeNull();
    expect(focused.getAttribute("data-sentence-id")).toBe("1");

    const doc = loadFixture<{ mentions: unknown[] }>("doc-titled");
    expect(root.querySelectorAll(".hl-entity")).toHaveLength(doc.mentions.length);
    // The document title carries its own highlighted mentions.
    expect(root.querySelector(".doc-title .hl-entity")).not.toBeNull();
  });

  it("shows the not-found panel for an unknown id", async () => {
    const { app, root } = buildApp();
    app.navigate(docHash("does-not-exist"));
    await app.settle();
    const panel = root.querySelector(".panel-not-found")!;
    expect(panel).not.toBeNull();
    expect(panel.textContent).toContain("Document not found");
    expect(panel.textContent).toContain("does-not-exist");
  });
});

describe("analytics view", () => {
  it("lists entities and relations and filters entities by type", async () => {
    const { app, root, requests } = buildApp();
    app.navigate("#/analytics");
    await app.settle();

    expect(root.querySelectorAll("#entities-table tbody tr").length).toBeGreaterThan(0);
    expect(root.querySelectorAll("#relations-table tbody tr").length).toBeGreaterThan(0);

    const filter = root.querySelector("#entity-type-filter") as HTMLSelectElement;
    filter.value = "CHEMICAL";
    filter.dispatchEvent(new Event("change"));
    await app.settle();

    const typeRequest = requests.find((u) => u.searchParams.get("type") === "CHEMICAL");
    expect(typeRequest).toBeDefined();
    const badges = [...root.querySelectorAll("#entities-table tbody .type-badge")];
    expect(badges.length).toBeGreaterThan(0);
    expect(badges.every((b) => b.textContent === "CHEMICAL")).toBe(true);
  });

  it("click-through fills the query box with the exact pattern string and runs it", async () => {
    const { app, root, requests } = buildApp();
    app.navigate("#/analytics");
    await app.settle();

    const relations = analyticsRelations();
    const target = relations.findIndex(
      (r) => relationQueryString(r) === "$CHEMICAL inhibit $CORONAVIRUS",
    );
    expect(target).toBeGreaterThanOrEqual(0);
    const buttons = root.querySelectorAll("#relations-table .relation-link");
    expect(buttons).toHaveLength(relations.length);
    (buttons[target] as HTMLButtonElement).click();
    await app.settle();

    // The query box holds the pattern string verbatim.
    const input = root.querySelector("#query-input") as HTMLInputElement;
    expect(input.value).toBe("$CHEMICAL inhibit $CORONAVIRUS");

    // The search ran with that exact string and its results rendered.
    const searchRequests = requests.filter((u) => u.pathname === "/api/search");
    expect(searchRequests.at(-1)!.searchParams.get("q")).toBe("$CHEMICAL inhibit $CORONAVIRUS");
    const frozen = allSearchFixtures().find(([, f]) => f.params.q === "$CHEMICAL inhibit $CORONAVIRUS")!;
    const texts = [...root.querySelectorAll("#search-results .result-text")].map((n) => n.textContent);
    expect(texts).toEqual(frozen[1].response.results.map((r) => r.text));
    expect(root.querySelector("#nav-search")!.classList.contains("active")).toBe(true);
  });

  it("click-through works for relations without frozen results too", async () => {
    const { app, root, requests } = buildApp();
    app.navigate("#/analytics");
    await app.settle();

    const first = relationQueryString(analyticsRelations()[0]);
    (root.querySelector("#relations-table .relation-link") as HTMLButtonElement).click();
    await app.settle();

    expect((root.querySelector("#query-input") as HTMLInputElement).value).toBe(first);
    expect(requests.filter((u) => u.pathname === "/api/search").at(-1)!.searchParams.get("q")).toBe(first);
  });

  it("shows the empty state on an empty index", async () => {
    const { app, root } = buildApp((url) => {
      if (url.pathname === "/api/health") return jsonResponse(healthFixture());
      if (url.pathname.startsWith("/api/analytics/")) return jsonResponse([]);
      return jsonResponse({ detail: "unrouted" }, 404);
    });
    app.navigate("#/analytics");
    await app.settle();
    expect(root.querySelector("#analytics-empty")).not.toBeNull();
    expect(root.querySelector("#analytics-empty")!.textContent).toContain("no entities or relations");
  });
});
