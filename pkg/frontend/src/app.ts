/** Application shell: hash routing between the three views, request
 * dispatch with stale-response discarding, and the cross-view actions
 * (open a document from a result, launch a pattern query from a relation).
 *
 * Every number shown anywhere comes verbatim from an API payload; the app
 * never recomputes a score client-side.
 */

import { ApiClient, ApiError, RequestSequence, configuredApiBase, withTicket } from "./api.js";
import { clear, el } from "./dom.js";
import { AnalyticsView } from "./views/analytics.js";
import { DocumentView } from "./views/document.js";
import { SearchView } from "./views/search.js";

type Route =
  | { view: "search" }
  | { view: "doc"; docId: string; focus?: number }
  | { view: "analytics" };

export function parseRoute(hash: string): Route {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const [path, queryPart] = raw.split("?", 2);
  const parts = (path ?? "").split("/").filter((p) => p.length > 0);
  if (parts[0] === "doc" && parts.length >= 2) {
    const docId = decodeURIComponent(parts.slice(1).join("/"));
    const params = new URLSearchParams(queryPart ?? "");
    const focusRaw = params.get("focus");
    const focus = focusRaw === null ? undefined : Number(focusRaw);
    return { view: "doc", docId, focus: Number.isInteger(focus) ? focus : undefined };
  }
  if (parts[0] === "analytics") return { view: "analytics" };
  return { view: "search" };
}

export function docHash(docId: string, focus?: number): string {
  const suffix = focus === undefined ? "" : `?focus=${focus}`;
  return `#/doc/${encodeURIComponent(docId)}${suffix}`;
}

const ANALYTICS_TOP = 50;

export class App {
  readonly searchView: SearchView;
  readonly documentView: DocumentView;
  readonly analyticsView: AnalyticsView;

  private readonly searchSeq = new RequestSequence();
  private readonly docSeq = new RequestSequence();
  private readonly analyticsSeq = new RequestSequence();
  private readonly entityFilterSeq = new RequestSequence();
  private readonly pending = new Set<Promise<unknown>>();
  private readonly viewHost: HTMLElement;
  private readonly healthEl: HTMLElement;
  private readonly navButtons: { search: HTMLButtonElement; analytics: HTMLButtonElement };
  private currentHash: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    private readonly win: Window = window,
  ) {
    this.searchView = new SearchView({
      onSubmit: () => {
        this.track(this.runSearch());
      },
      onOpenDoc: (docId, sentenceId) => {
        this.navigate(docHash(docId, sentenceId));
      },
    });
    this.documentView = new DocumentView();
    this.analyticsView = new AnalyticsView({
      onTypeFilter: (entityType) => {
        this.track(this.filterEntities(entityType));
      },
      onRelationQuery: (patternQuery) => {
        this.launchPatternQuery(patternQuery);
      },
    });

    this.healthEl = el("span", { class: "health", id: "health-summary" });
    this.navButtons = {
      search: el("button", { type: "button", class: "nav-link", id: "nav-search" }, "Search"),
      analytics: el("button", { type: "button", class: "nav-link", id: "nav-analytics" }, "Analytics"),
    };
    this.navButtons.search.addEventListener("click", () => this.navigate("#/search"));
    this.navButtons.analytics.addEventListener("click", () => this.navigate("#/analytics"));

    const header = el(
      "header",
      { class: "app-header" },
      el("span", { class: "brand" }, "evidex"),
      this.navButtons.search,
      this.navButtons.analytics,
      this.healthEl,
    );

    this.viewHost = el("main", { class: "view-host" });
    clear(this.root);
    this.root.append(header, this.viewHost);

    this.win.addEventListener("hashchange", () => {
      this.handleHash(this.win.location.hash);
    });
  }

  /** Wire up, load health, and show the view the current hash names. */
  start(): void {
    this.track(this.loadHealth());
    this.currentHash = this.win.location.hash;
    this.track(this.route(parseRoute(this.currentHash)));
  }

  /** Resolves once every request issued so far has settled and its render
   * applied; tests use this instead of sleeping. */
  async settle(): Promise<void> {
    while (this.pending.size > 0) {
      await Promise.allSettled([...this.pending]);
    }
  }

  /** Navigate by setting the location hash and routing immediately; the
   * browser's own (asynchronous) hashchange event is deduplicated, so each
   * navigation routes exactly once. */
  navigate(hash: string): void {
    if (this.win.location.hash !== hash) this.win.location.hash = hash;
    this.handleHash(hash);
  }

  private handleHash(hash: string): void {
    if (hash === this.currentHash) return;
    this.currentHash = hash;
    this.track(this.route(parseRoute(hash)));
  }

  /** Fill the query box with the exact pattern string and run it. */
  launchPatternQuery(patternQuery: string): void {
    this.navigate("#/search");
    this.searchView.query = patternQuery;
    this.track(this.runSearch());
  }

  async runSearch(): Promise<void> {
    const q = this.searchView.query.trim();
    if (q === "") {
      this.searchView.renderError("enter a query first");
      return;
    }
    const controls = this.searchView.controls();
    this.searchView.renderPending();
    try {
      const settled = await withTicket(this.searchSeq, () =>
        this.client.search({
          q,
          top: controls.top,
          sigma: controls.weights?.sigma,
          theta: controls.weights?.theta,
          eta: controls.weights?.eta,
        }),
      );
      if (settled.stale) return;
      this.searchView.renderResponse(settled.value);
    } catch (err) {
      this.searchView.renderError(errorMessage(err));
    }
  }

  private async route(route: Route): Promise<void> {
    switch (route.view) {
      case "search":
        this.showView("search");
        return;
      case "doc":
        this.showView("doc");
        await this.loadDoc(route.docId, route.focus);
        return;
      case "analytics":
        this.showView("analytics");
        await this.loadAnalytics();
        return;
    }
  }

  private showView(view: "search" | "doc" | "analytics"): void {
    const active = {
      search: this.searchView.root,
      doc: this.documentView.root,
      analytics: this.analyticsView.root,
    }[view];
    if (active.parentElement !== this.viewHost) {
      clear(this.viewHost);
      this.viewHost.append(active);
    }
    this.navButtons.search.classList.toggle("active", view === "search");
    this.navButtons.analytics.classList.toggle("active", view === "analytics");
  }

  private async loadDoc(docId: string, focus?: number): Promise<void> {
    this.documentView.renderPending(docId);
    try {
      const settled = await withTicket(this.docSeq, () => this.client.doc(docId, focus));
      if (settled.stale) return;
      this.documentView.renderDoc(settled.value);
      this.documentView.scrollToFocus();
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.documentView.renderNotFound(docId);
      } else {
        this.documentView.renderError(errorMessage(err));
      }
    }
  }

  private async loadAnalytics(): Promise<void> {
    try {
      const settled = await withTicket(this.analyticsSeq, () =>
        Promise.all([
          this.client.entities({ top: ANALYTICS_TOP }),
          this.client.relations({ top: ANALYTICS_TOP }),
        ]),
      );
      if (settled.stale) return;
      const [entities, relations] = settled.value;
      this.analyticsView.render(entities, relations);
    } catch (err) {
      clear(this.analyticsView.root);
      this.analyticsView.root.append(el("div", { class: "panel panel-error" }, errorMessage(err)));
    }
  }

  private async filterEntities(entityType: string): Promise<void> {
    const settled = await withTicket(this.entityFilterSeq, () =>
      this.client.entities({ type: entityType === "" ? undefined : entityType, top: ANALYTICS_TOP }),
    );
    if (settled.stale) return;
    this.analyticsView.renderEntityRows(settled.value);
  }

  private async loadHealth(): Promise<void> {
    try {
      const health = await this.client.health();
      this.healthEl.textContent = `${health.documents} docs · ${health.sentences} sentences · ${health.patterns} patterns`;
    } catch (err) {
      this.healthEl.textContent = errorMessage(err);
      this.healthEl.classList.add("health-error");
    }
  }

  private track<T>(promise: Promise<T>): Promise<T> {
    this.pending.add(promise);
    void promise.finally(() => this.pending.delete(promise));
    return promise;
  }
}

function errorMessage(err: unknown): string {
  if (err instanceof ApiError) return `request failed (${err.status}): ${err.message}`;
  if (err instanceof Error) return `request failed: ${err.message}`;
  return "request failed";
}

export function initApp(root: HTMLElement, client?: ApiClient): App {
  const app = new App(root, client ?? new ApiClient(configuredApiBase()));
  app.start();
  return app;
}

// Entry point when loaded as the page module; absent in tests, which build
// their own root and client.
const mount = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mount !== null) {
  initApp(mount);
}
