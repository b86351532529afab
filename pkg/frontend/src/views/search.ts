/** Search view: query box with form auto-detection hint, ranking weight
 * sliders, top-k selector, and the ranked result list with per-component
 * score badges and highlighted sentence text. */

import { clear, el, renderHighlighted, scoreBadge } from "../dom.js";
import type { ParsedQuery, SearchResponse, SearchResult } from "../types.js";

export interface SearchHandlers {
  onSubmit(): void;
  onOpenDoc(docId: string, sentenceId: number): void;
}

export interface RankingControls {
  top: number;
  /** Absent until a slider has been moved, so the server's own default
   * weights (equal thirds) apply exactly. */
  weights?: { sigma: number; theta: number; eta: number };
}

const TOP_CHOICES = [5, 10, 20, 50];

interface Slider {
  input: HTMLInputElement;
  valueLabel: HTMLElement;
}

export class SearchView {
  readonly root: HTMLElement;
  private readonly queryInput: HTMLInputElement;
  private readonly topSelect: HTMLSelectElement;
  private readonly statusEl: HTMLElement;
  private readonly parsedEl: HTMLElement;
  private readonly resultsEl: HTMLElement;
  private readonly sliders: { sigma: Slider; theta: Slider; eta: Slider };
  private slidersTouched = false;

  constructor(private readonly handlers: SearchHandlers) {
    this.queryInput = el("input", {
      id: "query-input",
      type: "text",
      placeholder: "(remdesivir, inhibit, SARS-CoV-2)",
      autocomplete: "off",
      spellcheck: "false",
    });
    const submit = el("button", { type: "submit", class: "primary" }, "Search");
    const form = el("form", { class: "query-form" }, this.queryInput, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.handlers.onSubmit();
    });

    const hint = el(
      "p",
      { class: "form-hint" },
      "The query form is detected automatically: ",
      el("code", {}, "(a, relation, b)"),
      " runs a triple query, bare ",
      el("code", {}, "TYPE"),
      " or ",
      el("code", {}, "$type"),
      " tokens run a pattern query, anything else runs a text query.",
    );

    const touch = () => {
      this.slidersTouched = true;
    };
    this.sliders = {
      sigma: buildSlider("sigma", "σ word weight", touch),
      theta: buildSlider("theta", "θ entity weight", touch),
      eta: buildSlider("eta", "η pattern weight", touch),
    };

    this.topSelect = el("select", { id: "top-select" });
    for (const choice of TOP_CHOICES) {
      const option = el("option", { value: String(choice) }, String(choice));
      if (choice === 10) option.selected = true;
      this.topSelect.append(option);
    }

    const controls = el(
      "div",
      { class: "controls" },
      sliderBlock(this.sliders.sigma, "σ word"),
      sliderBlock(this.sliders.theta, "θ entity"),
      sliderBlock(this.sliders.eta, "η pattern"),
      el("label", { class: "control top-control" }, "results ", this.topSelect),
    );

    this.statusEl = el("p", { class: "status", id: "search-status" });
    this.parsedEl = el("div", { class: "parsed-query", id: "parsed-query" });
    this.resultsEl = el("ol", { class: "results", id: "search-results" });

    this.root = el(
      "section",
      { class: "view view-search" },
      form,
      hint,
      controls,
      this.statusEl,
      this.parsedEl,
      this.resultsEl,
    );
  }

  get query(): string {
    return this.queryInput.value;
  }

  set query(value: string) {
    this.queryInput.value = value;
  }

  controls(): RankingControls {
    const top = Number(this.topSelect.value);
    if (!this.slidersTouched) return { top };
    return {
      top,
      weights: {
        sigma: Number(this.sliders.sigma.input.value),
        theta: Number(this.sliders.theta.input.value),
        eta: Number(this.sliders.eta.input.value),
      },
    };
  }

  renderPending(): void {
    this.statusEl.textContent = "searching…";
  }

  renderError(message: string): void {
    this.statusEl.textContent = message;
    clear(this.parsedEl);
    clear(this.resultsEl);
  }

  renderResponse(response: SearchResponse): void {
    this.statusEl.textContent =
      response.results.length === 0
        ? "no matching sentences"
        : `${response.results.length} of ${response.total_candidates} candidate sentences`;
    this.renderParsed(response.query);
    clear(this.resultsEl);
    for (const result of response.results) {
      this.resultsEl.append(this.renderResult(result));
    }
  }

  private renderParsed(query: ParsedQuery): void {
    clear(this.parsedEl);
    this.parsedEl.append(el("span", { class: "chip chip-form" }, `form: ${query.form}`));
    for (const entity of query.entities) {
      this.parsedEl.append(
        el("span", { class: "chip chip-entity", title: entity.entity_type }, entity.canonical_id),
      );
    }
    if (query.pattern_items && query.pattern_items.length > 0) {
      const bound = query.bound_entities && query.bound_entities.length > 0 ? " (bound)" : "";
      this.parsedEl.append(
        el("span", { class: "chip chip-pattern" }, `pattern: ${query.pattern_items.join(" ")}${bound}`),
      );
    }
  }

  private renderResult(result: SearchResult): HTMLElement {
    const docLink = el("button", { type: "button", class: "doc-link" }, result.doc_title || result.doc_id);
    docLink.addEventListener("click", () => this.handlers.onOpenDoc(result.doc_id, result.sentence_id));

    const header = el(
      "div",
      { class: "result-header" },
      scoreBadge("total", result.total, "total"),
      scoreBadge("w", result.word_score, "word"),
      scoreBadge("e", result.entity_score, "entity"),
      scoreBadge("p", result.pattern_score, "pattern"),
      docLink,
      el("span", { class: "sentence-id" }, `#${result.sentence_id}`),
    );
    if (result.origin === "title") {
      header.append(el("span", { class: "chip chip-origin" }, "title"));
    }

    const text = el("p", { class: "result-text" });
    text.append(renderHighlighted(result.text, result.highlights));

    return el("li", { class: "result" }, header, text);
  }
}

function buildSlider(name: string, label: string, onTouch: () => void): Slider {
  const input = el("input", {
    type: "range",
    id: `weight-${name}`,
    min: "0",
    max: "1",
    step: "0.01",
    value: "0.33",
  });
  const valueLabel = el("span", { class: "slider-value" }, input.value);
  input.addEventListener("input", () => {
    valueLabel.textContent = input.value;
    onTouch();
  });
  input.setAttribute("aria-label", label);
  return { input, valueLabel };
}

function sliderBlock(slider: Slider, label: string): HTMLElement {
  return el("label", { class: "control" }, `${label} `, slider.input, slider.valueLabel);
}
