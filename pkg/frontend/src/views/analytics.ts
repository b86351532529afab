/** Analytics view: top entities with a type filter, top relations, and
 * click-through from a relation row to the pattern query it stands for. */

import { clear, el } from "../dom.js";
import { entityTypeColor } from "../highlight.js";
import { relationQueryString, type EntityFrequency, type RelationFrequency } from "../types.js";

export interface AnalyticsHandlers {
  /** Re-query the entity table with a type filter ("" = all types). */
  onTypeFilter(entityType: string): void;
  /** Launch the pattern query a relation row stands for. */
  onRelationQuery(patternQuery: string): void;
}

export class AnalyticsView {
  readonly root: HTMLElement;
  private readonly typeSelect: HTMLSelectElement;
  private readonly entitiesSection: HTMLElement;
  private readonly entitiesBody: HTMLElement;
  private readonly relationsSection: HTMLElement;
  private readonly relationsBody: HTMLElement;
  private readonly emptyEl: HTMLElement;
  private knownTypes: string[] = [];

  constructor(private readonly handlers: AnalyticsHandlers) {
    this.typeSelect = el("select", { id: "entity-type-filter" });
    this.typeSelect.addEventListener("change", () => {
      this.handlers.onTypeFilter(this.typeSelect.value);
    });

    this.entitiesBody = el("tbody");
    this.entitiesSection = el(
      "div",
      { class: "analytics-block" },
      el("h2", {}, "Top entities"),
      el("label", { class: "control" }, "type ", this.typeSelect),
      el(
        "table",
        { class: "analytics-table", id: "entities-table" },
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "entity"),
            el("th", {}, "type"),
            el("th", { class: "num" }, "sentences"),
            el("th", { class: "num" }, "mentions"),
          ),
        ),
        this.entitiesBody,
      ),
    );

    this.relationsBody = el("tbody");
    this.relationsSection = el(
      "div",
      { class: "analytics-block" },
      el("h2", {}, "Top relations"),
      el("p", { class: "form-hint" }, "Click a relation to run it as a pattern query."),
      el(
        "table",
        { class: "analytics-table", id: "relations-table" },
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "pattern"),
            el("th", {}, "entities"),
            el("th", { class: "num" }, "sentences"),
          ),
        ),
        this.relationsBody,
      ),
    );

    this.emptyEl = el(
      "div",
      { class: "panel panel-empty", id: "analytics-empty" },
      el("p", {}, "The index contains no entities or relations yet. Build an index over a corpus with a lexicon to populate this page."),
    );

    this.root = el("section", { class: "view view-analytics" });
  }

  /** Full render from fresh unfiltered data; (re)derives the type filter
   * options from the entity rows. */
  render(entities: EntityFrequency[], relations: RelationFrequency[]): void {
    clear(this.root);
    if (entities.length === 0 && relations.length === 0) {
      this.root.append(this.emptyEl);
      return;
    }
    this.knownTypes = [...new Set(entities.map((e) => e.entity_type))].sort();
    this.rebuildTypeOptions();
    this.renderEntityRows(entities);
    this.renderRelationRows(relations);
    this.root.append(this.entitiesSection, this.relationsSection);
  }

  /** Replace only the entity table rows (after a type-filter re-query). */
  renderEntityRows(entities: EntityFrequency[]): void {
    clear(this.entitiesBody);
    for (const entity of entities) {
      const typeCell = el("td", {}, badgeForType(entity.entity_type));
      this.entitiesBody.append(
        el(
          "tr",
          {},
          el("td", {}, el("code", {}, entity.canonical_id)),
          typeCell,
          el("td", { class: "num" }, String(entity.sentence_count)),
          el("td", { class: "num" }, String(entity.mention_count)),
        ),
      );
    }
  }

  private renderRelationRows(relations: RelationFrequency[]): void {
    clear(this.relationsBody);
    for (const relation of relations) {
      const queryString = relationQueryString(relation);
      const button = el("button", { type: "button", class: "relation-link" }, queryString);
      button.addEventListener("click", () => this.handlers.onRelationQuery(queryString));
      this.relationsBody.append(
        el(
          "tr",
          { class: "relation-row" },
          el("td", {}, button),
          el("td", {}, relation.entity_tuple.join(" · ")),
          el("td", { class: "num" }, String(relation.sentence_count)),
        ),
      );
    }
  }

  private rebuildTypeOptions(): void {
    const current = this.typeSelect.value;
    clear(this.typeSelect);
    this.typeSelect.append(el("option", { value: "" }, "all types"));
    for (const type of this.knownTypes) {
      this.typeSelect.append(el("option", { value: type }, type));
    }
    if (this.knownTypes.includes(current)) this.typeSelect.value = current;
  }
}

function badgeForType(entityType: string): HTMLElement {
  const color = entityTypeColor(entityType);
  const badge = el("span", { class: "type-badge" }, entityType);
  badge.style.backgroundColor = color.background;
  badge.style.borderColor = color.border;
  return badge;
}
