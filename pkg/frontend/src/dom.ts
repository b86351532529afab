/** Small DOM-building helpers shared by the views. */

import { entityTypeColor, segmentText, type Span } from "./highlight.js";

type Child = Node | string;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export function clear(node: HTMLElement): void {
  node.replaceChildren();
}

export interface RenderableSpan extends Span {
  kind: "word" | "entity" | "pattern";
  entity_type?: string | null;
}

/** Text with highlight spans rendered as styled inline elements: entities as
 * color-coded marks keyed by entity type, pattern matches underlined, plain
 * word matches as neutral marks. Non-overlap violations from segmentText
 * propagate — a span is never silently dropped. */
export function renderHighlighted(text: string, spans: readonly RenderableSpan[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  for (const segment of segmentText(text, spans)) {
    if (segment.highlight === null) {
      fragment.append(segment.text);
      continue;
    }
    const span = segment.highlight;
    if (span.kind === "entity") {
      const mark = el("mark", { class: "hl hl-entity" }, segment.text);
      const type = span.entity_type ?? "";
      if (type) {
        const color = entityTypeColor(type);
        mark.style.backgroundColor = color.background;
        mark.style.borderBottomColor = color.border;
        mark.title = type;
        mark.dataset.entityType = type;
      }
      fragment.append(mark);
    } else if (span.kind === "pattern") {
      fragment.append(el("span", { class: "hl hl-pattern" }, segment.text));
    } else {
      fragment.append(el("mark", { class: "hl hl-word" }, segment.text));
    }
  }
  return fragment;
}

/** Component scores exactly as the API reported them, trimmed for display;
 * the full value is preserved in the title attribute. */
export function formatScore(value: number): string {
  if (Number.isInteger(value)) return String(value);
  return value.toFixed(4);
}

export function scoreBadge(label: string, value: number, kind: string): HTMLElement {
  const badge = el("span", { class: `badge badge-${kind}`, title: `${label} = ${value}` });
  badge.append(el("span", { class: "badge-label" }, label), formatScore(value));
  return badge;
}
