/** Document view: the full document with every entity mention highlighted,
 * sentence boundaries marked, and the retrieved sentence focused and
 * scrolled into view. Unknown documents render a not-found panel. */

import { clear, el, renderHighlighted, type RenderableSpan } from "../dom.js";
import type { DocResponse, Mention, SentenceSpan } from "../types.js";

export class DocumentView {
  readonly root: HTMLElement;

  constructor() {
    this.root = el("section", { class: "view view-document" });
  }

  renderPending(docId: string): void {
    clear(this.root);
    this.root.append(el("p", { class: "status" }, `loading ${docId}…`));
  }

  renderNotFound(docId: string): void {
    clear(this.root);
    this.root.append(
      el(
        "div",
        { class: "panel panel-not-found" },
        el("h2", {}, "Document not found"),
        el("p", {}, `No document has the id `, el("code", {}, docId), `.`),
      ),
    );
  }

  renderError(message: string): void {
    clear(this.root);
    this.root.append(el("div", { class: "panel panel-error" }, el("p", {}, message)));
  }

  renderDoc(doc: DocResponse): void {
    clear(this.root);

    const titleSentences = doc.sentences.filter((s) => s.origin === "title");
    const titleMentions = doc.mentions.filter((m) => m.origin === "title");
    const heading = el("h2", { class: "doc-title" });
    if (doc.title) {
      // Title offsets are relative to the title text itself.
      heading.append(renderHighlighted(doc.title, titleMentions.map(mentionSpan)));
    } else {
      heading.append(el("span", { class: "untitled" }, doc.doc_id));
    }
    const focusedTitle = titleSentences.find((s) => s.focused);
    if (focusedTitle) heading.classList.add("focused");
    this.root.append(heading);

    const meta = el("p", { class: "doc-meta" }, `document `, el("code", {}, doc.doc_id));
    if (doc.source_uri) {
      meta.append(" · ", el("a", { href: doc.source_uri, rel: "noopener" }, "source"));
    }
    this.root.append(meta);

    const body = el("div", { class: "doc-body" });
    const bodySentences = [...doc.sentences.filter((s) => s.origin === "body")].sort(
      (a, b) => a.start - b.start,
    );
    const bodyMentions = doc.mentions.filter((m) => m.origin === "body");
    let cursor = 0;
    for (const sentence of bodySentences) {
      if (cursor < sentence.start) {
        body.append(doc.body.slice(cursor, sentence.start));
      }
      body.append(this.renderSentence(doc, sentence, bodyMentions));
      cursor = sentence.end;
    }
    if (cursor < doc.body.length) {
      body.append(doc.body.slice(cursor));
    }
    this.root.append(body);
  }

  /** Bring the focused sentence into view; call after the view is attached. */
  scrollToFocus(): void {
    const focused = this.root.querySelector(".focused");
    if (focused && typeof focused.scrollIntoView === "function") {
      focused.scrollIntoView({ block: "center" });
    }
  }

  private renderSentence(doc: DocResponse, sentence: SentenceSpan, mentions: Mention[]): HTMLElement {
    const text = doc.body.slice(sentence.start, sentence.end);
    // Body mention offsets are absolute into the body; shift them to be
    // relative to this sentence's slice.
    const spans = mentions
      .filter((m) => m.sentence_id === sentence.sentence_id)
      .map((m) => ({ ...mentionSpan(m), start: m.start - sentence.start, end: m.end - sentence.start }));
    const wrapper = el("span", {
      class: sentence.focused ? "sentence focused" : "sentence",
      "data-sentence-id": String(sentence.sentence_id),
    });
    wrapper.append(renderHighlighted(text, spans));
    return wrapper;
  }
}

function mentionSpan(mention: Mention): RenderableSpan {
  return {
    start: mention.start,
    end: mention.end,
    kind: "entity",
    entity_type: mention.entity_type,
  };
}
