/** Pure span segmentation for highlight rendering.
 *
 * The API guarantees the spans it returns are non-overlapping; this module
 * turns text plus spans into an ordered list of segments where every input
 * span becomes exactly one highlighted segment (rendering is injective) and
 * the segment texts concatenate back to the original string. Violations of
 * the non-overlap contract throw rather than silently dropping a span.
 */

export interface Span {
  start: number;
  end: number;
}

export interface Segment<H extends Span> {
  start: number;
  end: number;
  text: string;
  /** The input span this segment renders, or null for plain text. */
  highlight: H | null;
}

export function segmentText<H extends Span>(text: string, spans: readonly H[]): Segment<H>[] {
  const ordered = [...spans].sort((a, b) => a.start - b.start || a.end - b.end);
  const segments: Segment<H>[] = [];
  let cursor = 0;
  for (const span of ordered) {
    if (!Number.isInteger(span.start) || !Number.isInteger(span.end)) {
      throw new RangeError(`span [${span.start}, ${span.end}) has non-integer offsets`);
    }
    if (span.start < 0 || span.end > text.length || span.start >= span.end) {
      throw new RangeError(`span [${span.start}, ${span.end}) is out of bounds for text of length ${text.length}`);
    }
    if (span.start < cursor) {
      throw new RangeError(`span [${span.start}, ${span.end}) overlaps an earlier span ending at ${cursor}`);
    }
    if (cursor < span.start) {
      segments.push({ start: cursor, end: span.start, text: text.slice(cursor, span.start), highlight: null });
    }
    segments.push({ start: span.start, end: span.end, text: text.slice(span.start, span.end), highlight: span });
    cursor = span.end;
  }
  if (cursor < text.length) {
    segments.push({ start: cursor, end: text.length, text: text.slice(cursor), highlight: null });
  }
  return segments;
}

/** Stable background/border pair for an entity type. Types claim palette
 * slots in first-seen order, so within a page the same type always gets the
 * same color and any two of the first eight types get distinct colors. */
export interface TypeColor {
  background: string;
  border: string;
}

const PALETTE: TypeColor[] = [
  { background: "hsl(205 85% 88%)", border: "hsl(205 60% 55%)" },
  { background: "hsl(145 65% 85%)", border: "hsl(145 45% 45%)" },
  { background: "hsl(35 95% 85%)", border: "hsl(35 70% 50%)" },
  { background: "hsl(280 70% 90%)", border: "hsl(280 45% 60%)" },
  { background: "hsl(0 80% 90%)", border: "hsl(0 55% 60%)" },
  { background: "hsl(175 60% 84%)", border: "hsl(175 45% 42%)" },
  { background: "hsl(55 85% 82%)", border: "hsl(55 60% 45%)" },
  { background: "hsl(320 70% 90%)", border: "hsl(320 45% 60%)" },
];

const assignedSlots = new Map<string, number>();

export function entityTypeColor(entityType: string): TypeColor {
  let slot = assignedSlots.get(entityType);
  if (slot === undefined) {
    slot = assignedSlots.size % PALETTE.length;
    assignedSlots.set(entityType, slot);
  }
  return PALETTE[slot];
}
