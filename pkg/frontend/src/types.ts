/** JSON payload shapes, mirroring the server's response models field for
 * field. The UI treats every number in these payloads as authoritative and
 * never recomputes a score client-side. */

export type HighlightKind = "word" | "entity" | "pattern";

export interface Highlight {
  start: number;
  end: number;
  kind: HighlightKind;
  entity_type?: string | null;
}

export interface QueryEntity {
  canonical_id: string;
  entity_type: string;
  surface: string;
}

export type QueryForm = "triple" | "pattern" | "text";

export interface ParsedQuery {
  raw: string;
  form: QueryForm;
  words: string[];
  entities: QueryEntity[];
  pattern_items?: string[] | null;
  bound_entities?: string[] | null;
}

export type Origin = "title" | "body";

export interface SearchResult {
  sentence_id: number;
  doc_id: string;
  doc_title: string;
  origin: Origin;
  text: string;
  total: number;
  word_score: number;
  entity_score: number;
  pattern_score: number;
  matched_words: string[];
  matched_entities: string[];
  matched_pattern_ids: number[];
  highlights: Highlight[];
}

export interface SearchResponse {
  query: ParsedQuery;
  results: SearchResult[];
  total_candidates: number;
  top: number;
  offset: number;
}

export interface Mention {
  sentence_id: number;
  /** Char offsets into the text named by `origin` ("title" or "body"). */
  start: number;
  end: number;
  origin: Origin;
  entity_type: string;
  canonical_id: string;
  surface: string;
}

export interface SentenceSpan {
  sentence_id: number;
  origin: Origin;
  start: number;
  end: number;
  focused: boolean;
}

export interface PatternAnnotation {
  pattern_id: number;
  group_id: number;
  items: string[];
  entity_tuple: string[];
}

export interface SentenceResponse {
  sentence_id: number;
  doc_id: string;
  doc_title: string;
  origin: Origin;
  text: string;
  tokens: string[];
  mentions: Mention[];
  patterns: PatternAnnotation[];
}

export interface DocResponse {
  doc_id: string;
  title: string;
  body: string;
  source_uri?: string | null;
  sentences: SentenceSpan[];
  mentions: Mention[];
}

export interface EntityFrequency {
  canonical_id: string;
  entity_type: string;
  sentence_count: number;
  mention_count: number;
}

export interface RelationFrequency {
  group_id: number;
  entity_types: string[];
  content_tokens: string[];
  representative_items: string[];
  entity_tuple: string[];
  sentence_count: number;
}

export interface HealthResponse {
  status: string;
  format_version: number;
  documents: number;
  sentences: number;
  patterns: number;
  groups: number;
}

/** The query string a relation row stands for: its pattern items joined by
 * single spaces. Typed into the search box verbatim, this parses as a
 * pattern-form query for the same relation. */
export function relationQueryString(relation: RelationFrequency): string {
  return relation.representative_items.join(" ");
}
