"""Query parsing, candidate gathering, scoring, and ranking.

A query is scored against a sentence as

    total = sigma * word_score + theta * entity_score + eta * pattern_score

where word_score and entity_score are sentence-level BM25 sums (IDF is the
natural log form computed by the index) and pattern_score counts how many
members of the query pattern's synonym group match the sentence, under the
query's entity tuple when one is bound.

Three query shapes are accepted; QUERY.md documents the grammar:

  (entity, relation, entity)    parenthesized, comma-separated parts
  TYPE relation TYPE            entity-type names, with or without "$"
  free text                     anything else; entities tagged by lexicon
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Sentence
from .errors import EmptyQuery, UnknownEntityType
from .index import EvidenceIndex
from .lexicon import Lexicon, tag_sentence
from .patterns import find_occurrences, is_placeholder, placeholder_key
from .textnorm import tokenize, tokenize_with_spans

DEFAULT_TOP_K = 10
DEFAULT_CANDIDATE_CAP = 10_000

FORM_TRIPLE = "triple"
FORM_PATTERN = "pattern"
FORM_TEXT = "text"


@dataclass(frozen=True)
class Bm25Params:
    k: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")


@dataclass(frozen=True)
class RankingWeights:
    sigma: float = 1.0 / 3.0
    theta: float = 1.0 / 3.0
    eta: float = 1.0 / 3.0

    def __post_init__(self):
        if self.sigma < 0 or self.theta < 0 or self.eta < 0:
            raise ValueError("weights must be non-negative")
        if self.sigma + self.theta + self.eta <= 0:
            raise ValueError("at least one weight must be positive")


@dataclass(frozen=True)
class QueryEntity:
    canonical_id: str
    entity_type: str
    surface: str


@dataclass(frozen=True)
class Query:
    raw: str
    form: str
    words: tuple[str, ...]
    entities: tuple[QueryEntity, ...] = ()
    pattern_items: tuple[str, ...] | None = None
    bound_entities: tuple[str, ...] | None = None


@dataclass(frozen=True)
class HighlightSpan:
    start: int
    end: int
    kind: str  # "word" | "entity" | "pattern"
    entity_type: str | None = None


@dataclass(frozen=True)
class ScoredEvidence:
    sentence_id: int
    total: float
    word_score: float
    entity_score: float
    pattern_score: float
    matched_words: tuple[str, ...] = ()
    matched_entities: tuple[str, ...] = ()
    matched_pattern_ids: tuple[int, ...] = ()
    highlights: tuple[HighlightSpan, ...] = ()


# ---------------------------------------------------------------------------
# parsing

def _case_tokens(raw: str) -> list[str]:
    """Whitespace tokens with edge punctuation stripped, case preserved.

    A "$" immediately left of a token survives the stripping so type
    references like "$chemical" keep their sigil.
    """
    out = []
    for _, a, b in tokenize_with_spans(raw):
        text = raw[a:b]
        if a > 0 and raw[a - 1] == "$":
            text = "$" + text
        out.append(text)
    return out


def _type_ref(token: str, types_by_upper: dict[str, str]) -> str | None:
    """Resolve a token naming an entity type, else None.

    "$NAME" resolves case-insensitively and raises on an unknown name; a
    bare token only counts when written in all uppercase, so free text is
    not hijacked by words that happen to name a type.
    """
    if token.startswith("$") and len(token) > 1:
        name = token[1:]
        resolved = types_by_upper.get(name.upper())
        if resolved is None:
            raise UnknownEntityType(name)
        return resolved
    if len(token) >= 2 and token == token.upper():
        return types_by_upper.get(token.upper())
    return None


def parse_query(raw: str, lexicon: Lexicon, index: EvidenceIndex) -> Query:
    """Classify and decompose a raw query string.

    The parenthesized form splits on commas; parts that exactly match a
    lexicon surface become entities and everything else becomes relation
    words. The pattern form is triggered by entity-type names. Free text is
    tagged with the lexicon. In all forms a bound pattern is derived only
    when exactly two distinct entities remain and at least one content token
    survives normalization between the placeholders.
    """
    stripped = raw.strip()
    if not stripped:
        raise EmptyQuery()
    types_by_upper = {t.upper(): t for t in lexicon.types}
    normalizer = index.normalizer

    if stripped.startswith("(") and stripped.endswith(")") and "," in stripped:
        return _parse_paren(raw, stripped, lexicon, normalizer)

    tokens_cased = _case_tokens(stripped)
    refs = [_type_ref(tok, types_by_upper) for tok in tokens_cased]
    if any(ref is not None for ref in refs):
        return _parse_pattern_form(raw, tokens_cased, refs)
    return _parse_text(raw, lexicon, normalizer)


def _normalized_content(tokens: list[str], normalizer) -> list[str]:
    out = []
    for tok in tokens:
        key = normalizer.content_key(tok)
        if key is not None:
            out.append(key)
    return out


def _dedup_entities(found: list[QueryEntity]) -> tuple[QueryEntity, ...]:
    seen: set[str] = set()
    out = []
    for ent in found:
        if ent.canonical_id not in seen:
            seen.add(ent.canonical_id)
            out.append(ent)
    return tuple(out)


def _parse_paren(raw: str, stripped: str, lexicon: Lexicon, normalizer) -> Query:
    parts = [p.strip() for p in stripped[1:-1].split(",")]
    words: list[str] = []
    entity_parts: list[QueryEntity] = []
    content_tokens: list[str] = []
    for part in parts:
        toks = tokenize(part)
        if not toks:
            continue
        words.extend(toks)
        entry = lexicon.lookup_surface(toks)
        if entry is not None:
            entity_parts.append(QueryEntity(
                canonical_id=entry.canonical_id,
                entity_type=entry.entity_type,
                surface=" ".join(toks),
            ))
        else:
            content_tokens.extend(toks)
    if not words:
        raise EmptyQuery()
    entities = _dedup_entities(entity_parts)
    pattern_items = None
    bound = None
    content = _normalized_content(content_tokens, normalizer)
    if len(entities) == 2 and content:
        first, last = entity_parts[0], entity_parts[-1]
        if first.canonical_id != last.canonical_id:
            pattern_items = (placeholder_key(first.entity_type), *content,
                             placeholder_key(last.entity_type))
            bound = (first.canonical_id, last.canonical_id)
    return Query(raw=raw, form=FORM_TRIPLE, words=tuple(words), entities=entities,
                 pattern_items=pattern_items, bound_entities=bound)


def _parse_pattern_form(raw: str, tokens_cased: list[str], refs: list[str | None]) -> Query:
    items: list[str] = []
    words: list[str] = []
    for tok, ref in zip(tokens_cased, refs):
        if ref is not None:
            items.append(placeholder_key(ref))
        else:
            words.append(tok.lower())
            items.append(tok.lower())
    return Query(raw=raw, form=FORM_PATTERN, words=tuple(words), entities=(),
                 pattern_items=tuple(items), bound_entities=None)


def _parse_text(raw: str, lexicon: Lexicon, normalizer) -> Query:
    tokens = tokenize(raw)
    if not tokens:
        raise EmptyQuery()
    pseudo = Sentence(sentence_id=-1, doc_id="", char_span=(0, 0), tokens=tuple(tokens))
    mentions = tag_sentence(pseudo, lexicon)
    entities = _dedup_entities([
        QueryEntity(canonical_id=m.canonical_id, entity_type=m.entity_type, surface=m.surface)
        for m in mentions
    ])
    pattern_items = None
    bound = None
    if len(mentions) == 2 and mentions[0].canonical_id != mentions[1].canonical_id:
        between = tokens[mentions[0].token_span[1]:mentions[1].token_span[0]]
        content = _normalized_content(between, normalizer)
        if content:
            pattern_items = (placeholder_key(mentions[0].entity_type), *content,
                             placeholder_key(mentions[1].entity_type))
            bound = (mentions[0].canonical_id, mentions[1].canonical_id)
    return Query(raw=raw, form=FORM_TEXT, words=tuple(tokens), entities=entities,
                 pattern_items=pattern_items, bound_entities=bound)


# ---------------------------------------------------------------------------
# normalize the pattern-form content the same way mining does

def query_pattern(query: Query, index: EvidenceIndex) -> tuple[str, ...] | None:
    """The query's pattern with content tokens normalized for index lookup."""
    if query.pattern_items is None:
        return None
    items: list[str] = []
    for item in query.pattern_items:
        if is_placeholder(item):
            items.append(item)
        else:
            key = index.normalizer.content_key(item)
            if key is not None:
                items.append(key)
    if not any(not is_placeholder(it) for it in items):
        return None
    return tuple(items)


# ---------------------------------------------------------------------------
# scoring

def word_score(index: EvidenceIndex, words, sentence_id: int,
               params: Bm25Params | None = None) -> float:
    """BM25 sum over query words against one sentence."""
    if params is None:
        params = Bm25Params()
    return _bm25_sum(index, "word", words, sentence_id, params)


def entity_score(index: EvidenceIndex, canonical_ids, sentence_id: int,
                 params: Bm25Params | None = None) -> float:
    """BM25 sum over query entities; frequency is the mention count."""
    if params is None:
        params = Bm25Params()
    return _bm25_sum(index, "entity", canonical_ids, sentence_id, params)


def _bm25_sum(index: EvidenceIndex, kind: str, keys, sentence_id: int,
              params: Bm25Params) -> float:
    length = index.sentence(sentence_id).length
    avg = index.stats.avg_sentence_len
    k, b = params.k, params.b
    norm = k * (1.0 - b + b * length / avg)
    total = 0.0
    for key in keys:
        f = index.frequency(kind, key, sentence_id)
        if f == 0:
            continue
        total += index.idf(key, kind) * (f * (k + 1.0)) / (f + norm)
    return total


class _GroupMatcher:
    """Per-query view of the synonym group: member id -> matching sentences."""

    def __init__(self, index: EvidenceIndex, query: Query):
        self.member_sentences: dict[int, frozenset[int]] = {}
        items = query_pattern(query, index)
        if items is None:
            return
        pattern = index.pattern_by_items(items)
        if pattern is None:
            return
        group_id = index.pattern_to_group.get(pattern.pattern_id)
        if group_id is None:
            return
        for pid in index.group_to_patterns[group_id]:
            self.member_sentences[pid] = index.pattern_sentences(pid, query.bound_entities)

    def matched_ids(self, sentence_id: int) -> tuple[int, ...]:
        return tuple(pid for pid, sids in sorted(self.member_sentences.items())
                     if sentence_id in sids)

    def all_sentences(self) -> set[int]:
        acc: set[int] = set()
        for sids in self.member_sentences.values():
            acc.update(sids)
        return acc


def pattern_score(index: EvidenceIndex, query: Query, sentence_id: int) -> float:
    """Count of synonym-group members matching the sentence.

    Zero when the query has no pattern or its pattern was never mined.
    """
    return float(len(_GroupMatcher(index, query).matched_ids(sentence_id)))


# ---------------------------------------------------------------------------
# gathering and ranking

def gather_candidates(index: EvidenceIndex, query: Query,
                      cap: int = DEFAULT_CANDIDATE_CAP) -> list[int]:
    """Union of posting lists touched by the query, capped deterministically.

    Stopword query words still contribute to word_score but do not pull
    candidates in. When the union exceeds `cap`, candidates are pre-ranked
    by the summed IDF of their matching word/entity keys (ties to lower
    sentence id) and truncated.
    """
    stopwords = index.normalizer.stopwords
    word_keys = sorted({w for w in query.words if w not in stopwords})
    entity_keys = sorted({e.canonical_id for e in query.entities})

    candidates: set[int] = set()
    for key in word_keys:
        post = index.word_index.get(key)
        if post is not None:
            candidates.update(post.sentence_ids())
    for key in entity_keys:
        post = index.entity_index.get(key)
        if post is not None:
            candidates.update(post.sentence_ids())
    # bound or not, every tuple posting of the group is eligible
    matcher = _GroupMatcher(index, Query(raw=query.raw, form=query.form, words=(),
                                         entities=(), pattern_items=query.pattern_items,
                                         bound_entities=None))
    candidates.update(matcher.all_sentences())

    if len(candidates) <= cap:
        return sorted(candidates)

    idf_sum: dict[int, float] = {sid: 0.0 for sid in candidates}
    for kind, keys in (("word", word_keys), ("entity", entity_keys)):
        for key in keys:
            post = index.posting(kind, key)
            if post is None:
                continue
            value = index.idf(key, kind)
            for sid, _ in post.entries:
                if sid in idf_sum:
                    idf_sum[sid] += value
    ranked = sorted(candidates, key=lambda sid: (-idf_sum[sid], sid))
    return sorted(ranked[:cap])


@dataclass(frozen=True)
class SearchOutcome:
    """Ranked page of results plus how many candidates were scored."""

    results: tuple[ScoredEvidence, ...]
    total_candidates: int


def search(index: EvidenceIndex, query: Query,
           weights: RankingWeights | None = None,
           params: Bm25Params | None = None,
           top_k: int = DEFAULT_TOP_K, offset: int = 0,
           cap: int = DEFAULT_CANDIDATE_CAP,
           normalize: bool = False) -> SearchOutcome:
    """Score every candidate and return the requested page, highlighted.

    Ordering: total descending, then pattern_score descending, then
    sentence_id ascending. With normalize=True each component is divided by
    its maximum over the candidate set before weighting (a component whose
    maximum is zero stays zero).
    """
    if weights is None:
        weights = RankingWeights()
    if params is None:
        params = Bm25Params()
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    if offset < 0:
        raise ValueError("offset must be >= 0")

    candidates = gather_candidates(index, query, cap)
    matcher = _GroupMatcher(index, query)
    entity_ids = [e.canonical_id for e in query.entities]

    rows = []
    for sid in candidates:
        w = word_score(index, query.words, sid, params)
        e = entity_score(index, entity_ids, sid, params)
        matched = matcher.matched_ids(sid)
        rows.append((w, e, float(len(matched)), matched, sid))

    if normalize:
        max_w = max((r[0] for r in rows), default=0.0)
        max_e = max((r[1] for r in rows), default=0.0)
        max_p = max((r[2] for r in rows), default=0.0)
        rows = [(
            r[0] / max_w if max_w > 0 else 0.0,
            r[1] / max_e if max_e > 0 else 0.0,
            r[2] / max_p if max_p > 0 else 0.0,
            r[3], r[4],
        ) for r in rows]

    scored = []
    for w, e, p, matched, sid in rows:
        total = weights.sigma * w + weights.theta * e + weights.eta * p
        scored.append((total, w, e, p, matched, sid))
    scored.sort(key=lambda r: (-r[0], -r[3], r[5]))

    page = scored[offset:offset + top_k]
    results = tuple(
        _finish_result(index, query, matcher, total, w, e, p, matched, sid)
        for total, w, e, p, matched, sid in page
    )
    return SearchOutcome(results=results, total_candidates=len(candidates))


def _finish_result(index: EvidenceIndex, query: Query, matcher: _GroupMatcher,
                   total: float, w: float, e: float, p: float,
                   matched: tuple[int, ...], sid: int) -> ScoredEvidence:
    token_spans = index.sentence_token_spans(sid)
    sent = index.sentence(sid)

    entity_ids = {ent.canonical_id for ent in query.entities}
    entity_spans: list[HighlightSpan] = []
    matched_entities: list[str] = []
    for m in index.mentions[sid]:
        if m.canonical_id in entity_ids:
            a = token_spans[m.token_span[0]][1]
            b = token_spans[m.token_span[1] - 1][2]
            entity_spans.append(HighlightSpan(a, b, "entity", m.entity_type))
            if m.canonical_id not in matched_entities:
                matched_entities.append(m.canonical_id)

    pattern_spans: list[HighlightSpan] = []
    if matched:
        view = index.normalizer.normalized_view(index.typed_sequence(sid))
        for pid in matched:
            items = index.pattern(pid).items
            for occ in find_occurrences(items, view, query.bound_entities):
                for slot in view[occ.item_range[0]:occ.item_range[1]]:
                    if slot.canonical_id is not None:
                        continue
                    a = token_spans[slot.token_span[0]][1]
                    b = token_spans[slot.token_span[1] - 1][2]
                    pattern_spans.append(HighlightSpan(a, b, "pattern"))

    covered = [(s.start, s.end) for s in entity_spans + pattern_spans]
    word_set = set(query.words)
    word_spans: list[HighlightSpan] = []
    matched_words: list[str] = []
    for tok, a, b in token_spans:
        if tok not in word_set:
            continue
        if tok not in matched_words:
            matched_words.append(tok)
        if any(a < cb and b > ca for ca, cb in covered):
            continue
        word_spans.append(HighlightSpan(a, b, "word"))

    highlights = sorted(set(entity_spans + pattern_spans + word_spans),
                        key=lambda s: (s.start, s.end, s.kind))
    # matched_words should list every query word present, highlighted or not
    sentence_tokens = set(sent.tokens)
    for wtok in query.words:
        if wtok in sentence_tokens and wtok not in matched_words:
            matched_words.append(wtok)

    return ScoredEvidence(
        sentence_id=sid, total=total, word_score=w, entity_score=e, pattern_score=p,
        matched_words=tuple(sorted(set(matched_words))),
        matched_entities=tuple(matched_entities),
        matched_pattern_ids=matched,
        highlights=tuple(highlights),
    )
