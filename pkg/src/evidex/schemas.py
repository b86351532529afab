"""Response models for the HTTP API, also used by `evidex query --json`.

Keeping the builders here guarantees the CLI and the server serialize search
results identically.
"""

from __future__ import annotations

from pydantic import BaseModel

from .analytics import EntityFrequency, RelationFrequency
from .index import EvidenceIndex
from .query import Query, ScoredEvidence, SearchOutcome


class HighlightModel(BaseModel):
    start: int
    end: int
    kind: str
    entity_type: str | None = None


class QueryEntityModel(BaseModel):
    canonical_id: str
    entity_type: str
    surface: str


class ParsedQueryModel(BaseModel):
    raw: str
    form: str
    words: list[str]
    entities: list[QueryEntityModel]
    pattern_items: list[str] | None = None
    bound_entities: list[str] | None = None


class SearchResultModel(BaseModel):
    sentence_id: int
    doc_id: str
    doc_title: str
    origin: str
    text: str
    total: float
    word_score: float
    entity_score: float
    pattern_score: float
    matched_words: list[str]
    matched_entities: list[str]
    matched_pattern_ids: list[int]
    highlights: list[HighlightModel]


class SearchResponse(BaseModel):
    query: ParsedQueryModel
    results: list[SearchResultModel]
    total_candidates: int
    top: int
    offset: int


class MentionModel(BaseModel):
    sentence_id: int
    start: int  # char offsets into the origin field's text
    end: int
    origin: str
    entity_type: str
    canonical_id: str
    surface: str


class SentenceSpanModel(BaseModel):
    sentence_id: int
    origin: str
    start: int
    end: int
    focused: bool = False


class PatternAnnotationModel(BaseModel):
    pattern_id: int
    group_id: int
    items: list[str]
    entity_tuple: list[str]


class SentenceResponse(BaseModel):
    sentence_id: int
    doc_id: str
    doc_title: str
    origin: str
    text: str
    tokens: list[str]
    mentions: list[MentionModel]
    patterns: list[PatternAnnotationModel]


class DocResponse(BaseModel):
    doc_id: str
    title: str
    body: str
    source_uri: str | None = None
    sentences: list[SentenceSpanModel]
    mentions: list[MentionModel]


class EntityFrequencyModel(BaseModel):
    canonical_id: str
    entity_type: str
    sentence_count: int
    mention_count: int


class RelationFrequencyModel(BaseModel):
    group_id: int
    entity_types: list[str]
    content_tokens: list[str]
    representative_items: list[str]
    entity_tuple: list[str]
    sentence_count: int


class HealthResponse(BaseModel):
    status: str
    format_version: int
    documents: int
    sentences: int
    patterns: int
    groups: int


# ---------------------------------------------------------------------------
# builders

def query_model(query: Query) -> ParsedQueryModel:
    return ParsedQueryModel(
        raw=query.raw,
        form=query.form,
        words=list(query.words),
        entities=[QueryEntityModel(canonical_id=e.canonical_id, entity_type=e.entity_type,
                                   surface=e.surface) for e in query.entities],
        pattern_items=list(query.pattern_items) if query.pattern_items else None,
        bound_entities=list(query.bound_entities) if query.bound_entities else None,
    )


def result_model(index: EvidenceIndex, result: ScoredEvidence) -> SearchResultModel:
    sent = index.sentence(result.sentence_id)
    doc = index.documents[sent.doc_id]
    return SearchResultModel(
        sentence_id=result.sentence_id,
        doc_id=sent.doc_id,
        doc_title=doc.title,
        origin=sent.origin,
        text=index.sentence_text(result.sentence_id),
        total=result.total,
        word_score=result.word_score,
        entity_score=result.entity_score,
        pattern_score=result.pattern_score,
        matched_words=list(result.matched_words),
        matched_entities=list(result.matched_entities),
        matched_pattern_ids=list(result.matched_pattern_ids),
        highlights=[HighlightModel(start=h.start, end=h.end, kind=h.kind,
                                   entity_type=h.entity_type) for h in result.highlights],
    )


def search_response(index: EvidenceIndex, query: Query, outcome: SearchOutcome,
                    top: int, offset: int) -> SearchResponse:
    return SearchResponse(
        query=query_model(query),
        results=[result_model(index, r) for r in outcome.results],
        total_candidates=outcome.total_candidates,
        top=top,
        offset=offset,
    )


def _mention_models(index: EvidenceIndex, sentence_id: int, absolute: bool) -> list[MentionModel]:
    sent = index.sentence(sentence_id)
    spans = index.sentence_token_spans(sentence_id)
    base = sent.char_span[0] if absolute else 0
    out = []
    for m in index.mentions[sentence_id]:
        a = spans[m.token_span[0]][1] + base
        b = spans[m.token_span[1] - 1][2] + base
        out.append(MentionModel(
            sentence_id=sentence_id, start=a, end=b, origin=sent.origin,
            entity_type=m.entity_type, canonical_id=m.canonical_id, surface=m.surface,
        ))
    return out


def sentence_response(index: EvidenceIndex, sentence_id: int) -> SentenceResponse:
    sent = index.sentence(sentence_id)
    doc = index.documents[sent.doc_id]
    annotations = []
    for pid, entity_tuple in index.sentence_pattern_records(sentence_id):
        annotations.append(PatternAnnotationModel(
            pattern_id=pid,
            group_id=index.pattern_to_group[pid],
            items=list(index.pattern(pid).items),
            entity_tuple=list(entity_tuple),
        ))
    return SentenceResponse(
        sentence_id=sentence_id,
        doc_id=sent.doc_id,
        doc_title=doc.title,
        origin=sent.origin,
        text=index.sentence_text(sentence_id),
        tokens=list(sent.tokens),
        mentions=_mention_models(index, sentence_id, absolute=False),
        patterns=annotations,
    )


def doc_response(index: EvidenceIndex, doc_id: str, focus_sentence_id: int | None = None) -> DocResponse:
    doc = index.documents[doc_id]
    sentence_spans = []
    mentions: list[MentionModel] = []
    for sent in index.sentences:
        if sent.doc_id != doc_id:
            continue
        sentence_spans.append(SentenceSpanModel(
            sentence_id=sent.sentence_id,
            origin=sent.origin,
            start=sent.char_span[0],
            end=sent.char_span[1],
            focused=sent.sentence_id == focus_sentence_id,
        ))
        mentions.extend(_mention_models(index, sent.sentence_id, absolute=True))
    return DocResponse(
        doc_id=doc_id,
        title=doc.title,
        body=doc.body,
        source_uri=doc.source_uri,
        sentences=sentence_spans,
        mentions=mentions,
    )


def entity_model(row: EntityFrequency) -> EntityFrequencyModel:
    return EntityFrequencyModel(
        canonical_id=row.canonical_id,
        entity_type=row.entity_type,
        sentence_count=row.sentence_count,
        mention_count=row.mention_count,
    )


def relation_model(row: RelationFrequency) -> RelationFrequencyModel:
    return RelationFrequencyModel(
        group_id=row.group_id,
        entity_types=list(row.entity_types),
        content_tokens=list(row.content_tokens),
        representative_items=list(row.representative_items),
        entity_tuple=list(row.entity_tuple),
        sentence_count=row.sentence_count,
    )
