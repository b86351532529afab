"""Inverted indexes over sentences: words, entities, and meta-patterns.

The word and entity indexes are classic posting lists keyed by token and
canonical entity id; the pattern index is two-level, pattern_id ->
entity_tuple -> sentence ids. All three are immutable after build and back
the BM25-style scorer in `query`.
"""

from __future__ import annotations

import hashlib
import json
import math
from bisect import bisect_left
from dataclasses import dataclass

from .corpus import CorpusStats, Document, Sentence, corpus_stats, ingest
from .errors import EmptyCorpus
from .lexicon import EntityMention, Lexicon, TypedSequence, align_mentions, tag_sentence, typed_sequence
from .patterns import (
    MetaPattern,
    PatternMatchRecord,
    PatternNormalizer,
    SynonymGroup,
    build_synonym_groups,
    extract_candidates,
    mine_patterns,
)
from .textnorm import default_abbreviations, default_stopwords, tokenize_with_spans

DEFAULT_MIN_SUPPORT = 3
DEFAULT_MAX_PATTERN_LEN = 6

STEMMER_ID = "porter-1980"


@dataclass(frozen=True)
class IndexConfig:
    """Everything behavioral a build depends on besides the corpus and lexicon.

    Persisted whole inside the index so that query-time normalization always
    agrees with build-time normalization.
    """

    min_support: int = DEFAULT_MIN_SUPPORT
    max_pattern_len: int = DEFAULT_MAX_PATTERN_LEN
    stopwords: tuple[str, ...] = ()
    stem_exceptions: tuple[str, ...] = ()
    abbreviations: tuple[str, ...] = ()
    synonym_classes: tuple[tuple[str, ...], ...] = ()
    stemmer: str = STEMMER_ID

    @staticmethod
    def create(min_support: int = DEFAULT_MIN_SUPPORT,
               max_pattern_len: int = DEFAULT_MAX_PATTERN_LEN,
               stopwords=None, stem_exceptions=(), abbreviations=None,
               synonym_classes=()) -> "IndexConfig":
        """Config with package defaults filled in and deterministic ordering."""
        if stopwords is None:
            stopwords = default_stopwords()
        if abbreviations is None:
            abbreviations = default_abbreviations()
        return IndexConfig(
            min_support=min_support,
            max_pattern_len=max_pattern_len,
            stopwords=tuple(sorted(stopwords)),
            stem_exceptions=tuple(sorted(stem_exceptions)),
            abbreviations=tuple(sorted(abbreviations)),
            synonym_classes=tuple(tuple(c) for c in synonym_classes),
        )

    def config_hash(self) -> str:
        payload = json.dumps({
            "min_support": self.min_support,
            "max_pattern_len": self.max_pattern_len,
            "stopwords": list(self.stopwords),
            "stem_exceptions": list(self.stem_exceptions),
            "abbreviations": list(self.abbreviations),
            "synonym_classes": [list(c) for c in self.synonym_classes],
            "stemmer": self.stemmer,
        }, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def normalizer(self) -> PatternNormalizer:
        return PatternNormalizer(frozenset(self.stopwords), frozenset(self.stem_exceptions))

    def synonym_map(self) -> dict[str, str]:
        normalizer = self.normalizer()
        mapping: dict[str, str] = {}
        for cls in self.synonym_classes:
            stems = [normalizer.stem(tok.lower()) for tok in cls]
            for stem in stems:
                mapping[stem] = stems[0]
        return mapping


@dataclass
class PostingList:
    """Sorted (sentence_id, frequency) pairs for one key."""

    key: str
    entries: tuple[tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.entries)

    def frequency(self, sentence_id: int) -> int:
        idx = bisect_left(self.entries, (sentence_id,))
        if idx < len(self.entries) and self.entries[idx][0] == sentence_id:
            return self.entries[idx][1]
        return 0

    def sentence_ids(self) -> list[int]:
        return [sid for sid, _ in self.entries]


def build_word_index(sentences: list[Sentence]) -> dict[str, PostingList]:
    """Token -> posting list. Stopwords are indexed like any other token."""
    bucket: dict[str, dict[int, int]] = {}
    for sent in sentences:
        for tok in sent.tokens:
            counts = bucket.setdefault(tok, {})
            counts[sent.sentence_id] = counts.get(sent.sentence_id, 0) + 1
    return {
        tok: PostingList(key=tok, entries=tuple(sorted(counts.items())))
        for tok, counts in sorted(bucket.items())
    }


def build_entity_index(mentions_by_sentence: list[list[EntityMention]]) -> dict[str, PostingList]:
    """Canonical id -> posting list; frequency is the mention count."""
    bucket: dict[str, dict[int, int]] = {}
    for mentions in mentions_by_sentence:
        for m in mentions:
            counts = bucket.setdefault(m.canonical_id, {})
            counts[m.sentence_id] = counts.get(m.sentence_id, 0) + 1
    return {
        cid: PostingList(key=cid, entries=tuple(sorted(counts.items())))
        for cid, counts in sorted(bucket.items())
    }


def build_pattern_index(patterns: list[MetaPattern], views: list[list],
                        ) -> tuple[dict[int, dict[tuple[str, ...], tuple[int, ...]]], list[PatternMatchRecord]]:
    """pattern_id -> entity_tuple -> sorted sentence ids, plus flat records.

    `views` holds each sentence's normalized view (index = sentence_id).
    Completeness matters here: matching is defined on the normalized view,
    where stopwords are already gone, so an occurrence may correspond to a
    raw window longer than max_pattern_len. Scanning normalized windows
    against a hash of retained patterns finds exactly the occurrences
    match_pattern would.
    """
    by_items = {p.items: p.pattern_id for p in patterns}
    if not by_items:
        return {}, []
    max_width = max(len(items) for items in by_items)
    hits: dict[int, dict[tuple[str, ...], set[int]]] = {p.pattern_id: {} for p in patterns}
    for sentence_id, view in enumerate(views):
        n = len(view)
        for start in range(n):
            fillers: list[str] = []
            window: list[str] = []
            for end in range(start, min(start + max_width, n)):
                slot = view[end]
                window.append(slot.key)
                if slot.canonical_id is not None:
                    fillers.append(slot.canonical_id)
                if not fillers:
                    continue
                pid = by_items.get(tuple(window))
                if pid is not None:
                    hits[pid].setdefault(tuple(fillers), set()).add(sentence_id)
    index: dict[int, dict[tuple[str, ...], tuple[int, ...]]] = {}
    records: list[PatternMatchRecord] = []
    for pid in sorted(hits):
        tuples = {t: tuple(sorted(sids)) for t, sids in hits[pid].items()}
        index[pid] = dict(sorted(tuples.items()))
        for t, sids in index[pid].items():
            records.extend(PatternMatchRecord(pid, sid, t) for sid in sids)
    return index, records


class EvidenceIndex:
    """Immutable bundle of everything a query needs."""

    def __init__(self, *, config: IndexConfig, documents: list[Document],
                 sentences: list[Sentence], mentions: list[list[EntityMention]],
                 stats: CorpusStats, lexicon: Lexicon,
                 word_index: dict[str, PostingList],
                 entity_index: dict[str, PostingList],
                 entity_types: dict[str, str],
                 patterns: list[MetaPattern], groups: list[SynonymGroup],
                 pattern_to_group: dict[int, int],
                 pattern_index: dict[int, dict[tuple[str, ...], tuple[int, ...]]]):
        self.config = config
        self.documents = {doc.doc_id: doc for doc in documents}
        self.sentences = sentences
        self.mentions = mentions
        self.stats = stats
        self.lexicon = lexicon
        self.word_index = word_index
        self.entity_index = entity_index
        self.entity_types = entity_types
        self.patterns = patterns
        self.groups = groups
        self.pattern_to_group = pattern_to_group
        self.group_to_patterns = {g.group_id: g.member_pattern_ids for g in groups}
        self.pattern_index = pattern_index
        self._pattern_by_items = {p.items: p for p in patterns}
        self._normalizer = config.normalizer()
        self._pattern_sentences_cache: dict[int, frozenset[int]] = {}
        self._sentence_patterns: dict[int, list[tuple[int, tuple[str, ...]]]] | None = None

    # -- lookups ----------------------------------------------------------

    @property
    def normalizer(self) -> PatternNormalizer:
        return self._normalizer

    def posting(self, kind: str, key: str) -> PostingList | None:
        if kind == "word":
            return self.word_index.get(key)
        if kind == "entity":
            return self.entity_index.get(key)
        raise ValueError(f"unknown posting kind {kind!r}")

    def idf(self, key: str, kind: str, clamp: bool = False) -> float:
        """ln((N - n + 0.5) / (n + 0.5)) with n = posting length, 0 if absent.

        Negative values (keys in more than half the corpus) are kept unless
        clamp is set.
        """
        post = self.posting(kind, key)
        n = post.n if post is not None else 0
        value = math.log((self.stats.n_sentences - n + 0.5) / (n + 0.5))
        if clamp and value < 0.0:
            return 0.0
        return value

    def frequency(self, kind: str, key: str, sentence_id: int) -> int:
        post = self.posting(kind, key)
        return post.frequency(sentence_id) if post is not None else 0

    def sentence(self, sentence_id: int) -> Sentence:
        return self.sentences[sentence_id]

    def sentence_text(self, sentence_id: int) -> str:
        sent = self.sentences[sentence_id]
        doc = self.documents[sent.doc_id]
        source = doc.title if sent.origin == "title" else doc.body
        a, b = sent.char_span
        return source[a:b]

    def sentence_token_spans(self, sentence_id: int) -> list[tuple[str, int, int]]:
        return tokenize_with_spans(self.sentence_text(sentence_id))

    def typed_sequence(self, sentence_id: int) -> TypedSequence:
        return typed_sequence(self.sentences[sentence_id], self.mentions[sentence_id])

    def pattern(self, pattern_id: int) -> MetaPattern:
        return self.patterns[pattern_id]

    def pattern_by_items(self, items: tuple[str, ...]) -> MetaPattern | None:
        return self._pattern_by_items.get(items)

    def pattern_sentences(self, pattern_id: int,
                          entity_tuple: tuple[str, ...] | None = None) -> frozenset[int]:
        """Sentences matching a pattern, optionally under one entity tuple."""
        tuples = self.pattern_index.get(pattern_id, {})
        if entity_tuple is not None:
            return frozenset(tuples.get(entity_tuple, ()))
        cached = self._pattern_sentences_cache.get(pattern_id)
        if cached is None:
            acc: set[int] = set()
            for sids in tuples.values():
                acc.update(sids)
            cached = frozenset(acc)
            self._pattern_sentences_cache[pattern_id] = cached
        return cached

    def sentence_pattern_records(self, sentence_id: int) -> list[tuple[int, tuple[str, ...]]]:
        """(pattern_id, entity_tuple) pairs recorded for one sentence."""
        if self._sentence_patterns is None:
            rev: dict[int, list[tuple[int, tuple[str, ...]]]] = {}
            for pid, tuples in self.pattern_index.items():
                for entity_tuple, sids in tuples.items():
                    for sid in sids:
                        rev.setdefault(sid, []).append((pid, entity_tuple))
            for lst in rev.values():
                lst.sort()
            self._sentence_patterns = rev
        return self._sentence_patterns.get(sentence_id, [])


def build_index(documents: list[Document], lexicon: Lexicon,
                config: IndexConfig | None = None,
                precomputed_mentions: dict[str, list[tuple[int, int, str, str]]] | None = None,
                ) -> EvidenceIndex:
    """Run the whole pipeline: split, tag, mine, group, index.

    With precomputed_mentions, dictionary tagging is skipped and the imported
    body-offset mentions are aligned to tokens instead (title sentences then
    carry no mentions).
    """
    if config is None:
        config = IndexConfig.create()
    if not documents:
        raise EmptyCorpus()
    abbreviations = frozenset(config.abbreviations)
    sentences = ingest(documents, abbreviations)
    if not sentences:
        raise EmptyCorpus()
    stats = corpus_stats(sentences)

    mentions: list[list[EntityMention]] = []
    if precomputed_mentions is None:
        for sent in sentences:
            mentions.append(tag_sentence(sent, lexicon))
    else:
        for sent in sentences:
            rows = precomputed_mentions.get(sent.doc_id, [])
            if sent.origin != "body" or not rows:
                mentions.append([])
                continue
            doc = next(d for d in documents if d.doc_id == sent.doc_id)
            spans = tokenize_with_spans(doc.body[sent.char_span[0]:sent.char_span[1]])
            mentions.append(align_mentions(sent, rows, spans))

    normalizer = config.normalizer()
    views = []
    candidates = []
    for sent, ms in zip(sentences, mentions):
        seq = typed_sequence(sent, ms)
        views.append(normalizer.normalized_view(seq))
        candidates.extend(extract_candidates(seq, config.max_pattern_len, normalizer))

    patterns = mine_patterns(candidates, config.min_support)
    groups, pattern_to_group = build_synonym_groups(patterns, config.synonym_map())
    pattern_index, _ = build_pattern_index(patterns, views)

    entity_types: dict[str, str] = {}
    for entry in lexicon.entries:
        entity_types.setdefault(entry.canonical_id, entry.entity_type)
    for ms in mentions:
        for m in ms:
            entity_types.setdefault(m.canonical_id, m.entity_type)

    return EvidenceIndex(
        config=config,
        documents=documents,
        sentences=sentences,
        mentions=mentions,
        stats=stats,
        lexicon=lexicon,
        word_index=build_word_index(sentences),
        entity_index=build_entity_index(mentions),
        entity_types=entity_types,
        patterns=patterns,
        groups=groups,
        pattern_to_group=pattern_to_group,
        pattern_index=pattern_index,
    )
