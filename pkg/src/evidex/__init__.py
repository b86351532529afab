"""Sentence-level evidence retrieval.

Builds word, entity, and meta-pattern indexes over a corpus of documents and
ranks individual sentences against structured or free-text queries with a
weighted combination of BM25 word/entity scores and synonym-group pattern
matches.
"""

from .corpus import CorpusStats, Document, Sentence, corpus_stats, ingest, load_corpus, split_sentences
from .errors import EvidexError
from .index import EvidenceIndex, IndexConfig, build_index
from .lexicon import EntityMention, Lexicon, LexiconEntry, load_lexicon, tag_sentence, typed_sequence
from .patterns import MetaPattern, SynonymGroup, extract_candidates, match_pattern, mine_patterns
from .query import (
    Bm25Params,
    Query,
    RankingWeights,
    ScoredEvidence,
    SearchOutcome,
    parse_query,
    search,
)
from .storage import load, persist

__version__ = "0.1.0"

__all__ = [
    "Bm25Params",
    "CorpusStats",
    "Document",
    "EntityMention",
    "EvidenceIndex",
    "EvidexError",
    "IndexConfig",
    "Lexicon",
    "LexiconEntry",
    "MetaPattern",
    "Query",
    "RankingWeights",
    "ScoredEvidence",
    "SearchOutcome",
    "Sentence",
    "SynonymGroup",
    "build_index",
    "corpus_stats",
    "extract_candidates",
    "ingest",
    "load",
    "load_corpus",
    "load_lexicon",
    "match_pattern",
    "mine_patterns",
    "parse_query",
    "persist",
    "search",
    "split_sentences",
    "tag_sentence",
    "typed_sequence",
    "__version__",
]
