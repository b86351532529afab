import pathlib

import pytest

from evidex.corpus import Document, load_corpus
from evidex.index import IndexConfig, build_index
from evidex.lexicon import Lexicon, LexiconEntry, load_lexicon
from evidex.patterns import read_synonym_classes

REPO = pathlib.Path(__file__).resolve().parent.parent
DEMO = REPO / "demo"


def make_lexicon(rows):
    """rows: (surface string, entity_type, canonical_id)."""
    entries = [
        LexiconEntry(surface=tuple(surface.lower().split()),
                     entity_type=etype, canonical_id=canon, order=i)
        for i, (surface, etype, canon) in enumerate(rows)
    ]
    return Lexicon(entries)


def make_docs(bodies, titles=None):
    docs = []
    for i, body in enumerate(bodies):
        title = titles[i] if titles else ""
        docs.append(Document(doc_id=f"d{i:03d}", title=title, body=body, source_uri=None))
    return docs


def build_demo_index():
    docs = load_corpus(DEMO / "corpus.jsonl", fmt="jsonl")
    lex = load_lexicon(DEMO / "lexicon.tsv")
    config = IndexConfig.create(synonym_classes=read_synonym_classes(DEMO / "synonyms.txt"))
    return build_index(docs, lex, config=config)


@pytest.fixture(scope="session")
def demo_index():
    return build_demo_index()


@pytest.fixture(scope="session")
def demo_index_dir(demo_index, tmp_path_factory):
    from evidex.storage import persist

    out = tmp_path_factory.mktemp("demoidx")
    persist(demo_index, out)
    return out


ACCEPTANCE_LABELS = {
    "test_criterion_1_bm25_oracle_equivalence": "BM25 oracle equivalence",
    "test_criterion_2_idf_spot_values": "IDF spot values",
    "test_criterion_3_pattern_index_completeness": "pattern index completeness",
    "test_criterion_4_planted_evidence_ranking": "planted-evidence ranking",
    "test_criterion_5_ranking_reductions": "ranking reductions",
    "test_criterion_6_index_round_trip": "index round-trip",
    "test_criterion_7_ndcg_harness": "nDCG harness",
    "test_criterion_8_demo_fixture_queries": "demo fixture queries",
}


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, ()):
            name = getattr(report, "nodeid", "").rsplit("::", 1)[-1]
            if name in ACCEPTANCE_LABELS:
                verdict = "PASS" if outcome == "passed" else "FAIL"
                number = name.split("_")[2]
                lines.append(f"criterion {number} ({ACCEPTANCE_LABELS[name]}): {verdict}")
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
