"""End-to-end acceptance gate: one test per shipped guarantee.

Each test is verified against an independent reference — either the
direct-formula implementations in tests/oracle.py or arithmetic spelled out
inline from the documented scoring definitions — never against the engine
itself. Tolerances are pinned where floating point is involved (1e-9 for
score sums, 1e-12 for single-logarithm identities) and wall-clock budgets
are asserted where the guarantee includes one. The conftest terminal hook
prints a PASS/FAIL line per criterion at the end of the run.
"""

import math
import random
import time

from conftest import DEMO, build_demo_index, make_docs, make_lexicon
from evidex.evaluation import (
    evaluate_run,
    load_judgments_tsv,
    load_queries_tsv,
    ndcg_at_k,
    report_table,
)
from evidex.index import IndexConfig, build_index
from evidex.patterns import find_occurrences, match_pattern
from evidex.query import (
    FORM_PATTERN,
    FORM_TRIPLE,
    Bm25Params,
    RankingWeights,
    entity_score,
    gather_candidates,
    parse_query,
    pattern_score,
    query_pattern,
    search,
    word_score,
)
from evidex.storage import ALL_FILES, load, persist

import oracle


# ---------------------------------------------------------------------------
# criterion 1 — word and entity BM25 agree with the direct formula


def test_criterion_1_bm25_oracle_equivalence():
    rng = random.Random(526_901)
    lex = make_lexicon(oracle.SURFACE_ROWS)
    max_word = max_entity = 0.0
    start = time.monotonic()
    for _ in range(100):
        token_lists = oracle.random_token_lists(rng)
        docs = make_docs([" ".join(tokens) + "." for tokens in token_lists])
        idx = build_index(docs, lex)
        # the ingested corpus must be token-for-token what the reference sees
        assert [list(s.tokens) for s in idx.sentences] == token_lists

        params = Bm25Params(k=rng.uniform(0.5, 2.0), b=rng.uniform(0.0, 1.0))
        word_query = oracle.random_word_query(rng)
        entity_query = oracle.random_entity_query(rng)
        wcounts = oracle.word_counts(token_lists)
        ecounts = oracle.mention_counts(token_lists, oracle.SURFACE_TO_CANON)

        for sid in range(len(token_lists)):
            got_w = word_score(idx, word_query, sid, params)
            want_w = oracle.ref_bm25(token_lists, wcounts, word_query, sid,
                                     params.k, params.b)
            assert abs(got_w - want_w) <= 1e-9
            got_e = entity_score(idx, entity_query, sid, params)
            want_e = oracle.ref_bm25(token_lists, ecounts, entity_query, sid,
                                     params.k, params.b)
            assert abs(got_e - want_e) <= 1e-9
            max_word = max(max_word, abs(got_w))
            max_entity = max(max_entity, abs(got_e))
    elapsed = time.monotonic() - start

    # the sweep must have exercised real scores, not an all-zero corner
    assert max_word > 0.0 and max_entity > 0.0
    assert elapsed < 10.0, f"oracle sweep took {elapsed:.2f}s (budget 10s)"


# ---------------------------------------------------------------------------
# criterion 2 — IDF spot values on constructed corpora


def test_criterion_2_idf_spot_values():
    # the lexicon must be non-empty by contract; this surface never occurs
    lex = make_lexicon([("unused surface", "TYPEA", "c-unused")])

    three = build_index(make_docs(["Target alpha.", "Beta gamma.", "Delta epsilon."]), lex)
    assert three.stats.n_sentences == 3
    # present in 1 of 3 sentences: ln((3 - 1 + 0.5) / (1 + 0.5))
    assert abs(three.idf("target", "word") - math.log(2.5 / 1.5)) <= 1e-12
    # absent everywhere: ln((3 - 0 + 0.5) / (0 + 0.5)) = ln(7)
    assert abs(three.idf("missing", "word") - math.log(7.0)) <= 1e-12

    two = build_index(make_docs(["Target one.", "Other words."]), lex)
    assert two.stats.n_sentences == 2
    # present in 1 of 2 sentences: ln(1.5 / 1.5) = 0, kept (no clamping)
    assert abs(two.idf("target", "word") - 0.0) <= 1e-12


# ---------------------------------------------------------------------------
# criterion 3 — pattern postings and group counting match exhaustive scans


_REL_LEX = [
    ("enta", "TYPEA", "c-a"),
    ("entc", "TYPEA", "c-c"),
    ("ente", "TYPEA", "c-e"),
    ("entb", "TYPEB", "c-b"),
    ("entd", "TYPEB", "c-d"),
    ("entf", "TYPEB", "c-f"),
]

_PROBES = [
    "TYPEA binds TYPEB",
    "TYPEA blocks TYPEB",
    "TYPEA boosts TYPEB",
    "TYPEA clears TYPEB",
    "binds TYPEB",
    "TYPEA binds",
    "TYPEA rarely binds TYPEB",
    "TYPEA zz TYPEB",
    "(enta, binds, entb)",
    "(entc, blocks, entd)",
    "(ente, boosts, entf)",
]


def _relation_bodies(rng, n):
    """Sentences mixing relation shapes, gaps, and noise around 6 entities."""
    chems = ["enta", "entc", "ente"]
    viruses = ["entb", "entd", "entf"]
    verbs = ["binds", "blocks", "boosts", "clears"]
    fills = [f"x{i:02d}" for i in range(30)]
    bodies = []
    for _ in range(n):
        roll = rng.random()
        if roll < 0.40:
            c, v, verb = rng.choice(chems), rng.choice(viruses), rng.choice(verbs)
            shape = rng.randrange(4)
            if shape == 0:
                text = f"{c} {verb} {v}"
            elif shape == 1:
                text = f"{c} {verb} the {v}"        # stopword gap
            elif shape == 2:
                text = f"{c} rarely {verb} {v}"     # content gap
            else:
                text = f"{rng.choice(fills)} {c} {verb} {v} {rng.choice(fills)}"
        elif roll < 0.55:
            text = f"{rng.choice(viruses)} {rng.choice(verbs)} {rng.choice(chems)}"
        elif roll < 0.70:
            text = f"{rng.choice(chems)} {rng.choice(fills)} {rng.choice(viruses)}"
        else:
            text = " ".join(rng.choice(fills + ["the", "of", "is"])
                            for _ in range(rng.randint(3, 9)))
        bodies.append(text[0].upper() + text[1:] + ".")
    return bodies


def _brute_group_count(idx, query, view):
    """Synonym-group member count recomputed by direct matching on one view."""
    items = query_pattern(query, idx)
    if items is None:
        return 0.0
    mined = idx.pattern_by_items(items)
    if mined is None:
        return 0.0
    group_id = idx.pattern_to_group[mined.pattern_id]
    count = 0
    for pid in idx.group_to_patterns[group_id]:
        if find_occurrences(idx.pattern(pid).items, view, query.bound_entities):
            count += 1
    return float(count)


def test_criterion_3_pattern_index_completeness():
    lex = make_lexicon(_REL_LEX)
    saw_merged_group = False
    max_probe_score = 0.0
    start = time.monotonic()
    for seed, n_sentences, min_support in ((11, 120, 2), (12, 300, 3), (13, 500, 3)):
        rng = random.Random(seed)
        docs = make_docs(_relation_bodies(rng, n_sentences))
        config = IndexConfig.create(min_support=min_support,
                                    synonym_classes=(("binds", "blocks"),))
        idx = build_index(docs, lex, config=config)
        assert idx.stats.n_sentences == n_sentences <= 500
        assert idx.patterns, "generator must yield mineable patterns"
        saw_merged_group |= any(len(members) > 1
                                for members in idx.group_to_patterns.values())
        views = [idx.normalizer.normalized_view(idx.typed_sequence(sid))
                 for sid in range(n_sentences)]

        for pattern in idx.patterns:
            expected: dict[tuple[str, ...], set[int]] = {}
            for sid, view in enumerate(views):
                for occ in find_occurrences(pattern.items, view):
                    expected.setdefault(occ.entity_tuple, set()).add(sid)
            stored = idx.pattern_index.get(pattern.pattern_id, {})
            assert {t: tuple(sorted(sids)) for t, sids in expected.items()} == stored
            # boolean agreement with the single-sentence matcher
            stored_ids = {sid for sids in stored.values() for sid in sids}
            for sid in range(n_sentences):
                assert (sid in stored_ids) == match_pattern(
                    pattern.items, idx.typed_sequence(sid), idx.normalizer)

        for raw in _PROBES:
            query = parse_query(raw, lex, idx)
            for sid in range(n_sentences):
                got = pattern_score(idx, query, sid)
                assert got == _brute_group_count(idx, query, views[sid])
                max_probe_score = max(max_probe_score, got)
    elapsed = time.monotonic() - start

    assert saw_merged_group, "synonym classes must merge at least one group"
    assert max_probe_score > 0.0, "probes must hit mined patterns"
    assert elapsed < 30.0, f"exhaustive scan took {elapsed:.2f}s (budget 30s)"


# ---------------------------------------------------------------------------
# criterion 4 — planted evidence outranks a word-stuffed distractor


_PLANT, _SUPPORT_1, _SUPPORT_2, _HOT = 0, 1, 2, 3


def _planted_corpus():
    """200 sentences with exactly one full match for the probe query.

    Sentence 0 carries the pattern and both bound entities. Sentences 1-2
    repeat the pattern with other entity pairs so it clears the mining
    support threshold. Sentence 3 contains every query word — one of them
    twice — but no entity mentions (the surfaces are two-token and never
    appear adjacently), so only its word component scores. Sentences 4-23
    repeat "alpha"/"beta" to deflate those words' IDF, and the rest is
    single-use filler that fixes N=200 and the average length at 4.025.
    """
    bodies = [
        "Alpha compound inhibits beta virus.",
        "Gamma compound inhibits delta virus.",
        "Epsilon compound inhibits zeta virus.",
        "Compound inhibits virus alpha inhibits beta.",
    ]
    bodies += [f"Alpha beta f{i:03d}a f{i:03d}b." for i in range(20)]
    bodies += [f"G{i:03d}a g{i:03d}b g{i:03d}c g{i:03d}d." for i in range(176)]
    assert len(bodies) == 200
    return bodies


def test_criterion_4_planted_evidence_ranking():
    lex = make_lexicon([
        ("alpha compound", "CHEMICAL", "e-alpha"),
        ("beta virus", "VIRUS", "e-beta"),
        ("gamma compound", "CHEMICAL", "e-gamma"),
        ("delta virus", "VIRUS", "e-delta"),
        ("epsilon compound", "CHEMICAL", "e-epsilon"),
        ("zeta virus", "VIRUS", "e-zeta"),
    ])
    idx = build_index(make_docs(_planted_corpus()), lex)
    assert idx.stats.n_sentences == 200

    query = parse_query("(alpha compound, inhibits, beta virus)", lex, idx)
    assert query.form == FORM_TRIPLE
    assert query.words == ("alpha", "compound", "inhibits", "beta", "virus")
    assert [e.canonical_id for e in query.entities] == ["e-alpha", "e-beta"]
    assert query_pattern(query, idx) == ("$CHEMICAL", "inhibit", "$VIRUS")
    assert query.bound_entities == ("e-alpha", "e-beta")

    # Hand-computed expectations, straight from the scoring formula.
    # 805 tokens over 200 sentences: 3 five-token relation sentences, one
    # six-token distractor, and 196 four-token fillers.
    n_total, avg = 200, 805 / 200
    assert idx.stats.avg_sentence_len == avg

    def idf(n_containing):
        return math.log((n_total - n_containing + 0.5) / (n_containing + 0.5))

    def term(idf_value, freq, length):
        return idf_value * (freq * (1.2 + 1.0)) / (
            freq + 1.2 * (1.0 - 0.75 + 0.75 * length / avg))

    # sentence counts per query word: "alpha"/"beta" sit in the planted
    # sentence, the distractor and the twenty alpha-beta fillers (22);
    # "compound"/"inhibits"/"virus" in the planted sentence, the distractor
    # and the two support sentences (4)
    w_plant = 2 * term(idf(22), 1, 5) + 3 * term(idf(4), 1, 5)
    w_hot = 2 * term(idf(22), 1, 6) + 2 * term(idf(4), 1, 6) + term(idf(4), 2, 6)
    e_plant = 2 * term(idf(1), 1, 5)  # each bound entity is mentioned nowhere else
    p_plant = 1.0                     # the query pattern's group has one member

    assert abs(word_score(idx, query.words, _PLANT) - w_plant) <= 1e-9
    assert abs(word_score(idx, query.words, _HOT) - w_hot) <= 1e-9
    entity_ids = [e.canonical_id for e in query.entities]
    assert abs(entity_score(idx, entity_ids, _PLANT) - e_plant) <= 1e-9
    assert entity_score(idx, entity_ids, _HOT) == 0.0
    assert pattern_score(idx, query, _PLANT) == p_plant
    assert pattern_score(idx, query, _HOT) == 0.0
    # the support sentences carry other entity pairs, so the bound query
    # gives them no pattern credit
    assert pattern_score(idx, query, _SUPPORT_1) == 0.0
    assert pattern_score(idx, query, _SUPPORT_2) == 0.0

    # on words alone the hand arithmetic puts the distractor on top ...
    assert w_hot > w_plant
    words_only = search(idx, query, weights=RankingWeights(1.0, 0.0, 0.0), top_k=5)
    assert words_only.results[0].sentence_id == _HOT
    assert words_only.results[1].sentence_id == _PLANT
    assert abs(words_only.results[0].total - w_hot) <= 1e-9

    # ... and the default blend flips the order in favor of the plant
    assert (w_plant + e_plant + p_plant) / 3.0 > w_hot / 3.0
    blended = search(idx, query, top_k=5)
    assert blended.results[0].sentence_id == _PLANT
    assert blended.results[1].sentence_id == _HOT
    assert abs(blended.results[0].total - (w_plant + e_plant + p_plant) / 3.0) <= 1e-9


# ---------------------------------------------------------------------------
# criterion 5 — degenerate weights reduce to pattern counting; scaling is inert


def test_criterion_5_ranking_reductions(demo_index):
    queries = [text for _, text in load_queries_tsv(DEMO / "queries.tsv")]
    assert queries

    pattern_only = RankingWeights(0.0, 0.0, 1.0)
    for raw in queries:
        query = parse_query(raw, demo_index.lexicon, demo_index)
        candidates = gather_candidates(demo_index, query)
        assert candidates
        counts = {sid: pattern_score(demo_index, query, sid) for sid in candidates}
        outcome = search(demo_index, query, weights=pattern_only, top_k=len(candidates))
        expected = sorted(candidates, key=lambda sid: (-counts[sid], sid))
        assert [r.sentence_id for r in outcome.results] == expected
        for result in outcome.results:
            assert result.total == counts[result.sentence_id]

    for raw in queries:
        query = parse_query(raw, demo_index.lexicon, demo_index)
        for base in (RankingWeights(), RankingWeights(0.6, 0.3, 0.1)):
            reference = search(demo_index, query, weights=base, top_k=30)
            reference_ids = [r.sentence_id for r in reference.results]
            for c in (0.25, 3.0, 17.5):
                scaled = RankingWeights(base.sigma * c, base.theta * c, base.eta * c)
                got = search(demo_index, query, weights=scaled, top_k=30)
                assert [r.sentence_id for r in got.results] == reference_ids


# ---------------------------------------------------------------------------
# criterion 6 — persisted indexes answer identically; rebuilds are byte-equal


def test_criterion_6_index_round_trip(demo_index, demo_index_dir, tmp_path):
    loaded = load(demo_index_dir)

    rng = random.Random(937_412)
    word_pool = sorted(demo_index.word_index)
    surfaces = sorted({" ".join(e.surface) for e in demo_index.lexicon.entries})
    types = sorted(demo_index.lexicon.types)
    mixed_pool = word_pool + surfaces

    checked = 0
    for i in range(50):
        roll = i % 5
        if roll == 0:
            raw = f"({rng.choice(surfaces)}, {rng.choice(word_pool)}, {rng.choice(surfaces)})"
        elif roll == 1:
            raw = f"{rng.choice(types)} {rng.choice(word_pool)} {rng.choice(types)}"
        elif roll == 2:
            raw = f"${rng.choice(types).lower()} {rng.choice(word_pool)}"
        else:
            raw = " ".join(rng.choice(mixed_pool) for _ in range(rng.randint(1, 5)))
        q_mem = parse_query(raw, demo_index.lexicon, demo_index)
        q_disk = parse_query(raw, loaded.lexicon, loaded)
        r_mem = search(demo_index, q_mem, top_k=30)
        r_disk = search(loaded, q_disk, top_k=30)
        assert r_disk.total_candidates == r_mem.total_candidates
        assert ([r.sentence_id for r in r_disk.results]
                == [r.sentence_id for r in r_mem.results])
        for mem, disk in zip(r_mem.results, r_disk.results):
            for field in ("total", "word_score", "entity_score", "pattern_score"):
                assert abs(getattr(mem, field) - getattr(disk, field)) <= 1e-9
        checked += 1
    assert checked == 50

    # two independent builds of the same corpus persist byte-identically,
    # and both agree with the session's persisted copy
    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    persist(build_demo_index(), dir_a)
    persist(build_demo_index(), dir_b)
    for name in ALL_FILES:
        fresh = (dir_a / name).read_bytes()
        assert fresh == (dir_b / name).read_bytes()
        assert fresh == (demo_index_dir / name).read_bytes()


# ---------------------------------------------------------------------------
# criterion 7 — nDCG fixtures and the two-run comparison report


def test_criterion_7_ndcg_harness(demo_index):
    log2_3 = math.log2(3.0)

    # perfect ordering scores exactly 1.0
    assert ndcg_at_k([3, 2, 1], [3, 2, 1], 3) == 1.0

    # ranked grades [1, 0, 2] against judged {2, 1, 1, 0}:
    # DCG = 1/log2(2) + 0 + 3/log2(4) = 2.5; ideal = 3 + 1/log2(3) + 0.5
    expected = 2.5 / (3.0 + 1.0 / log2_3 + 0.5)
    assert abs(ndcg_at_k([1, 0, 2], [2, 1, 1, 0], 3) - expected) <= 1e-9

    # ranked [0, 3] against judged {3, 1}: DCG = 7/log2(3); ideal = 7 + 1/log2(3)
    expected = (7.0 / log2_3) / (7.0 + 1.0 / log2_3)
    assert abs(ndcg_at_k([0, 3], [3, 1], 2) - expected) <= 1e-9

    # all-zero judgments define nDCG as 0; the cutoff truncates the ideal too
    assert ndcg_at_k([0, 0], [0, 0, 0], 2) == 0.0
    assert ndcg_at_k([2], [2, 2], 1) == 1.0

    queries = load_queries_tsv(DEMO / "queries.tsv")
    judgments = load_judgments_tsv(DEMO / "judgments.tsv", {qid for qid, _ in queries})
    bm25 = evaluate_run(demo_index, queries, judgments,
                        weights=RankingWeights(1.0, 0.0, 0.0), name="bm25-words")
    combined = evaluate_run(demo_index, queries, judgments, name="combined")

    assert bm25.ks == combined.ks == (1, 5, 10)
    for k in combined.ks:
        assert combined.averages[k] >= bm25.averages[k]
    assert combined.averages[1] > bm25.averages[1]

    # frozen macro averages over the five bundled queries
    frozen = {
        "bm25-words": {1: 0.8000000000, 5: 0.8512546811, 10: 0.9115603034},
        "combined": {1: 1.0000000000, 5: 0.9046519959, 10: 0.9558622268},
    }
    for report in (bm25, combined):
        for k, value in frozen[report.name].items():
            assert abs(report.averages[k] - value) <= 1e-9

    lines = report_table([bm25, combined]).splitlines()
    assert lines[0].split() == ["run", "nDCG@1", "nDCG@5", "nDCG@10"]
    assert lines[2].split()[0] == "bm25-words"
    assert lines[3].split()[0] == "combined"


# ---------------------------------------------------------------------------
# criterion 8 — every bundled query parses and returns evidence


def test_criterion_8_demo_fixture_queries(demo_index):
    rows = load_queries_tsv(DEMO / "queries.tsv")
    assert [qid for qid, _ in rows] == ["case-a", "case-b", "case-c", "case-d", "case-e"]
    expected_forms = {
        "case-a": FORM_TRIPLE,
        "case-b": FORM_PATTERN,
        "case-c": FORM_TRIPLE,
        "case-d": FORM_TRIPLE,
        "case-e": FORM_TRIPLE,
    }
    for qid, text in rows:
        query = parse_query(text, demo_index.lexicon, demo_index)
        assert query.form == expected_forms[qid]
        outcome = search(demo_index, query, top_k=10)
        assert outcome.results, f"{qid} returned no results"
        assert outcome.total_candidates > 0
