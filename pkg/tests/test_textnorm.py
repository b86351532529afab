import pytest

from evidex.textnorm import (
    default_abbreviations,
    default_stopwords,
    load_wordlist,
    porter_stem,
    tokenize,
    tokenize_with_spans,
)


class TestTokenizer:
    def test_internal_hyphens_survive(self):
        assert tokenize("Ultraviolet-C (UV-C) radiation") == [
            "ultraviolet-c", "uv-c", "radiation"]

    def test_internal_digits_slashes_dots_survive(self):
        assert tokenize("dose of 3.5 mg/kg for SARS-CoV-2") == [
            "dose", "of", "3.5", "mg/kg", "for", "sars-cov-2"]

    def test_edge_punctuation_stripped(self):
        assert tokenize('("80%!")') == ["80"]
        assert tokenize("approx. cells,") == ["approx", "cells"]

    def test_pure_punctuation_chunk_dropped(self):
        assert tokenize("yes -- no") == ["yes", "no"]

    def test_empty_and_whitespace(self):
        assert tokenize("") == []
        assert tokenize("   \t  ") == []

    def test_spans_index_into_original_text(self):
        text = "UV kills SARS-CoV-2."
        spans = tokenize_with_spans(text)
        assert spans == [("uv", 0, 2), ("kills", 3, 8), ("sars-cov-2", 9, 19)]
        for token, a, b in spans:
            assert text[a:b].lower() == token

    def test_spans_skip_stripped_edges(self):
        text = "  (alpha)  beta!"
        spans = tokenize_with_spans(text)
        assert spans == [("alpha", 3, 8), ("beta", 11, 15)]


class TestWordlists:
    def test_load_wordlist_skips_comments_and_blanks(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text("# heading\nalpha\n\nBeta  \n# tail\n", encoding="utf-8")
        assert load_wordlist(path) == frozenset({"alpha", "beta"})

    def test_default_stopwords_sane(self):
        stop = default_stopwords()
        assert {"the", "of", "and", "is", "in"} <= stop
        assert "kills" not in stop
        assert "inhibit" not in stop

    def test_default_abbreviations_sane(self):
        abbr = default_abbreviations()
        assert {"approx", "fig", "dr", "et", "al"} <= abbr
        assert "virus" not in abbr


# Published reference pairs for the 1980 suffix-stripping algorithm.
PORTER_VECTORS = [
    ("caresses", "caress"), ("ponies", "poni"), ("ties", "ti"),
    ("caress", "caress"), ("cats", "cat"),
    ("feed", "feed"), ("agreed", "agre"), ("plastered", "plaster"),
    ("bled", "bled"), ("motoring", "motor"), ("sing", "sing"),
    ("conflated", "conflat"), ("troubled", "troubl"), ("sized", "size"),
    ("hopping", "hop"), ("tanned", "tan"), ("falling", "fall"),
    ("hissing", "hiss"), ("fizzed", "fizz"), ("failing", "fail"),
    ("filing", "file"), ("happy", "happi"), ("sky", "sky"),
    ("relational", "relat"), ("conditional", "condit"), ("rational", "ration"),
    ("valenci", "valenc"), ("hesitanci", "hesit"), ("digitizer", "digit"),
    ("conformabli", "conform"), ("radicalli", "radic"),
    ("differentli", "differ"), ("vileli", "vile"),
    ("analogousli", "analog"), ("vietnamization", "vietnam"),
    ("predication", "predic"), ("operator", "oper"), ("feudalism", "feudal"),
    ("decisiveness", "decis"), ("hopefulness", "hope"),
    ("callousness", "callous"), ("formaliti", "formal"),
    ("sensitiviti", "sensit"), ("sensibiliti", "sensibl"),
    ("triplicate", "triplic"), ("formative", "form"), ("formalize", "formal"),
    ("electriciti", "electr"), ("electrical", "electr"), ("hopeful", "hope"),
    ("goodness", "good"), ("revival", "reviv"), ("allowance", "allow"),
    ("inference", "infer"), ("airliner", "airlin"), ("gyroscopic", "gyroscop"),
    ("adjustable", "adjust"), ("defensible", "defens"), ("irritant", "irrit"),
    ("replacement", "replac"), ("adjustment", "adjust"),
    ("dependent", "depend"), ("adoption", "adopt"), ("communism", "commun"),
    ("activate", "activ"), ("angulariti", "angular"),
    ("homologous", "homolog"), ("effective", "effect"),
    ("bowdlerize", "bowdler"), ("probate", "probat"), ("rate", "rate"),
    ("cease", "ceas"), ("controll", "control"), ("roll", "roll"),
    # domain words the demo corpus leans on
    ("inhibits", "inhibit"), ("suppresses", "suppress"), ("causes", "caus"),
    ("induces", "induc"), ("kills", "kill"), ("inactivates", "inactiv"),
    ("destroys", "destroi"),
]


class TestPorterStemmer:
    @pytest.mark.parametrize("word,expected", PORTER_VECTORS)
    def test_reference_vectors(self, word, expected):
        assert porter_stem(word) == expected

    def test_short_words_pass_through(self):
        assert porter_stem("is") == "is"
        assert porter_stem("a") == "a"
        assert porter_stem("uv") == "uv"

    def test_idempotent_on_demo_stems(self):
        for _, stem in PORTER_VECTORS[:30]:
            assert porter_stem(porter_stem(stem)) == porter_stem(stem)
