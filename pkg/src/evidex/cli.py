"""Command line entry points: build, query, eval, serve.

Results go to stdout, diagnostics to stderr. Exit codes: 0 success, 1
runtime failure (bad input data, corrupt index), 2 usage error.
"""

from __future__ import annotations

import json
import sys

import click

from . import evaluation, schemas
from .errors import EvidexError
from .index import DEFAULT_MAX_PATTERN_LEN, DEFAULT_MIN_SUPPORT, IndexConfig, build_index
from .lexicon import load_lexicon, load_mentions_tsv
from .corpus import load_corpus
from .query import Bm25Params, RankingWeights, parse_query, search
from .server import ENV_INDEX_DIR, ENV_PORT, create_app
from .textnorm import load_wordlist


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _parse_weights(text: str) -> RankingWeights:
    parts = text.split(",")
    if len(parts) != 3:
        raise click.BadParameter("expected three comma-separated numbers, e.g. 1,0,0")
    try:
        sigma, theta, eta = (float(p) for p in parts)
        return RankingWeights(sigma=sigma, theta=theta, eta=eta)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


@click.group()
def main():
    """Sentence-level evidence retrieval."""


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSONL corpus file.")
@click.option("--lexicon", "lexicon_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Entity lexicon TSV: surface, type, canonical_id.")
@click.option("--out", required=True, type=click.Path(file_okay=False),
              help="Index directory to write.")
@click.option("--format", "fmt", default="jsonl", type=click.Choice(["jsonl", "cord19"]),
              show_default=True, help="Corpus record layout.")
@click.option("--min-support", default=DEFAULT_MIN_SUPPORT, show_default=True,
              type=click.IntRange(min=1), help="Minimum pattern support.")
@click.option("--max-pattern-len", default=DEFAULT_MAX_PATTERN_LEN, show_default=True,
              type=click.IntRange(min=2), help="Maximum pattern window, in items.")
@click.option("--synonyms", type=click.Path(exists=True, dir_okay=False),
              help="Relation synonym classes, one per line.")
@click.option("--mentions", type=click.Path(exists=True, dir_okay=False),
              help="Precomputed mentions TSV; skips dictionary tagging.")
@click.option("--stopwords", type=click.Path(exists=True, dir_okay=False),
              help="Stopword list override, one token per line.")
@click.option("--stem-exceptions", type=click.Path(exists=True, dir_okay=False),
              help="Tokens never stemmed, one per line.")
@click.option("--abbreviations", type=click.Path(exists=True, dir_okay=False),
              help="Abbreviation list override for sentence splitting.")
def build(corpus, lexicon_path, out, fmt, min_support, max_pattern_len,
          synonyms, mentions, stopwords, stem_exceptions, abbreviations):
    """Build an index directory from a corpus and a lexicon."""
    from .storage import persist

    try:
        docs = load_corpus(corpus, fmt=fmt)
        lex = load_lexicon(lexicon_path)
        stop = load_wordlist(stopwords) if stopwords else None
        exceptions = load_wordlist(stem_exceptions) if stem_exceptions else frozenset()
        abbrev = load_wordlist(abbreviations) if abbreviations else None
        synonym_classes: tuple[tuple[str, ...], ...] = ()
        if synonyms:
            from .patterns import PatternNormalizer, load_synonym_config, read_synonym_classes

            probe = PatternNormalizer(stop if stop is not None else frozenset())
            load_synonym_config(synonyms, probe)  # validate before storing raw classes
            synonym_classes = read_synonym_classes(synonyms)
        config = IndexConfig.create(
            min_support=min_support,
            max_pattern_len=max_pattern_len,
            stopwords=stop,
            stem_exceptions=exceptions,
            abbreviations=abbrev,
            synonym_classes=synonym_classes,
        )
        rows = load_mentions_tsv(mentions) if mentions else None
        index = build_index(docs, lex, config, precomputed_mentions=rows)
        manifest = persist(index, out)
    except (EvidexError, OSError) as exc:
        _fail(exc)
        return
    stats = manifest["stats"]
    click.echo(f"indexed {stats['documents']} documents, {stats['sentences']} sentences")
    click.echo(f"vocabulary {stats['vocab_size']}, entities {stats['entities']}, "
               f"patterns {stats['patterns']}, groups {stats['groups']}")
    click.echo(f"index written to {out}")


@main.command()
@click.option("--index", "index_dir", envvar=ENV_INDEX_DIR, required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Index directory (or set EM_INDEX_DIR).")
@click.argument("query_text")
@click.option("--top", default=10, show_default=True, type=click.IntRange(min=1))
@click.option("--weights", default=None, metavar="SIGMA,THETA,ETA",
              help="Component weights, default equal thirds.")
@click.option("--k", default=1.2, show_default=True, type=float, help="BM25 k.")
@click.option("--b", default=0.75, show_default=True, type=float, help="BM25 b.")
@click.option("--json", "as_json", is_flag=True, help="Emit the API JSON payload.")
def query(index_dir, query_text, top, weights, k, b, as_json):
    """Run one query against an index."""
    from .storage import load

    ranking = _parse_weights(weights) if weights else RankingWeights()
    try:
        params = Bm25Params(k=k, b=b)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    try:
        index = load(index_dir)
        parsed = parse_query(query_text, index.lexicon, index)
        outcome = search(index, parsed, weights=ranking, params=params, top_k=top)
    except (EvidexError, OSError) as exc:
        _fail(exc)
        return
    payload = schemas.search_response(index, parsed, outcome, top=top, offset=0)
    if as_json:
        click.echo(payload.model_dump_json(indent=2))
        return
    click.echo(f"query form: {parsed.form}", err=True)
    if parsed.pattern_items:
        click.echo(f"pattern: {' '.join(parsed.pattern_items)}", err=True)
    for rank, result in enumerate(payload.results, start=1):
        click.echo(f"{rank:2d}. [{result.total:.4f}] "
                   f"(w {result.word_score:.3f} | e {result.entity_score:.3f} "
                   f"| p {result.pattern_score:.0f}) "
                   f"#{result.sentence_id} {result.doc_id}: {result.text}")
    if not payload.results:
        click.echo("no results", err=True)


@main.command("eval")
@click.option("--index", "index_dir", envvar=ENV_INDEX_DIR, required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--queries", required=True, type=click.Path(exists=True, dir_okay=False),
              help="TSV of query_id, query text.")
@click.option("--judgments", required=True, type=click.Path(exists=True, dir_okay=False),
              help="TSV of query_id, sentence_id, grade (0|1|2).")
@click.option("--ks", default="1,5,10", show_default=True,
              help="Comma-separated nDCG cutoffs.")
@click.option("--weights", default=None, metavar="SIGMA,THETA,ETA")
@click.option("--baseline", is_flag=True,
              help="Also report word-only weights (1,0,0) for comparison.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a table.")
def eval_cmd(index_dir, queries, judgments, ks, weights, baseline, as_json):
    """Score an index against graded relevance judgments."""
    from .storage import load

    try:
        cutoffs = tuple(int(part) for part in ks.split(","))
    except ValueError:
        raise click.BadParameter("ks must be comma-separated integers")
    if not cutoffs or any(c < 1 for c in cutoffs):
        raise click.BadParameter("ks must be positive integers")
    ranking = _parse_weights(weights) if weights else RankingWeights()
    try:
        index = load(index_dir)
        query_rows = evaluation.load_queries_tsv(queries)
        judgment_rows = evaluation.load_judgments_tsv(judgments, [q for q, _ in query_rows])
        reports = []
        if baseline:
            reports.append(evaluation.evaluate_run(
                index, query_rows, judgment_rows, cutoffs,
                weights=RankingWeights(1.0, 0.0, 0.0), name="bm25-words"))
        reports.append(evaluation.evaluate_run(
            index, query_rows, judgment_rows, cutoffs, weights=ranking, name="combined"))
    except (EvidexError, OSError) as exc:
        _fail(exc)
        return
    click.echo(evaluation.report_json(reports) if as_json else evaluation.report_table(reports))


@main.command()
@click.option("--index", "index_dir", envvar=ENV_INDEX_DIR, required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--port", envvar=ENV_PORT, default=8000, show_default=True,
              type=click.IntRange(min=1, max=65535))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", default=None, type=click.Path(exists=True, file_okay=False),
              help="Static frontend build to serve at /.")
def serve(index_dir, port, host, ui_dir):
    """Load an index and serve the HTTP API."""
    import uvicorn

    try:
        app = create_app(index_dir=index_dir, ui_dir=ui_dir)
    except (EvidexError, OSError) as exc:
        _fail(exc)
        return
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
