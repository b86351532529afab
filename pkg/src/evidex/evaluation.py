"""Graded-relevance evaluation: nDCG@k over a query file and judgments.

Judgments use three grades (0 irrelevant, 1 relevant, 2 strong evidence).
DCG uses the (2^grade - 1) / log2(rank + 1) form; nDCG divides by the ideal
DCG over all judged sentences for the query and is defined as 0 when the
ideal is 0. Retrieved sentences without a judgment count as grade 0, and
reported numbers are macro-averages over queries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import MalformedJudgments, MalformedQueryFile, UnknownQueryId
from .index import EvidenceIndex
from .query import Bm25Params, RankingWeights, parse_query, search

GRADES = (0, 1, 2)
DEFAULT_KS = (1, 5, 10)


@dataclass(frozen=True)
class EvalReport:
    name: str
    ks: tuple[int, ...]
    per_query: dict[str, dict[int, float]]
    averages: dict[int, float]


def dcg_at_k(grades, k: int) -> float:
    """Discounted cumulative gain of a graded ranking, top k positions."""
    total = 0.0
    for i, grade in enumerate(grades[:k], start=1):
        total += (2.0 ** grade - 1.0) / math.log2(i + 1)
    return total


def ndcg_at_k(ranked_grades, judged_grades, k: int) -> float:
    """nDCG of a ranking against the full set of judged grades.

    `ranked_grades` follows retrieval order; `judged_grades` holds every
    grade judged for the query, from which the ideal ordering is built.
    """
    ideal = dcg_at_k(sorted(judged_grades, reverse=True), k)
    if ideal == 0.0:
        return 0.0
    return dcg_at_k(ranked_grades, k) / ideal


def load_queries_tsv(path) -> list[tuple[str, str]]:
    """query_id <TAB> query string, one per line; '#' lines are comments."""
    out: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 2:
                raise MalformedQueryFile(line_no, f"expected 2 tab-separated columns, got {len(cols)}")
            qid, text = cols[0].strip(), cols[1].strip()
            if not qid or not text:
                raise MalformedQueryFile(line_no, "empty query_id or query text")
            if qid in seen:
                raise MalformedQueryFile(line_no, f"duplicate query_id {qid!r}")
            seen.add(qid)
            out.append((qid, text))
    return out


def load_judgments_tsv(path, known_query_ids) -> dict[str, dict[int, int]]:
    """query_id <TAB> sentence_id <TAB> grade rows, one grade per pair."""
    known = set(known_query_ids)
    out: dict[str, dict[int, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 3:
                raise MalformedJudgments(line_no, f"expected 3 tab-separated columns, got {len(cols)}")
            qid = cols[0].strip()
            try:
                sid = int(cols[1])
                grade = int(cols[2])
            except ValueError:
                raise MalformedJudgments(line_no, "sentence_id and grade must be integers") from None
            if grade not in GRADES:
                raise MalformedJudgments(line_no, f"grade must be one of {GRADES}, got {grade}")
            if qid not in known:
                raise UnknownQueryId(qid)
            per = out.setdefault(qid, {})
            if sid in per:
                raise MalformedJudgments(line_no, f"duplicate judgment for ({qid!r}, {sid})")
            per[sid] = grade
    return out


def evaluate_run(index: EvidenceIndex, queries: list[tuple[str, str]],
                 judgments: dict[str, dict[int, int]],
                 ks: tuple[int, ...] = DEFAULT_KS,
                 weights: RankingWeights | None = None,
                 params: Bm25Params | None = None,
                 name: str = "run") -> EvalReport:
    """Run every query at depth max(ks) and compute macro-averaged nDCG@k."""
    if not ks or any(k < 1 for k in ks):
        raise ValueError("ks must be positive")
    depth = max(ks)
    per_query: dict[str, dict[int, float]] = {}
    for qid, text in queries:
        parsed = parse_query(text, index.lexicon, index)
        outcome = search(index, parsed, weights=weights, params=params, top_k=depth)
        judged = judgments.get(qid, {})
        ranked_grades = [judged.get(r.sentence_id, 0) for r in outcome.results]
        per_query[qid] = {k: ndcg_at_k(ranked_grades, list(judged.values()), k) for k in ks}
    averages = {
        k: (sum(per_query[qid][k] for qid in per_query) / len(per_query)) if per_query else 0.0
        for k in ks
    }
    return EvalReport(name=name, ks=tuple(ks), per_query=per_query, averages=averages)


def report_table(reports: list[EvalReport]) -> str:
    """Aligned text table: one row per run, one nDCG column per cutoff."""
    if not reports:
        return ""
    ks = reports[0].ks
    headers = ["run"] + [f"nDCG@{k}" for k in ks]
    rows = [[r.name] + [f"{r.averages[k]:.4f}" for k in ks] for r in reports]
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(row[i].ljust(widths[i]) for i in range(len(row))))
    return "\n".join(lines)


def report_json(reports: list[EvalReport]) -> str:
    payload = [
        {
            "name": r.name,
            "ks": list(r.ks),
            "averages": {str(k): r.averages[k] for k in r.ks},
            "per_query": {qid: {str(k): v for k, v in row.items()}
                          for qid, row in sorted(r.per_query.items())},
        }
        for r in reports
    ]
    return json.dumps(payload, indent=2, sort_keys=True)
