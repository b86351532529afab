"""Freeze UI test fixtures from real API payloads.

Builds an index from the demo corpus, runs the HTTP app in-process, and
writes the JSON responses the UI tests replay into tests/fixtures/. Re-run
after any change to the API payload shapes or the demo data:

    python3 scripts/freeze_fixtures.py

Requires the Python package installed with its test extra (fastapi test
client needs httpx).
"""

from __future__ import annotations

import json
import subprocess
import sys
import tempfile
from pathlib import Path

FRONTEND = Path(__file__).resolve().parent.parent
REPO = FRONTEND.parent
FIXTURES = FRONTEND / "tests" / "fixtures"

# Ten search queries covering every parse form and highlight kind the UI
# renders: parenthesized triples (with and without a derived pattern), bare
# type-name and $-prefixed pattern queries, and free-text queries.
SEARCHES = [
    ("search-01-triple-uv", {"q": "(Ultraviolet, UV, kills, SARS-CoV-2)", "top": 10}),
    ("search-02-pattern-cause", {"q": "CORONAVIRUS cause DISEASEORSYNDROME", "top": 10}),
    ("search-03-triple-remdesivir", {"q": "(remdesivir, inhibit, SARS-CoV-2)", "top": 10}),
    ("search-04-triple-no-pattern", {"q": "(COVID-19, amodiaquine)", "top": 10}),
    ("search-05-triple-masks", {"q": "(COVID-19, masks)", "top": 10}),
    ("search-06-text-remdesivir", {"q": "remdesivir inhibits SARS-CoV-2", "top": 5}),
    ("search-07-pattern-sigil", {"q": "$CHEMICAL inhibit $CORONAVIRUS", "top": 10}),
    ("search-08-text-chloroquine", {"q": "chloroquine inhibits pancreatic cancer", "top": 5}),
    ("search-09-text-uv-synonym", {"q": "ultraviolet inactivates MERS-CoV", "top": 5}),
    ("search-10-triple-normalized", {"q": "(resveratrol, inhibits, pancreatic cancer)", "top": 5, "normalize": True}),
]


def freeze(client) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    def save(name: str, payload) -> None:
        path = FIXTURES / f"{name}.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote {path.relative_to(FRONTEND)}")

    for name, params in SEARCHES:
        resp = client.get("/api/search", params=params)
        resp.raise_for_status()
        body = resp.json()
        if not body["results"]:
            sys.exit(f"fixture {name} returned no results; pick a different query")
        save(name, {"params": params, "response": body})

    for name, path, params in [
        ("doc-antiviral", "/api/doc/antiviral-01", {"focus": 13}),
        ("doc-titled", "/api/doc/uv-kill-01", {"focus": 1}),
        ("sentence-13", "/api/sentence/13", {}),
        ("analytics-entities", "/api/analytics/entities", {"top": 50}),
        ("analytics-relations", "/api/analytics/relations", {"top": 50}),
        ("health", "/api/health", {}),
    ]:
        resp = client.get(path, params=params)
        resp.raise_for_status()
        save(name, resp.json())


def main() -> None:
    from fastapi.testclient import TestClient

    from evidex.server import create_app

    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [
                "evidex", "build",
                "--corpus", str(REPO / "demo" / "corpus.jsonl"),
                "--lexicon", str(REPO / "demo" / "lexicon.tsv"),
                "--synonyms", str(REPO / "demo" / "synonyms.txt"),
                "--out", tmp,
            ],
            check=True,
        )
        app = create_app(index_dir=tmp)
        with TestClient(app) as client:
            freeze(client)


if __name__ == "__main__":
    main()
