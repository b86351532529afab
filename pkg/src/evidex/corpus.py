"""Corpus loading, sentence splitting, and corpus statistics.

Documents come in as JSONL; sentences go out as the unit every index is
keyed on. Sentence ids are dense and assigned in document order, with a
document's title (when present) indexed as one extra sentence ahead of its
body.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import DuplicateDocId, EmptyCorpus, MalformedRecord
from .textnorm import default_abbreviations, tokenize

ORIGIN_BODY = "body"
ORIGIN_TITLE = "title"

_TERMINALS = ".?!"


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    body: str
    source_uri: str | None = None


@dataclass(frozen=True)
class Sentence:
    """One indexed sentence.

    char_span is (start, end) into the origin field's text (title or body),
    already trimmed of surrounding whitespace; tokens are the normalized
    token sequence of that slice.
    """

    sentence_id: int
    doc_id: str
    char_span: tuple[int, int]
    tokens: tuple[str, ...]
    origin: str = ORIGIN_BODY

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class CorpusStats:
    n_sentences: int
    avg_sentence_len: float
    vocab_size: int


def load_corpus(path, fmt: str = "jsonl") -> list[Document]:
    """Read documents from a JSONL file.

    fmt "jsonl" expects {doc_id, title?, body, source_uri?} per line.
    fmt "cord19" accepts full-text release records and maps paper_id to
    doc_id, metadata.title to title, and the abstract plus body_text
    paragraph texts (in that order, newline-joined) to body.
    """
    if fmt not in ("jsonl", "cord19"):
        raise ValueError(f"unknown corpus format {fmt!r}")
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(rec, dict):
                raise MalformedRecord(line_no, "record is not an object")
            doc = _jsonl_doc(rec, line_no) if fmt == "jsonl" else _cord19_doc(rec, line_no)
            if doc.doc_id in seen:
                raise DuplicateDocId(doc.doc_id, line_no)
            seen.add(doc.doc_id)
            docs.append(doc)
    if not docs:
        raise EmptyCorpus()
    return docs


def _jsonl_doc(rec: dict, line_no: int) -> Document:
    doc_id = rec.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedRecord(line_no, "missing or empty doc_id")
    body = rec.get("body")
    if not isinstance(body, str) or not body.strip():
        raise MalformedRecord(line_no, "missing or empty body")
    title = rec.get("title") or ""
    if not isinstance(title, str):
        raise MalformedRecord(line_no, "title is not a string")
    uri = rec.get("source_uri")
    if uri is not None and not isinstance(uri, str):
        raise MalformedRecord(line_no, "source_uri is not a string")
    return Document(doc_id=doc_id, title=title, body=body, source_uri=uri)


def _cord19_doc(rec: dict, line_no: int) -> Document:
    doc_id = rec.get("paper_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedRecord(line_no, "missing or empty paper_id")
    meta = rec.get("metadata") or {}
    title = meta.get("title") or "" if isinstance(meta, dict) else ""
    paragraphs = []
    for section in ("abstract", "body_text"):
        for para in rec.get(section) or []:
            if isinstance(para, dict):
                text = para.get("text")
                if isinstance(text, str) and text.strip():
                    paragraphs.append(text)
    if not paragraphs:
        raise MalformedRecord(line_no, "no abstract or body_text paragraphs")
    return Document(doc_id=doc_id, title=title, body="\n".join(paragraphs))


def _preceding_word(text: str, dot: int) -> str:
    start = dot
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:dot]
    return word.lstrip("([{\"'").lower()


def sentence_spans(text: str, abbreviations: frozenset[str]) -> list[tuple[int, int]]:
    """Trimmed, disjoint, ordered sentence spans of `text`.

    A boundary is a run of [.?!] followed by a space or tab and then an
    uppercase letter or digit, unless the run is a lone "." directly after
    an abbreviation. Newlines always break.
    """
    spans: list[tuple[int, int]] = []

    def push(a: int, b: int) -> None:
        while a < b and text[a].isspace():
            a += 1
        while b > a and text[b - 1].isspace():
            b -= 1
        if a < b:
            spans.append((a, b))

    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            push(start, i)
            start = i + 1
            i += 1
            continue
        if ch in _TERMINALS:
            j = i + 1
            while j < n and text[j] in _TERMINALS:
                j += 1
            if j < n and text[j] in (" ", "\t"):
                k = j
                while k < n and text[k] in (" ", "\t"):
                    k += 1
                nxt = text[k] if k < n else ""
                guarded = text[i:j] == "." and _preceding_word(text, i) in abbreviations
                if nxt and (nxt.isupper() or nxt.isdigit()) and not guarded:
                    push(start, j)
                    start = j
                    i = k
                    continue
            i = j
            continue
        i += 1
    push(start, n)
    return spans


def split_sentences(doc: Document, abbreviations: frozenset[str] | None = None) -> list[Sentence]:
    """Split a document body into sentences with ids local to the document.

    Spans that tokenize to nothing are dropped, so every returned sentence
    has at least one token. Worst case the whole body is one sentence.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    out: list[Sentence] = []
    for a, b in sentence_spans(doc.body, abbreviations):
        tokens = tuple(tokenize(doc.body[a:b]))
        if tokens:
            out.append(Sentence(
                sentence_id=len(out),
                doc_id=doc.doc_id,
                char_span=(a, b),
                tokens=tokens,
                origin=ORIGIN_BODY,
            ))
    return out


def ingest(documents: list[Document], abbreviations: frozenset[str] | None = None) -> list[Sentence]:
    """Sentence table for a whole corpus, ids dense in document order.

    Each document contributes its title (one sentence, origin "title") and
    then its body sentences.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    sentences: list[Sentence] = []
    for doc in documents:
        title = doc.title
        if title.strip():
            a, b = 0, len(title)
            while a < b and title[a].isspace():
                a += 1
            while b > a and title[b - 1].isspace():
                b -= 1
            tokens = tuple(tokenize(title[a:b]))
            if tokens:
                sentences.append(Sentence(
                    sentence_id=len(sentences),
                    doc_id=doc.doc_id,
                    char_span=(a, b),
                    tokens=tokens,
                    origin=ORIGIN_TITLE,
                ))
        for sent in split_sentences(doc, abbreviations):
            sentences.append(dataclasses.replace(sent, sentence_id=len(sentences)))
    return sentences


def corpus_stats(sentences: list[Sentence]) -> CorpusStats:
    if not sentences:
        raise EmptyCorpus()
    total = sum(s.length for s in sentences)
    vocab = set()
    for s in sentences:
        vocab.update(s.tokens)
    return CorpusStats(
        n_sentences=len(sentences),
        avg_sentence_len=total / len(sentences),
        vocab_size=len(vocab),
    )
