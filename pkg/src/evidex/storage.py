"""On-disk index format: read and write an index directory.

Layout (documented in FORMAT.md):

    manifest.json   format version, config, config hash, corpus stats
    sentences.dat   document table + sentence table (binary)
    words.idx       word posting lists (binary)
    entities.idx    entity-type map, lexicon, entity posting lists (binary)
    patterns.idx    mined patterns with per-tuple sentence ids (binary)
    groups.json     synonym groups and the pattern -> group dictionary

Binary files are little-endian with u32 length-prefixed UTF-8 strings, and
every writer iterates in a deterministic order, so identical inputs and
config produce byte-identical directories.
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path

from .corpus import CorpusStats, Document, Sentence
from .errors import CorruptIndex, VersionMismatch
from .index import EvidenceIndex, IndexConfig, PostingList
from .lexicon import EntityMention, Lexicon, LexiconEntry
from .patterns import MetaPattern, SynonymGroup

FORMAT_VERSION = 1

_MAGIC = {
    "sentences.dat": b"EVDXSENT",
    "words.idx": b"EVDXWORD",
    "entities.idx": b"EVDXENTS",
    "patterns.idx": b"EVDXPATS",
}

MANIFEST = "manifest.json"
SENTENCES = "sentences.dat"
WORDS = "words.idx"
ENTITIES = "entities.idx"
PATTERNS = "patterns.idx"
GROUPS = "groups.json"

ALL_FILES = (MANIFEST, SENTENCES, WORDS, ENTITIES, PATTERNS, GROUPS)


class _Writer:
    def __init__(self, filename: str):
        self.buf = io.BytesIO()
        self.buf.write(_MAGIC[filename])
        self.u32(FORMAT_VERSION)

    def u32(self, value: int) -> None:
        self.buf.write(struct.pack("<I", value))

    def u8(self, value: int) -> None:
        self.buf.write(struct.pack("<B", value))

    def string(self, value: str) -> None:
        raw = value.encode("utf-8")
        self.u32(len(raw))
        self.buf.write(raw)

    def getvalue(self) -> bytes:
        return self.buf.getvalue()


class _Reader:
    def __init__(self, filename: str, data: bytes):
        self.filename = filename
        self.data = data
        self.pos = 0
        magic = _MAGIC[filename]
        if data[:len(magic)] != magic:
            raise CorruptIndex(filename, "bad magic bytes")
        self.pos = len(magic)
        version = self.u32()
        if version != FORMAT_VERSION:
            raise VersionMismatch(version, FORMAT_VERSION)

    def _take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptIndex(self.filename, "truncated file")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u8(self) -> int:
        return struct.unpack("<B", self._take(1))[0]

    def string(self) -> str:
        n = self.u32()
        try:
            return self._take(n).decode("utf-8")
        except UnicodeDecodeError:
            raise CorruptIndex(self.filename, "invalid UTF-8 in string") from None

    def done(self) -> None:
        if self.pos != len(self.data):
            raise CorruptIndex(self.filename, "trailing bytes after last record")


# ---------------------------------------------------------------------------
# write

def persist(index: EvidenceIndex, out_dir) -> dict:
    """Write the index directory; returns the manifest dict."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    manifest = {
        "format_version": FORMAT_VERSION,
        "config": {
            "min_support": index.config.min_support,
            "max_pattern_len": index.config.max_pattern_len,
            "stopwords": list(index.config.stopwords),
            "stem_exceptions": list(index.config.stem_exceptions),
            "abbreviations": list(index.config.abbreviations),
            "synonym_classes": [list(c) for c in index.config.synonym_classes],
            "stemmer": index.config.stemmer,
        },
        "config_hash": index.config.config_hash(),
        "stats": {
            "documents": len(index.documents),
            "sentences": index.stats.n_sentences,
            "avg_sentence_len": index.stats.avg_sentence_len,
            "vocab_size": index.stats.vocab_size,
            "entities": len(index.entity_index),
            "patterns": len(index.patterns),
            "groups": len(index.groups),
        },
    }
    (out / MANIFEST).write_bytes(
        (json.dumps(manifest, sort_keys=True, indent=2) + "\n").encode("utf-8"))

    (out / SENTENCES).write_bytes(_write_sentences(index))
    (out / WORDS).write_bytes(_write_postings(WORDS, index.word_index))
    (out / ENTITIES).write_bytes(_write_entities(index))
    (out / PATTERNS).write_bytes(_write_patterns(index))
    (out / GROUPS).write_bytes(_write_groups(index))
    return manifest


def _write_sentences(index: EvidenceIndex) -> bytes:
    w = _Writer(SENTENCES)
    docs = list(index.documents.values())
    doc_pos = {doc.doc_id: i for i, doc in enumerate(docs)}
    w.u32(len(docs))
    for doc in docs:
        w.string(doc.doc_id)
        w.string(doc.title)
        w.string(doc.body)
        w.u8(1 if doc.source_uri is not None else 0)
        if doc.source_uri is not None:
            w.string(doc.source_uri)
    w.u32(len(index.sentences))
    for sent in index.sentences:
        w.u32(doc_pos[sent.doc_id])
        w.u8(1 if sent.origin == "title" else 0)
        w.u32(sent.char_span[0])
        w.u32(sent.char_span[1])
        w.u32(len(sent.tokens))
        for tok in sent.tokens:
            w.string(tok)
        mentions = index.mentions[sent.sentence_id]
        w.u32(len(mentions))
        for m in mentions:
            w.u32(m.token_span[0])
            w.u32(m.token_span[1])
            w.string(m.entity_type)
            w.string(m.canonical_id)
    return w.getvalue()


def _write_postings(filename: str, postings: dict[str, PostingList]) -> bytes:
    w = _Writer(filename)
    w.u32(len(postings))
    for key in sorted(postings):
        post = postings[key]
        w.string(key)
        w.u32(post.n)
        for sid, tf in post.entries:
            w.u32(sid)
            w.u32(tf)
    return w.getvalue()


def _write_entities(index: EvidenceIndex) -> bytes:
    w = _Writer(ENTITIES)
    w.u32(len(index.entity_types))
    for cid in sorted(index.entity_types):
        w.string(cid)
        w.string(index.entity_types[cid])
    w.u32(len(index.lexicon.entries))
    for entry in index.lexicon.entries:
        w.u32(len(entry.surface))
        for tok in entry.surface:
            w.string(tok)
        w.string(entry.entity_type)
        w.string(entry.canonical_id)
    w.u32(len(index.entity_index))
    for key in sorted(index.entity_index):
        post = index.entity_index[key]
        w.string(key)
        w.u32(post.n)
        for sid, tf in post.entries:
            w.u32(sid)
            w.u32(tf)
    return w.getvalue()


def _write_patterns(index: EvidenceIndex) -> bytes:
    w = _Writer(PATTERNS)
    w.u32(len(index.patterns))
    for p in index.patterns:
        w.u32(p.pattern_id)
        w.u32(p.support)
        w.u32(len(p.items))
        for item in p.items:
            w.string(item)
        tuples = index.pattern_index.get(p.pattern_id, {})
        w.u32(len(tuples))
        for entity_tuple in sorted(tuples):
            w.u32(len(entity_tuple))
            for cid in entity_tuple:
                w.string(cid)
            sids = tuples[entity_tuple]
            w.u32(len(sids))
            for sid in sids:
                w.u32(sid)
    return w.getvalue()


def _write_groups(index: EvidenceIndex) -> bytes:
    payload = {
        "groups": [
            {
                "group_id": g.group_id,
                "member_pattern_ids": list(g.member_pattern_ids),
                "entity_types": list(g.entity_types),
                "content_tokens": list(g.content_tokens),
            }
            for g in index.groups
        ],
        "pattern_to_group": {str(pid): gid for pid, gid in sorted(index.pattern_to_group.items())},
    }
    return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# read

def load(index_dir) -> EvidenceIndex:
    """Load a persisted index directory back into memory."""
    root = Path(index_dir)
    for name in ALL_FILES:
        if not (root / name).exists():
            raise CorruptIndex(name, "missing from index directory")

    try:
        manifest = json.loads((root / MANIFEST).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptIndex(MANIFEST, f"invalid JSON ({exc.msg})") from exc
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(version, FORMAT_VERSION)
    try:
        cfg = manifest["config"]
        config = IndexConfig(
            min_support=int(cfg["min_support"]),
            max_pattern_len=int(cfg["max_pattern_len"]),
            stopwords=tuple(cfg["stopwords"]),
            stem_exceptions=tuple(cfg["stem_exceptions"]),
            abbreviations=tuple(cfg["abbreviations"]),
            synonym_classes=tuple(tuple(c) for c in cfg["synonym_classes"]),
            stemmer=cfg["stemmer"],
        )
        stats_block = manifest["stats"]
        stats = CorpusStats(
            n_sentences=int(stats_block["sentences"]),
            avg_sentence_len=float(stats_block["avg_sentence_len"]),
            vocab_size=int(stats_block["vocab_size"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptIndex(MANIFEST, f"bad manifest field: {exc}") from exc
    if manifest.get("config_hash") != config.config_hash():
        raise CorruptIndex(MANIFEST, "config hash does not match config")

    documents, sentences, mentions = _read_sentences((root / SENTENCES).read_bytes())
    word_index = _read_postings(WORDS, (root / WORDS).read_bytes())
    entity_types, lexicon, entity_index = _read_entities((root / ENTITIES).read_bytes())
    patterns, pattern_index = _read_patterns((root / PATTERNS).read_bytes())
    groups, pattern_to_group = _read_groups((root / GROUPS).read_bytes(), len(patterns))

    n = len(sentences)
    if stats.n_sentences != n:
        raise CorruptIndex(MANIFEST, "sentence count disagrees with sentences.dat")
    for name, postings in ((WORDS, word_index), (ENTITIES, entity_index)):
        for post in postings.values():
            if any(sid >= n for sid, _ in post.entries):
                raise CorruptIndex(name, "posting references unknown sentence id")
    for tuples in pattern_index.values():
        for sids in tuples.values():
            if any(sid >= n for sid in sids):
                raise CorruptIndex(PATTERNS, "posting references unknown sentence id")

    return EvidenceIndex(
        config=config, documents=documents, sentences=sentences, mentions=mentions,
        stats=stats, lexicon=lexicon, word_index=word_index, entity_index=entity_index,
        entity_types=entity_types, patterns=patterns, groups=groups,
        pattern_to_group=pattern_to_group, pattern_index=pattern_index,
    )


def _read_sentences(data: bytes):
    r = _Reader(SENTENCES, data)
    docs: list[Document] = []
    for _ in range(r.u32()):
        doc_id = r.string()
        title = r.string()
        body = r.string()
        uri = r.string() if r.u8() else None
        docs.append(Document(doc_id=doc_id, title=title, body=body, source_uri=uri))
    sentences: list[Sentence] = []
    mentions: list[list[EntityMention]] = []
    for sid in range(r.u32()):
        doc_pos = r.u32()
        if doc_pos >= len(docs):
            raise CorruptIndex(SENTENCES, "sentence references unknown document")
        origin = "title" if r.u8() else "body"
        a, b = r.u32(), r.u32()
        tokens = tuple(r.string() for _ in range(r.u32()))
        sent = Sentence(sentence_id=sid, doc_id=docs[doc_pos].doc_id,
                        char_span=(a, b), tokens=tokens, origin=origin)
        ms = []
        for _ in range(r.u32()):
            ta, tb = r.u32(), r.u32()
            entity_type = r.string()
            canonical_id = r.string()
            ms.append(EntityMention(
                sentence_id=sid, token_span=(ta, tb), entity_type=entity_type,
                canonical_id=canonical_id, surface=" ".join(tokens[ta:tb]),
            ))
        sentences.append(sent)
        mentions.append(ms)
    r.done()
    return docs, sentences, mentions


def _read_posting_entries(r: _Reader) -> list[tuple[int, int]]:
    entries = [(r.u32(), r.u32()) for _ in range(r.u32())]
    if entries != sorted(entries):
        raise CorruptIndex(r.filename, "posting entries out of order")
    return entries


def _read_postings(filename: str, data: bytes) -> dict[str, PostingList]:
    r = _Reader(filename, data)
    postings: dict[str, PostingList] = {}
    for _ in range(r.u32()):
        key = r.string()
        postings[key] = PostingList(key=key, entries=tuple(_read_posting_entries(r)))
    r.done()
    return postings


def _read_entities(data: bytes):
    r = _Reader(ENTITIES, data)
    entity_types = {}
    for _ in range(r.u32()):
        cid = r.string()
        entity_types[cid] = r.string()
    entries = []
    for order in range(r.u32()):
        surface = tuple(r.string() for _ in range(r.u32()))
        if not surface:
            raise CorruptIndex(ENTITIES, "lexicon entry with empty surface")
        entity_type = r.string()
        canonical_id = r.string()
        entries.append(LexiconEntry(surface=surface, entity_type=entity_type,
                                    canonical_id=canonical_id, order=order))
    postings: dict[str, PostingList] = {}
    for _ in range(r.u32()):
        key = r.string()
        postings[key] = PostingList(key=key, entries=tuple(_read_posting_entries(r)))
    r.done()
    return entity_types, Lexicon(entries), postings


def _read_patterns(data: bytes):
    r = _Reader(PATTERNS, data)
    patterns: list[MetaPattern] = []
    pattern_index: dict[int, dict[tuple[str, ...], tuple[int, ...]]] = {}
    for pos in range(r.u32()):
        pid = r.u32()
        if pid != pos:
            raise CorruptIndex(PATTERNS, "pattern ids not dense")
        support = r.u32()
        items = tuple(r.string() for _ in range(r.u32()))
        patterns.append(MetaPattern(pattern_id=pid, items=items, support=support))
        tuples: dict[tuple[str, ...], tuple[int, ...]] = {}
        for _ in range(r.u32()):
            entity_tuple = tuple(r.string() for _ in range(r.u32()))
            sids = tuple(r.u32() for _ in range(r.u32()))
            if list(sids) != sorted(sids):
                raise CorruptIndex(PATTERNS, "sentence ids out of order")
            tuples[entity_tuple] = sids
        pattern_index[pid] = tuples
    r.done()
    return patterns, pattern_index


def _read_groups(data: bytes, n_patterns: int):
    try:
        payload = json.loads(data.decode("utf-8"))
        groups = [
            SynonymGroup(
                group_id=int(g["group_id"]),
                member_pattern_ids=tuple(int(p) for p in g["member_pattern_ids"]),
                entity_types=tuple(g["entity_types"]),
                content_tokens=tuple(g["content_tokens"]),
            )
            for g in payload["groups"]
        ]
        pattern_to_group = {int(k): int(v) for k, v in payload["pattern_to_group"].items()}
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CorruptIndex(GROUPS, f"bad groups payload: {exc}") from exc
    members = {pid for g in groups for pid in g.member_pattern_ids}
    if members != set(range(n_patterns)) or set(pattern_to_group) != members:
        raise CorruptIndex(GROUPS, "groups do not partition the pattern ids")
    for g in groups:
        for pid in g.member_pattern_ids:
            if pattern_to_group.get(pid) != g.group_id:
                raise CorruptIndex(GROUPS, "pattern_to_group disagrees with group members")
    return groups, pattern_to_group
