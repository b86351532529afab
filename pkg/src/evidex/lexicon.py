"""Dictionary-driven entity tagging.

A lexicon maps surface token sequences to (entity_type, canonical_id).
Tagging is greedy leftmost-longest over sentence tokens, case-insensitive
because tokens are already lowercased, and never produces overlapping
mentions. Synonyms share a canonical_id, which is the key the entity index
aggregates on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Sentence
from .errors import EmptyLexicon, MalformedRow, OverlappingMentions
from .textnorm import tokenize


@dataclass(frozen=True)
class LexiconEntry:
    surface: tuple[str, ...]
    entity_type: str
    canonical_id: str
    order: int  # position in the lexicon file, used for tie-breaking


@dataclass(frozen=True)
class EntityMention:
    sentence_id: int
    token_span: tuple[int, int]  # [start, end) into sentence tokens
    entity_type: str
    canonical_id: str
    surface: str


@dataclass(frozen=True)
class Placeholder:
    """A mention collapsed to one typed slot in a TypedSequence."""

    entity_type: str
    canonical_id: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class TypedSequence:
    sentence_id: int
    items: tuple  # str tokens interleaved with Placeholder slots


class Lexicon:
    """Entries plus the first-token dispatch table the tagger matches with."""

    def __init__(self, entries: list[LexiconEntry]):
        if not entries:
            raise EmptyLexicon()
        self.entries = list(entries)
        self.types = sorted({e.entity_type for e in entries})
        self._by_first: dict[str, list[LexiconEntry]] = {}
        for entry in self.entries:
            self._by_first.setdefault(entry.surface[0], []).append(entry)
        # longest surface first; file order breaks length ties
        for cands in self._by_first.values():
            cands.sort(key=lambda e: (-len(e.surface), e.order))
        self._by_surface: dict[tuple[str, ...], LexiconEntry] = {}
        for entry in self.entries:
            self._by_surface.setdefault(entry.surface, entry)

    def __len__(self) -> int:
        return len(self.entries)

    def candidates(self, first_token: str) -> list[LexiconEntry]:
        return self._by_first.get(first_token, [])

    def lookup_surface(self, tokens: list[str] | tuple[str, ...]) -> LexiconEntry | None:
        """Exact full-sequence match; first entry in file order wins."""
        return self._by_surface.get(tuple(tokens))


def load_lexicon(path) -> Lexicon:
    """Read a TSV of surface, entity_type, canonical_id rows.

    Blank lines and lines starting with '#' are skipped. Surfaces are run
    through the tokenizer, so casing and edge punctuation in the file do
    not matter.
    """
    entries: list[LexiconEntry] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 3:
                raise MalformedRow(line_no, f"expected 3 tab-separated columns, got {len(cols)}")
            surface_text, entity_type, canonical_id = (c.strip() for c in cols)
            surface = tuple(tokenize(surface_text))
            if not surface:
                raise MalformedRow(line_no, "surface tokenizes to nothing")
            if not entity_type:
                raise MalformedRow(line_no, "empty entity_type")
            if not canonical_id:
                raise MalformedRow(line_no, "empty canonical_id")
            entries.append(LexiconEntry(
                surface=surface,
                entity_type=entity_type,
                canonical_id=canonical_id,
                order=len(entries),
            ))
    return Lexicon(entries)


def tag_sentence(sentence: Sentence, lexicon: Lexicon) -> list[EntityMention]:
    """Greedy leftmost-longest dictionary matching over sentence tokens."""
    tokens = sentence.tokens
    mentions: list[EntityMention] = []
    i = 0
    n = len(tokens)
    while i < n:
        hit = None
        for entry in lexicon.candidates(tokens[i]):
            span = len(entry.surface)
            if i + span <= n and tuple(tokens[i:i + span]) == entry.surface:
                hit = entry
                break
        if hit is None:
            i += 1
            continue
        end = i + len(hit.surface)
        mentions.append(EntityMention(
            sentence_id=sentence.sentence_id,
            token_span=(i, end),
            entity_type=hit.entity_type,
            canonical_id=hit.canonical_id,
            surface=" ".join(tokens[i:end]),
        ))
        i = end
    return mentions


def typed_sequence(sentence: Sentence, mentions: list[EntityMention]) -> TypedSequence:
    """Collapse each mention into a typed placeholder slot.

    Mentions must be sorted and non-overlapping; expanding every placeholder
    back to its tokens reproduces sentence.tokens exactly.
    """
    items: list = []
    pos = 0
    for m in sorted(mentions, key=lambda m: m.token_span):
        start, end = m.token_span
        if start < pos:
            raise OverlappingMentions(sentence.sentence_id)
        items.extend(sentence.tokens[pos:start])
        items.append(Placeholder(
            entity_type=m.entity_type,
            canonical_id=m.canonical_id,
            tokens=tuple(sentence.tokens[start:end]),
        ))
        pos = end
    items.extend(sentence.tokens[pos:])
    return TypedSequence(sentence_id=sentence.sentence_id, items=tuple(items))


def load_mentions_tsv(path) -> dict[str, list[tuple[int, int, str, str]]]:
    """Read precomputed mentions: doc_id, char_start, char_end, type, canonical_id.

    Offsets are into the document body. Returns rows grouped by doc_id in
    file order; alignment to sentences and tokens happens at build time.
    """
    rows: dict[str, list[tuple[int, int, str, str]]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 5:
                raise MalformedRow(line_no, f"expected 5 tab-separated columns, got {len(cols)}")
            doc_id, start_s, end_s, entity_type, canonical_id = (c.strip() for c in cols)
            try:
                start, end = int(start_s), int(end_s)
            except ValueError:
                raise MalformedRow(line_no, "char offsets are not integers") from None
            if start < 0 or end <= start:
                raise MalformedRow(line_no, "empty or negative char span")
            if not doc_id or not entity_type or not canonical_id:
                raise MalformedRow(line_no, "empty doc_id, type, or canonical_id")
            rows.setdefault(doc_id, []).append((start, end, entity_type, canonical_id))
    return rows


def align_mentions(sentence: Sentence, rows: list[tuple[int, int, str, str]],
                   token_spans: list[tuple[str, int, int]]) -> list[EntityMention]:
    """Snap imported char-span mentions to this sentence's tokens.

    A row is kept when its span overlaps at least one token of the sentence;
    the mention covers every overlapped token. Overlapping results are
    resolved leftmost-longest, matching the tagger's guarantee.
    """
    a, b = sentence.char_span
    snapped: list[tuple[int, int, str, str]] = []
    for start, end, entity_type, canonical_id in rows:
        if end <= a or start >= b:
            continue
        rel_start, rel_end = start - a, end - a
        covered = [idx for idx, (_, ta, tb) in enumerate(token_spans)
                   if ta < rel_end and tb > rel_start]
        if covered:
            snapped.append((covered[0], covered[-1] + 1, entity_type, canonical_id))
    snapped.sort(key=lambda r: (r[0], r[0] - r[1]))
    mentions: list[EntityMention] = []
    pos = 0
    for start, end, entity_type, canonical_id in snapped:
        if start < pos:
            continue
        mentions.append(EntityMention(
            sentence_id=sentence.sentence_id,
            token_span=(start, end),
            entity_type=entity_type,
            canonical_id=canonical_id,
            surface=" ".join(sentence.tokens[start:end]),
        ))
        pos = end
    return mentions
