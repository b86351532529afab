"""Meta-pattern extraction, mining, grouping, and matching.

A meta-pattern is a short typed sequence such as ("$CHEMICAL", "inhibit",
"$CORONAVIRUS"): entity-type placeholders (written "$TYPE") interleaved with
stemmed, stopword-free content tokens. Patterns are mined from the corpus by
support, then collapsed into synonym groups: patterns with the same ordered
type tuple and the same content-token set (after mapping tokens through
user-supplied equivalence classes) are treated as one relation.

Matching is defined on the normalized view of a sentence: placeholders stay,
content tokens are stemmed, stopwords disappear. A pattern matches a sentence
when its items appear contiguously in that view; an entity tuple constrains
the canonical ids filling the placeholders.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import ArityMismatch, MalformedSynonymConfig
from .lexicon import Placeholder, TypedSequence
from .textnorm import porter_stem


@dataclass(frozen=True)
class MetaPattern:
    pattern_id: int
    items: tuple[str, ...]
    support: int

    @property
    def arity(self) -> int:
        return sum(1 for it in self.items if it.startswith("$"))


@dataclass(frozen=True)
class SynonymGroup:
    group_id: int
    member_pattern_ids: tuple[int, ...]
    entity_types: tuple[str, ...]
    content_tokens: tuple[str, ...]  # canonicalized, sorted


@dataclass(frozen=True)
class PatternMatchRecord:
    pattern_id: int
    sentence_id: int
    entity_tuple: tuple[str, ...]


@dataclass(frozen=True)
class NormItem:
    """One slot of a sentence's normalized view.

    key is "$TYPE" for a placeholder or the stemmed token otherwise;
    token_span locates the slot back in the sentence's raw token list.
    """

    key: str
    canonical_id: str | None
    token_span: tuple[int, int]


def placeholder_key(entity_type: str) -> str:
    return "$" + entity_type


def is_placeholder(item: str) -> bool:
    return item.startswith("$")


class PatternNormalizer:
    """Stemming + stopword policy shared by mining, matching, and queries."""

    def __init__(self, stopwords: frozenset[str], stem_exceptions: frozenset[str] = frozenset()):
        self.stopwords = stopwords
        self.stem_exceptions = stem_exceptions
        self._cache: dict[str, str] = {}

    def stem(self, token: str) -> str:
        if token in self.stem_exceptions:
            return token
        hit = self._cache.get(token)
        if hit is None:
            hit = porter_stem(token)
            self._cache[token] = hit
        return hit

    def content_key(self, token: str) -> str | None:
        """Stemmed form of a content token, or None when it is a stopword."""
        if token in self.stopwords:
            return None
        return self.stem(token)

    def normalized_view(self, seq: TypedSequence) -> list[NormItem]:
        """Collapse a typed sequence to its match view, keeping token spans."""
        out: list[NormItem] = []
        pos = 0
        for item in seq.items:
            if isinstance(item, Placeholder):
                width = len(item.tokens)
                out.append(NormItem(
                    key=placeholder_key(item.entity_type),
                    canonical_id=item.canonical_id,
                    token_span=(pos, pos + width),
                ))
                pos += width
            else:
                key = self.content_key(item)
                if key is not None:
                    out.append(NormItem(key=key, canonical_id=None, token_span=(pos, pos + 1)))
                pos += 1
        return out


def read_synonym_classes(path) -> tuple[tuple[str, ...], ...]:
    """Raw equivalence classes from a synonym file, one class per line."""
    classes: list[tuple[str, ...]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                classes.append(tuple(line.split()))
    return tuple(classes)


def load_synonym_config(path, normalizer: PatternNormalizer) -> dict[str, str]:
    """Read whitespace-separated equivalence classes, one per line.

    Tokens are stemmed on load; every member maps to the class representative
    (the stem of the first token on its line). A stem appearing in two
    classes is rejected: equivalence must stay a partition.
    """
    mapping: dict[str, str] = {}
    owner: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            stems = []
            for token in line.split():
                stems.append(normalizer.stem(token.lower()))
            rep = stems[0]
            for stem in stems:
                if stem in owner and mapping[stem] != rep:
                    raise MalformedSynonymConfig(
                        line_no, f"token {stem!r} already belongs to the class from line {owner[stem]}")
                if stem not in owner:
                    owner[stem] = line_no
                mapping[stem] = rep
    return mapping


def extract_candidates(seq: TypedSequence, max_len: int,
                       normalizer: PatternNormalizer) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """All candidate (pattern items, entity tuple) pairs of one sentence.

    Every contiguous window of the typed sequence up to max_len items that
    contains at least one placeholder is considered; its content tokens are
    stemmed, stopwords are dropped, and the window is emitted when at least
    one content token survives. Duplicates within the sentence are removed,
    first occurrence order preserved.
    """
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    items = seq.items
    n = len(items)
    seen: set[tuple[tuple[str, ...], tuple[str, ...]]] = set()
    out: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    for i in range(n):
        for j in range(i + 1, min(i + max_len, n) + 1):
            pattern: list[str] = []
            entity_tuple: list[str] = []
            for item in items[i:j]:
                if isinstance(item, Placeholder):
                    pattern.append(placeholder_key(item.entity_type))
                    entity_tuple.append(item.canonical_id)
                else:
                    key = normalizer.content_key(item)
                    if key is not None:
                        pattern.append(key)
            if not entity_tuple or len(pattern) == len(entity_tuple):
                continue
            cand = (tuple(pattern), tuple(entity_tuple))
            if cand not in seen:
                seen.add(cand)
                out.append(cand)
    return out


def mine_patterns(candidates, min_support: int) -> list[MetaPattern]:
    """Keep pattern item sequences whose corpus support reaches min_support.

    `candidates` is the concatenation of per-sentence extract_candidates
    output; each (items, tuple) pair counts once per sentence by
    construction. Ids are dense, ordered by descending support and then by
    items, so identical corpora always yield identical ids.
    """
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    support: Counter = Counter()
    for items, _ in candidates:
        support[items] += 1
    kept = [(items, count) for items, count in support.items() if count >= min_support]
    kept.sort(key=lambda pair: (-pair[1], pair[0]))
    return [MetaPattern(pattern_id=i, items=items, support=count)
            for i, (items, count) in enumerate(kept)]


def group_signature(items: tuple[str, ...], synonym_map: dict[str, str]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    types = tuple(it[1:] for it in items if is_placeholder(it))
    tokens = tuple(sorted({synonym_map.get(it, it) for it in items if not is_placeholder(it)}))
    return types, tokens


def build_synonym_groups(patterns: list[MetaPattern],
                         synonym_map: dict[str, str]) -> tuple[list[SynonymGroup], dict[int, int]]:
    """Partition patterns into synonym groups.

    Returns the group list plus the pattern_id -> group_id dictionary; the
    group's member tuple is the inverse direction. Group ids are dense,
    ordered by the smallest member pattern_id.
    """
    by_sig: dict[tuple, list[int]] = {}
    sig_of: dict[int, tuple] = {}
    for p in patterns:
        sig = group_signature(p.items, synonym_map)
        by_sig.setdefault(sig, []).append(p.pattern_id)
        sig_of[p.pattern_id] = sig
    ordered = sorted(by_sig.items(), key=lambda kv: min(kv[1]))
    groups: list[SynonymGroup] = []
    pattern_to_group: dict[int, int] = {}
    for gid, (sig, members) in enumerate(ordered):
        members = tuple(sorted(members))
        groups.append(SynonymGroup(
            group_id=gid,
            member_pattern_ids=members,
            entity_types=sig[0],
            content_tokens=sig[1],
        ))
        for pid in members:
            pattern_to_group[pid] = gid
    return groups, pattern_to_group


@dataclass(frozen=True)
class Occurrence:
    """One place a pattern matches: norm-item range plus filler ids."""

    entity_tuple: tuple[str, ...]
    item_range: tuple[int, int]  # [start, end) into the normalized view


def find_occurrences(items: tuple[str, ...], view: list[NormItem],
                     entity_tuple: tuple[str, ...] | None = None) -> list[Occurrence]:
    """All contiguous matches of `items` in a normalized view."""
    width = len(items)
    out: list[Occurrence] = []
    for start in range(len(view) - width + 1):
        fillers: list[str] = []
        ok = True
        for offset, want in enumerate(items):
            slot = view[start + offset]
            if slot.key != want:
                ok = False
                break
            if slot.canonical_id is not None:
                fillers.append(slot.canonical_id)
        if not ok:
            continue
        filler_tuple = tuple(fillers)
        if entity_tuple is not None and filler_tuple != entity_tuple:
            continue
        out.append(Occurrence(entity_tuple=filler_tuple, item_range=(start, start + width)))
    return out


def match_pattern(items: tuple[str, ...], seq: TypedSequence,
                  normalizer: PatternNormalizer,
                  entity_tuple: tuple[str, ...] | None = None) -> bool:
    """True when the pattern occurs in the sentence's normalized view.

    With an entity_tuple, the placeholder fillers must equal it in order;
    its length must equal the pattern arity.
    """
    if entity_tuple is not None:
        arity = sum(1 for it in items if is_placeholder(it))
        if len(entity_tuple) != arity:
            raise ArityMismatch(arity, len(entity_tuple))
    view = normalizer.normalized_view(seq)
    return bool(find_occurrences(items, view, entity_tuple))
