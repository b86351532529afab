"""Corpus-level aggregates: most-mentioned entities and most-supported relations."""

from __future__ import annotations

from dataclasses import dataclass

from .index import EvidenceIndex


@dataclass(frozen=True)
class EntityFrequency:
    canonical_id: str
    entity_type: str
    sentence_count: int
    mention_count: int


@dataclass(frozen=True)
class RelationFrequency:
    group_id: int
    entity_types: tuple[str, ...]
    content_tokens: tuple[str, ...]
    representative_items: tuple[str, ...]
    entity_tuple: tuple[str, ...]
    sentence_count: int


def top_entities(index: EvidenceIndex, entity_type: str | None = None,
                 top_k: int = 20) -> list[EntityFrequency]:
    """Entities by how many sentences mention them.

    Ties break on canonical_id ascending; entity_type filters exactly.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    rows = []
    for cid, post in index.entity_index.items():
        etype = index.entity_types.get(cid, "")
        if entity_type is not None and etype != entity_type:
            continue
        rows.append(EntityFrequency(
            canonical_id=cid,
            entity_type=etype,
            sentence_count=post.n,
            mention_count=sum(tf for _, tf in post.entries),
        ))
    rows.sort(key=lambda r: (-r.sentence_count, r.canonical_id))
    return rows[:top_k]


def top_relations(index: EvidenceIndex, top_k: int = 20,
                  group_id: int | None = None) -> list[RelationFrequency]:
    """(synonym group, entity tuple) pairs by distinct supporting sentences.

    The representative pattern is the group member with the smallest id
    (highest support under the mining order). Ties break on group_id, then
    the entity tuple.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    rows = []
    for group in index.groups:
        if group_id is not None and group.group_id != group_id:
            continue
        per_tuple: dict[tuple[str, ...], set[int]] = {}
        for pid in group.member_pattern_ids:
            for entity_tuple, sids in index.pattern_index.get(pid, {}).items():
                per_tuple.setdefault(entity_tuple, set()).update(sids)
        representative = index.pattern(group.member_pattern_ids[0]).items
        for entity_tuple, sids in per_tuple.items():
            rows.append(RelationFrequency(
                group_id=group.group_id,
                entity_types=group.entity_types,
                content_tokens=group.content_tokens,
                representative_items=representative,
                entity_tuple=entity_tuple,
                sentence_count=len(sids),
            ))
    rows.sort(key=lambda r: (-r.sentence_count, r.group_id, r.entity_tuple))
    return rows[:top_k]
