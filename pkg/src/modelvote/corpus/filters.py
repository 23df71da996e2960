"""Weak-supervision filters and top-k disease selection.

Two rules prune the index: terms shorter than ``min_term_chars`` go
(ambiguous abbreviations), then terms matching strictly more than
``max_doc_frequency`` of the corpus go (common mentions unlikely to be a
rare disease). Survivors keep their postings verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from modelvote.corpus.documents import TermEntry
from modelvote.corpus.indexing import InvertedIndex, canonical_term
from modelvote.errors import InputError


@dataclass(frozen=True)
class FilterConfig:
    min_term_chars: int = 4
    max_doc_frequency: float = 0.005

    def __post_init__(self):
        if self.min_term_chars < 1:
            raise InputError("min_term_chars must be >= 1")
        if not (0 < self.max_doc_frequency <= 1):
            raise InputError("max_doc_frequency must be in (0, 1]")


def apply_weak_supervision_filters(index: InvertedIndex, cfg: FilterConfig) -> InvertedIndex:
    """Length rule first, then the strict-> prevalence rule."""
    survivors = {
        term: docs
        for term, docs in index.postings.items()
        if len(term) >= cfg.min_term_chars
    }
    threshold = cfg.max_doc_frequency * index.corpus_size
    survivors = {
        term: list(docs)
        for term, docs in survivors.items()
        if not len(docs) > threshold
    }
    return InvertedIndex(postings=survivors, corpus_size=index.corpus_size)


def select_top_diseases(
    index: InvertedIndex, terms: Sequence[TermEntry], k: int
) -> list[str]:
    """Rank diseases by matched-document count (union over synonyms).

    Ties break lexicographically by disease_id; diseases with no matched
    documents in the (filtered) index are not eligible. Returns at most k.
    """
    if k < 0:
        raise InputError("k must be >= 0")
    counts: list[tuple[int, str]] = []
    for entry in terms:
        docs: set[str] = set()
        for raw in entry.all_terms():
            docs.update(index.postings.get(canonical_term(raw), ()))
        if docs:
            counts.append((len(docs), entry.disease_id))
    counts.sort(key=lambda item: (-item[0], item[1]))
    return [disease_id for _, disease_id in counts[:k]]
