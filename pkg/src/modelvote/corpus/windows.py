"""Fixed-word context windows around the first disease mention.

Windows are centered on the first mention at word granularity. When
centering would clip at a document edge, the window extends on the
opposite side so it still reaches the requested word count; documents
shorter than the window yield the whole document.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from modelvote.corpus.documents import Document, TermEntry
from modelvote.corpus.indexing import InvertedIndex, canonical_term
from modelvote.corpus.text import normalize_word, phrase_words, word_spans
from modelvote.errors import InputError


class NoMentionError(InputError):
    """A requested disease has no matching documents (or none in a doc)."""


@dataclass(frozen=True)
class ContextWindow:
    doc_id: str
    disease_id: str
    window_words: int
    text: str
    gold_identification: bool | None = None
    gold_disease: str | None = None

    @property
    def ref(self) -> tuple[str, str, int]:
        return (self.doc_id, self.disease_id, self.window_words)


def first_mention(doc_words: Sequence[str], phrases: Sequence[tuple[str, ...]]):
    """Earliest phrase occurrence as (start_word, word_length), longest on ties."""
    best: tuple[int, int] | None = None
    for phrase in phrases:
        plen = len(phrase)
        if plen == 0:
            continue
        limit = len(doc_words) - plen + 1
        for start in range(limit):
            if best is not None and start > best[0]:
                break
            if tuple(doc_words[start : start + plen]) == phrase:
                if best is None or (start, -plen) < (best[0], -best[1]):
                    best = (start, plen)
                break
    return best


def window_span(n_words: int, mention_start: int, mention_len: int, size: int):
    """Word-index range [start, end) of the window."""
    if n_words <= size:
        return 0, n_words
    slack = max(0, size - mention_len)
    start = mention_start - slack // 2
    start = max(0, min(start, n_words - size))
    return start, start + size


def extract_context_windows(
    corpus: Sequence[Document],
    index: InvertedIndex,
    terms: Sequence[TermEntry],
    disease_ids: Sequence[str],
    sizes: Sequence[int],
    gold: Mapping[str, tuple[bool, str]] | None = None,
) -> list[ContextWindow]:
    """One window per (matched document, disease, size).

    ``gold`` optionally maps doc_id to (identification, disease_id) labels
    stamped onto the extracted windows. Sizes should exceed the longest
    term phrase or containment cannot hold.
    """
    by_id = {entry.disease_id: entry for entry in terms}
    docs_by_id = {doc.doc_id: doc for doc in corpus}
    out: list[ContextWindow] = []
    for disease_id in disease_ids:
        entry = by_id.get(disease_id)
        if entry is None:
            raise InputError(f"unknown disease {disease_id!r}")
        phrases = [phrase_words(t) for t in entry.all_terms()]
        matched: set[str] = set()
        for raw in entry.all_terms():
            matched.update(index.postings.get(canonical_term(raw), ()))
        if not matched:
            raise NoMentionError(f"disease {disease_id!r} has no matching documents")
        for doc_id in sorted(matched):
            doc = docs_by_id.get(doc_id)
            if doc is None:
                raise InputError(f"index references unknown document {doc_id!r}")
            spans = word_spans(doc.text)
            norm = [normalize_word(s.word) for s in spans]
            mention = first_mention(norm, phrases)
            if mention is None:
                raise NoMentionError(
                    f"no mention of {disease_id!r} found in document {doc_id!r}"
                )
            doc_gold = gold.get(doc_id) if gold else None
            for size in sorted(set(sizes)):
                if size < 1:
                    raise InputError("window sizes must be >= 1")
                lo, hi = window_span(len(spans), mention[0], mention[1], size)
                text = doc.text[spans[lo].start : spans[hi - 1].end]
                out.append(
                    ContextWindow(
                        doc_id=doc_id,
                        disease_id=disease_id,
                        window_words=size,
                        text=text,
                        gold_identification=None if doc_gold is None else bool(doc_gold[0]),
                        gold_disease=None if doc_gold is None else doc_gold[1],
                    )
                )
    return out


def contains_mention(window_text: str, entry: TermEntry) -> bool:
    """Case-insensitive, whitespace-collapsed search for any synonym."""
    haystack = " ".join(window_text.casefold().split())
    for raw in entry.all_terms():
        needle = " ".join(raw.casefold().split())
        if needle and needle in haystack:
            return True
    return False
