"""Word segmentation and normalization shared by matching and windowing.

A word is a maximal run of non-whitespace. For matching, words are
case-folded and stripped of leading/trailing non-alphanumeric characters,
so "Babesiosis," matches the term word "babesiosis" while "GVHD" does not
match "GVH". Interior punctuation is kept ("crohn's" stays "crohn's").
"""

from __future__ import annotations

import re
from typing import NamedTuple

_WORD_RE = re.compile(r"\S+")


class WordSpan(NamedTuple):
    word: str
    start: int  # character offset into the source text
    end: int


def word_spans(text: str) -> list[WordSpan]:
    """Maximal non-whitespace runs with their character offsets."""
    return [WordSpan(m.group(), m.start(), m.end()) for m in _WORD_RE.finditer(text)]


def words(text: str) -> list[str]:
    return _WORD_RE.findall(text)


def normalize_word(word: str) -> str:
    """Case-fold and strip non-alphanumeric characters from both ends."""
    folded = word.casefold()
    start, end = 0, len(folded)
    while start < end and not folded[start].isalnum():
        start += 1
    while end > start and not folded[end - 1].isalnum():
        end -= 1
    return folded[start:end]


def phrase_words(term: str) -> tuple[str, ...]:
    """Normalized word sequence of a term; empty words are dropped."""
    return tuple(w for w in (normalize_word(x) for x in words(term)) if w)
