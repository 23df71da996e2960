"""Inverted-index construction by parallel whole-word phrase matching.

The hot loop lives in a compiled Cython kernel when available; a
pure-Python kernel with the same contract is selected at import time
otherwise (or when ``MODELVOTE_PURE_PYTHON=1``). Documents are fanned out
across worker threads in chunks; the compiled kernel releases the GIL, so
threads run truly in parallel. Merging is a commutative set union with a
canonical sort, so the result is independent of scheduling.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from modelvote.corpus import _match_py
from modelvote.corpus.documents import Document, TermEntry
from modelvote.corpus.text import normalize_word, phrase_words, words
from modelvote.errors import InputError

if os.environ.get("MODELVOTE_PURE_PYTHON"):
    _KERNEL = _match_py
else:
    try:
        from modelvote.corpus import _match_cy as _KERNEL  # type: ignore[no-redef]
    except ImportError:
        _KERNEL = _match_py


def kernel_name() -> str:
    """Which matching kernel was selected at import: 'compiled' or 'python'."""
    return "python" if _KERNEL is _match_py else "compiled"


def canonical_term(term: str) -> str:
    """Case-folded, punctuation-stripped single-spaced form used as postings key."""
    return " ".join(phrase_words(term))


@dataclass
class InvertedIndex:
    """Map from canonical term to the sorted unique doc_ids containing it."""

    postings: dict[str, list[str]]
    corpus_size: int

    def doc_frequency(self, term: str) -> int:
        return len(self.postings.get(canonical_term(term), ()))

    def validate(self, corpus_ids: set[str] | None = None) -> None:
        """Check invariants; raises InputError on violation."""
        for term, docs in self.postings.items():
            if any(a >= b for a, b in zip(docs, docs[1:])):
                raise InputError(f"posting list for {term!r} is not strictly sorted")
            if len(docs) > self.corpus_size:
                raise InputError(f"posting list for {term!r} exceeds corpus size")
            if corpus_ids is not None:
                unknown = set(docs) - corpus_ids
                if unknown:
                    raise InputError(f"posting for {term!r} references unknown docs {unknown}")

    def to_json(self) -> str:
        return json.dumps(
            {"corpus_size": self.corpus_size,
             "postings": {t: self.postings[t] for t in sorted(self.postings)}},
            indent=2,
        )

    @classmethod
    def from_json(cls, payload: str) -> "InvertedIndex":
        data = json.loads(payload)
        return cls(postings={k: list(v) for k, v in data["postings"].items()},
                   corpus_size=int(data["corpus_size"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "InvertedIndex":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class _TermTable:
    """Flattened term phrases over a shared word vocabulary."""

    keys: tuple[str, ...]                  # canonical term strings, sorted
    vocab: dict[str, int]                  # term word -> id
    terms: np.ndarray                      # int32, concatenated word ids
    term_bounds: np.ndarray                # int32, len(keys)+1
    cand_start: np.ndarray                 # int32, len(vocab)+1
    cand_terms: np.ndarray                 # int32, term indices by first word


def _build_term_table(entries: Sequence[TermEntry]) -> _TermTable:
    phrases: dict[str, tuple[str, ...]] = {}
    for entry in entries:
        for raw in entry.all_terms():
            tokens = phrase_words(raw)
            if tokens:
                phrases.setdefault(" ".join(tokens), tokens)
    keys = tuple(sorted(phrases))
    vocab: dict[str, int] = {}
    for key in keys:
        for word in phrases[key]:
            vocab.setdefault(word, len(vocab))

    flat: list[int] = []
    bounds = [0]
    for key in keys:
        flat.extend(vocab[w] for w in phrases[key])
        bounds.append(len(flat))

    by_first: list[list[int]] = [[] for _ in range(len(vocab))]
    for idx, key in enumerate(keys):
        by_first[vocab[phrases[key][0]]].append(idx)
    cand_start = [0]
    cand_terms: list[int] = []
    for lst in by_first:
        cand_terms.extend(lst)
        cand_start.append(len(cand_terms))

    return _TermTable(
        keys=keys,
        vocab=vocab,
        terms=np.asarray(flat, dtype=np.int32),
        term_bounds=np.asarray(bounds, dtype=np.int32),
        cand_start=np.asarray(cand_start, dtype=np.int32),
        cand_terms=np.asarray(cand_terms, dtype=np.int32),
    )


def _encode_chunk(docs: Sequence[Document], vocab: dict[str, int],
                  memo: dict[str, int]):
    # memo caches raw word -> id (-1 for out-of-vocabulary). Corpora repeat
    # words heavily, so after warmup each document encodes as one regex
    # pass plus one C-level map over the memo. Shared across worker
    # threads; dict get/set are atomic under the GIL.
    tokens: list[int] = []
    bounds = [0]
    memo_get = memo.get
    for doc in docs:
        raw_words = words(doc.text)
        ids = list(map(memo_get, raw_words))
        if None in ids:
            for i, word_id in enumerate(ids):
                if word_id is None:
                    raw = raw_words[i]
                    word_id = vocab.get(normalize_word(raw), -1)
                    memo[raw] = word_id
                    ids[i] = word_id
        tokens.extend(ids)
        bounds.append(len(tokens))
    return (np.asarray(tokens, dtype=np.int32),
            np.asarray(bounds, dtype=np.int64))


def _match_docs(docs: Sequence[Document], table: _TermTable, kernel,
                memo: dict[str, int]) -> np.ndarray:
    tokens, bounds = _encode_chunk(docs, table.vocab, memo)
    out = np.zeros((len(docs), len(table.keys)), dtype=np.uint8)
    if len(table.keys):
        kernel.match_chunk(tokens, bounds, table.terms, table.term_bounds,
                           table.cand_start, table.cand_terms, out)
    return out


def build_inverted_index(
    corpus: Sequence[Document],
    terms: Sequence[TermEntry],
    *,
    workers: int | None = None,
    chunk_size: int = 512,
    kernel: str | None = None,
) -> InvertedIndex:
    """Match every term against every document and assemble postings.

    A term maps to exactly the documents containing it as a whole-word,
    case-insensitive contiguous phrase. ``kernel`` forces 'compiled' or
    'python' (used by the benchmark); default is the import-time choice.
    """
    if kernel is None:
        impl = _KERNEL
    elif kernel == "python":
        impl = _match_py
    elif kernel == "compiled":
        from modelvote.corpus import _match_cy as impl  # raises if unavailable
    else:
        raise InputError(f"unknown kernel {kernel!r}")

    table = _build_term_table(terms)
    matched: list[set[str]] = [set() for _ in table.keys]
    memo: dict[str, int] = {}

    chunks = [corpus[i : i + chunk_size] for i in range(0, len(corpus), chunk_size)]
    if workers is None:
        workers = min(8, os.cpu_count() or 1)

    def run(chunk):
        return chunk, _match_docs(chunk, table, impl, memo)

    if len(chunks) <= 1 or workers <= 1:
        results = map(run, chunks)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))

    for chunk, out in results:
        for local, doc in enumerate(chunk):
            for t in np.flatnonzero(out[local]):
                matched[t].add(doc.doc_id)

    postings = {key: sorted(matched[i]) for i, key in enumerate(table.keys)}
    return InvertedIndex(postings=postings, corpus_size=len(corpus))
