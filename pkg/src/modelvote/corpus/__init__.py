"""Corpus ingestion, inverted-index construction, filtering and windowing."""

from modelvote.corpus.documents import (
    Document,
    TermEntry,
    load_corpus,
    load_term_list,
    write_corpus,
    write_term_list,
)
from modelvote.corpus.indexing import (
    InvertedIndex,
    build_inverted_index,
    canonical_term,
    kernel_name,
)
from modelvote.corpus.filters import (
    FilterConfig,
    apply_weak_supervision_filters,
    select_top_diseases,
)
from modelvote.corpus.windows import ContextWindow, extract_context_windows
from modelvote.corpus.synthetic import generate_synthetic_corpus, synthetic_term_list

__all__ = [
    "Document",
    "TermEntry",
    "load_corpus",
    "load_term_list",
    "write_corpus",
    "write_term_list",
    "InvertedIndex",
    "build_inverted_index",
    "canonical_term",
    "kernel_name",
    "FilterConfig",
    "apply_weak_supervision_filters",
    "select_top_diseases",
    "ContextWindow",
    "extract_context_windows",
    "generate_synthetic_corpus",
    "synthetic_term_list",
]
