"""Independent brute-force oracles used by the test suite.

These deliberately avoid the library's own code paths: normalization is
regex-based, matching is a naive scan over all (term, doc) pairs, metrics
are direct confusion-matrix arithmetic, and the t-distribution tail is a
Simpson-rule integration of the density.
"""

from __future__ import annotations

import math
import re
from collections import Counter

_EDGE_PUNCT = re.compile(r"^[\W_]+|[\W_]+$", re.UNICODE)


def oracle_normalize(word: str) -> str:
    return _EDGE_PUNCT.sub("", word.casefold())


def oracle_phrase(term: str) -> tuple[str, ...]:
    return tuple(w for w in (oracle_normalize(x) for x in term.split()) if w)


def naive_scan_postings(docs, term_entries) -> dict[str, list[str]]:
    """Single-threaded naive scan over every (term, doc) pair."""
    phrases: dict[str, tuple[str, ...]] = {}
    for entry in term_entries:
        for raw in (entry.preferred_label, *entry.synonyms):
            tw = oracle_phrase(raw)
            if tw:
                phrases.setdefault(" ".join(tw), tw)
    postings: dict[str, list[str]] = {}
    for key, tw in phrases.items():
        n = len(tw)
        hits = []
        for doc in docs:
            dw = [oracle_normalize(w) for w in doc.text.split()]
            if any(tuple(dw[i : i + n]) == tw for i in range(len(dw) - n + 1)):
                hits.append(doc.doc_id)
        postings[key] = sorted(hits)
    return postings


def naive_scan_postings_joined(docs, term_entries) -> dict[str, list[str]]:
    """Same naive single-threaded scan, via whole-word string containment.

    Normalized document words are space-joined with sentinel spaces, so a
    phrase matches iff its space-joined form occurs as a substring. Scales
    to thousands of documents while staying independent of the library's
    matching path.
    """
    phrases: dict[str, str] = {}
    for entry in term_entries:
        for raw in (entry.preferred_label, *entry.synonyms):
            tw = oracle_phrase(raw)
            if tw:
                phrases.setdefault(" ".join(tw), " " + " ".join(tw) + " ")
    postings: dict[str, list[str]] = {key: [] for key in phrases}
    for doc in docs:
        haystack = " " + " ".join(oracle_normalize(w) for w in doc.text.split()) + " "
        for key, needle in phrases.items():
            if needle in haystack:
                postings[key].append(doc.doc_id)
    return {key: sorted(hits) for key, hits in postings.items()}


def confusion_metrics(predictions, gold, classes):
    """accuracy, macro precision, macro recall, F as harmonic mean of P and R."""
    assert len(predictions) == len(gold)
    n = len(gold)
    accuracy = sum(p == g for p, g in zip(predictions, gold)) / n
    precisions, recalls = [], []
    for c in classes:
        tp = sum(1 for p, g in zip(predictions, gold) if p == c and g == c)
        fp = sum(1 for p, g in zip(predictions, gold) if p == c and g != c)
        fn = sum(1 for p, g in zip(predictions, gold) if p != c and g == c)
        precisions.append(tp / (tp + fp) if tp + fp else 0.0)
        recalls.append(tp / (tp + fn) if tp + fn else 0.0)
    macro_p = sum(precisions) / len(classes)
    macro_r = sum(recalls) / len(classes)
    f = 0.0 if macro_p + macro_r == 0 else 2 * macro_p * macro_r / (macro_p + macro_r)
    return accuracy, macro_p, macro_r, f


def t_density(u: float, df: int) -> float:
    c = math.gamma((df + 1) / 2) / (math.sqrt(df * math.pi) * math.gamma(df / 2))
    return c * (1 + u * u / df) ** (-(df + 1) / 2)


def simpson(f, a: float, b: float, n: int = 20000) -> float:
    if n % 2:
        n += 1
    h = (b - a) / n
    total = f(a) + f(b)
    for i in range(1, n):
        total += f(a + i * h) * (4 if i % 2 else 2)
    return total * h / 3


def two_tailed_p_by_integration(t: float, df: int) -> float:
    """P(|T| >= |t|) via Simpson integration of the central mass."""
    return 1.0 - simpson(lambda u: t_density(u, df), -abs(t), abs(t))


def exhaustive_identification(votes: list[str], threshold: int) -> str:
    yes = sum(v == "yes" for v in votes)
    return "yes" if yes >= threshold else "no"


def exhaustive_classification(votes: list[str]) -> set[str]:
    counts = Counter(votes)
    top = max(counts.values())
    return {label for label, count in counts.items() if count == top}
