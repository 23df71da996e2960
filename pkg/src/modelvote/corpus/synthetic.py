"""Seeded synthetic corpora for desk-scale runs and tests.

Each generated note embeds exactly one disease mention. Positive notes
phrase the mention as a current condition; negative notes phrase it as
family history or a resolved past disease, mirroring the annotation rule
that only present disease counts as positive.
"""

from __future__ import annotations

import random
from typing import NamedTuple, Sequence

from modelvote.corpus.documents import Document, TermEntry
from modelvote.corpus.text import phrase_words
from modelvote.errors import InputError


class GoldLabel(NamedTuple):
    identification: bool
    disease_id: str


_FILLER = (
    "admission hospital course stable patient review systems negative vital signs "
    "within normal limits daily medication dose continued improved tolerated diet "
    "advanced without complication follow up scheduled with primary care provider "
    "laboratory values trended toward baseline chest radiograph showed clear lung "
    "fields no acute distress examination unremarkable alert oriented ambulating "
    "independently discharged home good condition instructions provided return "
    "precautions discussed electrolytes repleted as needed pain controlled oral "
    "analgesia sleep appetite reported adequate physical therapy evaluated "
    "recommended outpatient services renal function remained hepatic panel mild "
    "elevation resolved overnight monitoring telemetry unchanged repeat imaging "
    "deferred pending consultation service agreed plan documented above"
).split()

_POSITIVE_TEMPLATES = (
    "The patient was diagnosed with {term} during this admission.",
    "Findings this admission are consistent with active {term}.",
    "She is currently being treated for {term}.",
    "Workup confirmed {term} and therapy was started.",
)

_NEGATIVE_TEMPLATES = (
    "Family history is notable for {term} in a first-degree relative.",
    "The patient's mother had {term}.",
    "He was treated for {term} many years ago and has fully recovered since.",
    "Remote history of {term}, resolved well before this admission.",
)

_SYLLABLES = (
    "vel mor cor tev ran dal pex on ith qua bren zal ur fen lis tak "
    "ome dru yel sarn pol vix nur gam het"
).split()


def generate_synthetic_corpus(
    seed: int,
    n_docs: int,
    diseases: Sequence[TermEntry],
    positive_rate: float,
    *,
    doc_words: tuple[int, int] = (60, 200),
) -> tuple[list[Document], dict[str, GoldLabel]]:
    """Deterministic corpus of n_docs notes, one disease mention each.

    Returns the documents and a doc_id -> GoldLabel map. Filler vocabulary
    is purged of any word occurring in a disease term, so no note matches
    a disease it does not deliberately mention.
    """
    if not diseases:
        raise InputError("at least one disease is required")
    if not (0 <= positive_rate <= 1):
        raise InputError("positive_rate must be in [0, 1]")

    term_words = {w for e in diseases for t in e.all_terms() for w in phrase_words(t)}
    filler = [w for w in _FILLER if w not in term_words]

    rng = random.Random(seed)
    docs: list[Document] = []
    gold: dict[str, GoldLabel] = {}
    for i in range(n_docs):
        # round-robin so every disease is covered once n_docs >= len(diseases)
        entry = diseases[i % len(diseases)]
        term = entry.all_terms()[rng.randrange(len(entry.all_terms()))]
        positive = rng.random() < positive_rate
        templates = _POSITIVE_TEMPLATES if positive else _NEGATIVE_TEMPLATES
        mention = templates[rng.randrange(len(templates))].format(term=term)

        target = rng.randint(*doc_words)
        sentences: list[str] = []
        total = 0
        while total < target:
            n = rng.randint(6, 12)
            sentence_words = [filler[rng.randrange(len(filler))] for _ in range(n)]
            sentences.append(" ".join(sentence_words).capitalize() + ".")
            total += n
        sentences.insert(rng.randrange(len(sentences) + 1), mention)

        doc_id = f"doc-{i:05d}"
        docs.append(Document(doc_id=doc_id, text=" ".join(sentences)))
        gold[doc_id] = GoldLabel(identification=positive, disease_id=entry.disease_id)
    return docs, gold


def synthetic_term_list(n: int, seed: int = 0) -> list[TermEntry]:
    """n invented disease entries with unique stems, for index stress tests."""
    rng = random.Random(seed)
    stems: list[str] = []
    seen: set[str] = set()
    while len(stems) < n:
        stem = "".join(rng.choice(_SYLLABLES) for _ in range(3))
        if stem not in seen and len(stem) >= 6:
            seen.add(stem)
            stems.append(stem)
    return [
        TermEntry(
            disease_id=f"RD{i:03d}",
            preferred_label=stem.capitalize() + "osis",
            synonyms=(f"{stem} infection",),
        )
        for i, stem in enumerate(stems)
    ]
