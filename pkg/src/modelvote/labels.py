"""Disease class catalog and label normalization.

Model outputs name diseases in free text ("giant-cell arteritis (GCA)");
normalization folds case, treats punctuation and hyphens as spaces, and
matches against preferred labels, synonyms, and registered abbreviations.
Anything unmatched maps to the catch-all ``Other`` class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from modelvote.corpus.documents import TermEntry
from modelvote.errors import InputError

OTHER = "Other"

_NON_ALNUM = re.compile(r"[^0-9a-z]+")
_PARENTHETICAL = re.compile(r"\(([^()]*)\)")


def fold_label(text: str) -> str:
    """Case-folded, punctuation-and-hyphen-insensitive single-spaced form."""
    return _NON_ALNUM.sub(" ", text.casefold()).strip()


def _initialism(label: str) -> str:
    words = fold_label(label).split()
    return "".join(w[0] for w in words) if len(words) >= 2 else ""


@dataclass(frozen=True)
class DiseaseClass:
    disease_id: str
    label: str
    synonyms: tuple[str, ...] = ()
    abbreviations: tuple[str, ...] = ()


@dataclass(frozen=True)
class ClassCatalog:
    """The configured disease classes with a normalized lookup table."""

    classes: tuple[DiseaseClass, ...]
    _lookup: Mapping[str, str] = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, classes: Sequence[DiseaseClass]) -> "ClassCatalog":
        if not classes:
            raise InputError("catalog needs at least one class")
        ids = [c.disease_id for c in classes]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate disease_id in catalog")

        lookup: dict[str, str] = {}
        for c in classes:
            for term in (c.label, *c.synonyms):
                key = fold_label(term)
                if not key:
                    continue
                if lookup.get(key, c.disease_id) != c.disease_id:
                    raise InputError(f"label {term!r} is claimed by two classes")
                lookup[key] = c.disease_id

        # Abbreviations (explicit, plus auto initialisms of multi-word
        # labels); ambiguous ones are dropped rather than guessed.
        ambiguous: set[str] = set()
        for c in classes:
            for abbr in (*c.abbreviations, _initialism(c.label)):
                key = fold_label(abbr)
                if len(key) < 2 or key in ambiguous:
                    continue
                if lookup.get(key, c.disease_id) != c.disease_id:
                    del lookup[key]
                    ambiguous.add(key)
                    continue
                lookup[key] = c.disease_id
        return cls(classes=tuple(classes), _lookup=lookup)

    @classmethod
    def from_terms(
        cls,
        entries: Sequence[TermEntry],
        abbreviations: Mapping[str, Sequence[str]] | None = None,
    ) -> "ClassCatalog":
        abbreviations = abbreviations or {}
        return cls.build(
            [
                DiseaseClass(
                    disease_id=e.disease_id,
                    label=e.preferred_label,
                    synonyms=e.synonyms,
                    abbreviations=tuple(abbreviations.get(e.disease_id, ())),
                )
                for e in entries
            ]
        )

    @property
    def disease_ids(self) -> tuple[str, ...]:
        return tuple(c.disease_id for c in self.classes)

    def label_space(self) -> tuple[str, ...]:
        """The closed label set answers live in: configured ids plus Other."""
        return (*self.disease_ids, OTHER)

    def label_of(self, disease_id: str) -> str:
        for c in self.classes:
            if c.disease_id == disease_id:
                return c.label
        raise InputError(f"unknown disease_id {disease_id!r}")

    def normalize_disease_label(self, text: str) -> str:
        """Map free text onto a configured disease_id, or Other."""
        if not isinstance(text, str):
            return OTHER
        candidates = [text, _PARENTHETICAL.sub(" ", text)]
        candidates.extend(m.group(1) for m in _PARENTHETICAL.finditer(text))
        for candidate in candidates:
            hit = self._lookup.get(fold_label(candidate))
            if hit is not None:
                return hit
        return OTHER


def normalize_disease_label(text: str, catalog: ClassCatalog) -> str:
    return catalog.normalize_disease_label(text)


def default_term_entries() -> list[TermEntry]:
    """The four default disease classes with their matching synonyms."""
    return [
        TermEntry("B", "Babesiosis", ("babesia infection",)),
        TermEntry("GCA", "Giant Cell Arteritis", ("temporal arteritis",)),
        TermEntry(
            "GVHD", "Graft Versus Host Disease", ("graft-versus-host disease",)
        ),
        TermEntry("COP", "Cryptogenic Organizing Pneumonia", ()),
    ]
