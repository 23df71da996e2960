"""Document and term-list ingestion.

Corpora are line-delimited JSON objects with ``doc_id`` and ``text``
fields. Term lists are TSV rows of ``disease_id``, ``preferred_label``
and pipe-separated synonyms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from modelvote.errors import InputError


class CorpusFormatError(InputError):
    """A record could not be parsed; carries the offending line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class DuplicateIdError(InputError):
    """Two records share an identifier that must be unique."""


@dataclass(frozen=True)
class Document:
    """A single clinical note."""

    doc_id: str
    text: str

    def __post_init__(self):
        if not self.doc_id:
            raise InputError("doc_id must be non-empty")
        if not self.text:
            raise InputError(f"document {self.doc_id!r} has empty text")


@dataclass(frozen=True)
class TermEntry:
    """A disease with its preferred label and matching synonyms."""

    disease_id: str
    preferred_label: str
    synonyms: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.disease_id:
            raise InputError("disease_id must be non-empty")
        if not self.preferred_label:
            raise InputError(f"disease {self.disease_id!r} has empty label")
        folded = [s.casefold() for s in self.synonyms]
        if len(set(folded)) != len(folded):
            raise InputError(f"disease {self.disease_id!r} has duplicate synonyms")

    def all_terms(self) -> tuple[str, ...]:
        """Preferred label plus synonyms, deduplicated case-insensitively."""
        seen: dict[str, str] = {}
        for term in (self.preferred_label, *self.synonyms):
            seen.setdefault(term.casefold(), term)
        return tuple(seen.values())


def load_corpus(path: str | Path) -> list[Document]:
    """Read a line-delimited JSON corpus.

    Raises CorpusFormatError naming the line for malformed records and
    DuplicateIdError when two records share a doc_id.
    """
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(line_no, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise CorpusFormatError(line_no, "record is not an object")
            for fieldname in ("doc_id", "text"):
                if fieldname not in record:
                    raise CorpusFormatError(line_no, f"missing field {fieldname!r}")
            doc_id, text = record["doc_id"], record["text"]
            if not isinstance(doc_id, str) or not isinstance(text, str):
                raise CorpusFormatError(line_no, "doc_id and text must be strings")
            if doc_id in seen:
                raise DuplicateIdError(f"duplicate doc_id {doc_id!r} at line {line_no}")
            try:
                docs.append(Document(doc_id=doc_id, text=text))
            except InputError as exc:
                raise CorpusFormatError(line_no, str(exc)) from exc
            seen.add(doc_id)
    return docs


def write_corpus(docs: Iterable[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"doc_id": doc.doc_id, "text": doc.text}) + "\n")


def load_term_list(path: str | Path) -> list[TermEntry]:
    """Read a TSV term list: disease_id, preferred_label, synonyms (pipe-separated)."""
    entries: list[TermEntry] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            row = line.rstrip("\n")
            if not row.strip():
                continue
            parts = row.split("\t")
            if len(parts) < 2:
                raise CorpusFormatError(line_no, "expected at least disease_id and label")
            disease_id = parts[0].strip()
            label = parts[1].strip()
            synonyms = tuple(
                s.strip() for s in parts[2].split("|") if s.strip()
            ) if len(parts) > 2 else ()
            if disease_id in seen:
                raise DuplicateIdError(
                    f"duplicate disease_id {disease_id!r} at line {line_no}"
                )
            try:
                entries.append(
                    TermEntry(disease_id=disease_id, preferred_label=label, synonyms=synonyms)
                )
            except InputError as exc:
                raise CorpusFormatError(line_no, str(exc)) from exc
            seen.add(disease_id)
    return entries


def write_term_list(entries: Iterable[TermEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(
                "\t".join(
                    (entry.disease_id, entry.preferred_label, "|".join(entry.synonyms))
                )
                + "\n"
            )
