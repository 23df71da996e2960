"""Structured-answer extraction from noisy generations.

The first balanced-brace substring that parses as a JSON object decides
the outcome; later objects in the same generation are ignored. An object
with interpretable ``answer`` and ``disease`` values is compliant; with
only an interpretable ``answer`` it is partial (such answers still vote
on identification but vote Other on classification); everything else is
non-compliant and goes to the human annotation queue.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from modelvote.errors import InputError
from modelvote.labels import OTHER, ClassCatalog

COMPLIANT = "compliant"
PARTIAL = "partial"
NON_COMPLIANT = "non-compliant"

DEFAULT_KEYS = ("answer", "disease")


@dataclass(frozen=True)
class ParsedAnswer:
    identification: str           # "yes" | "no"
    disease_label: str            # configured disease_id or Other
    source: str = "auto"          # "auto" | "human"

    def __post_init__(self):
        if self.identification not in ("yes", "no"):
            raise InputError(f"identification must be yes/no, got {self.identification!r}")
        if self.source not in ("auto", "human"):
            raise InputError(f"source must be auto/human, got {self.source!r}")


@dataclass(frozen=True)
class ExtractionResult:
    status: str
    answer: ParsedAnswer | None = None
    json_span: tuple[int, int] | None = None

    def __post_init__(self):
        if self.status not in (COMPLIANT, PARTIAL, NON_COMPLIANT):
            raise InputError(f"unknown status {self.status!r}")
        if (self.status == NON_COMPLIANT) != (self.answer is None):
            raise InputError("answer must be present exactly when status is not non-compliant")
        if (self.json_span is None) != (self.status == NON_COMPLIANT):
            raise InputError("json_span must be present exactly when status is not non-compliant")


def interpret_identification(value) -> str | None:
    """Map a JSON scalar onto yes/no; None when uninterpretable."""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (int, float)):
        if value == 1:
            return "yes"
        if value == 0:
            return "no"
        return None
    if isinstance(value, str):
        folded = value.strip().casefold()
        if folded in ("yes", "true", "1"):
            return "yes"
        if folded in ("no", "false", "0"):
            return "no"
    return None


def _balanced_object_end(text: str, start: int) -> int | None:
    """End offset (exclusive) of the brace-balanced span opening at start."""
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i + 1
    return None


def first_json_object(raw_text: str) -> tuple[dict, tuple[int, int]] | None:
    """First balanced-brace substring that parses as a JSON object."""
    pos = raw_text.find("{")
    while pos != -1:
        end = _balanced_object_end(raw_text, pos)
        if end is not None:
            try:
                obj = json.loads(raw_text[pos:end])
            except json.JSONDecodeError:
                pass
            else:
                if isinstance(obj, dict):
                    return obj, (pos, end)
        pos = raw_text.find("{", pos + 1)
    return None


def extract_json(
    raw_text: str,
    catalog: ClassCatalog,
    keys: tuple[str, str] = DEFAULT_KEYS,
) -> ExtractionResult:
    """Classify a generation and pull out its answer if one is present."""
    found = first_json_object(raw_text)
    if found is None:
        return ExtractionResult(status=NON_COMPLIANT)
    obj, span = found
    answer_key, disease_key = keys

    if answer_key not in obj:
        return ExtractionResult(status=NON_COMPLIANT)
    identification = interpret_identification(obj[answer_key])
    if identification is None:
        return ExtractionResult(status=NON_COMPLIANT)

    disease_value = obj.get(disease_key)
    if isinstance(disease_value, str):
        label = catalog.normalize_disease_label(disease_value)
        answer = ParsedAnswer(identification=identification, disease_label=label)
        return ExtractionResult(status=COMPLIANT, answer=answer, json_span=span)

    answer = ParsedAnswer(identification=identification, disease_label=OTHER)
    return ExtractionResult(status=PARTIAL, answer=answer, json_span=span)


@dataclass(frozen=True)
class ComplianceRecord:
    backend_id: str
    total: int
    failures: int

    def __post_init__(self):
        if self.total <= 0:
            raise InputError("total must be > 0")
        if not (0 <= self.failures <= self.total):
            raise InputError("failures must be within [0, total]")

    @property
    def compliance_rate(self) -> float:
        return 1.0 - self.failures / self.total

    @property
    def percent(self) -> float:
        return round(100.0 * self.compliance_rate, 1)


def compliance_report(
    results: Mapping[str, Sequence[ExtractionResult]]
) -> tuple[list[ComplianceRecord], ComplianceRecord]:
    """Per-backend and overall compliance; failures are non-compliant results."""
    if not results:
        raise InputError("no extraction results to report on")
    records = []
    for backend_id in sorted(results):
        outcomes = results[backend_id]
        if not outcomes:
            raise InputError(f"backend {backend_id!r} has no results")
        failures = sum(1 for r in outcomes if r.status == NON_COMPLIANT)
        records.append(
            ComplianceRecord(backend_id=backend_id, total=len(outcomes), failures=failures)
        )
    overall = ComplianceRecord(
        backend_id="overall",
        total=sum(r.total for r in records),
        failures=sum(r.failures for r in records),
    )
    return records, overall


def compliance_from_counts(counts: Mapping[str, tuple[int, int]]
                           ) -> tuple[list[ComplianceRecord], ComplianceRecord]:
    """Same report computed from (failures, total) pairs per backend."""
    if not counts:
        raise InputError("no counts to report on")
    records = [
        ComplianceRecord(backend_id=b, total=total, failures=failures)
        for b, (failures, total) in sorted(counts.items())
    ]
    overall = ComplianceRecord(
        backend_id="overall",
        total=sum(r.total for r in records),
        failures=sum(r.failures for r in records),
    )
    return records, overall
