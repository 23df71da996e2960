"""Prompt templates with ``$UPPER_SNAKE$`` placeholder substitution.

Each supported model family has its own template carrying a task
description, an optional worked question/answer exemplar (chain-of-thought
mode), and a JSON answer exemplar the model is asked to imitate.
Substitution is a single pass: values are never re-scanned for
placeholders, so window text cannot inject further expansion.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from modelvote.corpus.windows import ContextWindow
from modelvote.errors import InputError

PLACEHOLDER_RE = re.compile(r"\$([A-Z][A-Z0-9_]*)\$")

DECLARED_PLACEHOLDERS = ("TASK_DESCRIPTION", "EXPLANATION", "JSON", "CONTEXT")

FAMILIES = ("llama2-style", "alpaca-style", "vicuna-style")


class TemplateError(InputError):
    """Template is malformed or a render cannot be completed."""


@dataclass(frozen=True)
class PromptTemplate:
    family: str
    body: str
    mode: str = "cot"                 # "ip" or "cot"
    cot_exemplar: str | None = None
    json_exemplar: str = '{"answer": "yes", "disease": "Babesiosis"}'
    task_description: str = ""
    # key names the answer JSON is expected to carry; extraction follows
    # the template that produced the prompt
    answer_key: str = "answer"
    disease_key: str = "disease"

    def __post_init__(self):
        if self.mode not in ("ip", "cot"):
            raise TemplateError(f"unknown mode {self.mode!r}")
        if not self.answer_key or not self.disease_key:
            raise TemplateError("answer_key and disease_key must be non-empty")

    @property
    def extraction_keys(self) -> tuple[str, str]:
        return (self.answer_key, self.disease_key)

    @property
    def template_id(self) -> str:
        payload = "\x1f".join(
            (self.family, self.mode, self.body, self.cot_exemplar or "",
             self.json_exemplar, self.task_description,
             self.answer_key, self.disease_key)
        )
        digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]
        return f"{self.family}:{digest}"


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    template_id: str
    window_ref: tuple[str, str, int]   # (doc_id, disease_id, window_words)
    content_hash: str

    @staticmethod
    def hash_text(text: str) -> str:
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _substitutions(template: PromptTemplate, window_text: str) -> Mapping[str, str | None]:
    return {
        "TASK_DESCRIPTION": template.task_description or None,
        "EXPLANATION": template.cot_exemplar or None,
        "JSON": template.json_exemplar or None,
        "CONTEXT": window_text or None,
    }


def render_prompt(template: PromptTemplate, window: ContextWindow) -> RenderedPrompt:
    """Substitute every placeholder occurrence in one pass."""
    if not window.text:
        raise TemplateError("window text is empty")
    values = _substitutions(template, window.text)

    missing: list[str] = []
    unknown: list[str] = []

    def sub(match: re.Match) -> str:
        name = match.group(1)
        if name not in values:
            unknown.append(name)
            return match.group(0)
        value = values[name]
        if value is None:
            missing.append(name)
            return match.group(0)
        return value

    text = PLACEHOLDER_RE.sub(sub, template.body)
    if unknown:
        raise TemplateError(f"undeclared placeholders in body: {sorted(set(unknown))}")
    if missing:
        raise TemplateError(f"no value for placeholders: {sorted(set(missing))}")
    return RenderedPrompt(
        text=text,
        template_id=template.template_id,
        window_ref=window.ref,
        content_hash=RenderedPrompt.hash_text(text),
    )


def validate_template(template: PromptTemplate) -> list[str]:
    """Return violations; an empty list means the template is well-formed."""
    violations: list[str] = []
    referenced = set(PLACEHOLDER_RE.findall(template.body))
    for name in sorted(referenced - set(DECLARED_PLACEHOLDERS)):
        violations.append(f"undeclared placeholder {name}")
    if template.mode == "cot" and not (template.cot_exemplar or "").strip():
        violations.append("missing cot_exemplar")
    try:
        parsed = json.loads(template.json_exemplar)
    except (json.JSONDecodeError, TypeError):
        parsed = None
    if not isinstance(parsed, dict):
        violations.append("json_exemplar is not a JSON object")
    else:
        for key in template.extraction_keys:
            if key not in parsed:
                violations.append(f"json_exemplar lacks the {key!r} key")
    return violations


def instruction_variant(template: PromptTemplate) -> PromptTemplate:
    """Plain-instruction version: drop the worked-exemplar block from the body."""
    paragraphs = re.split(r"\n\s*\n", template.body)
    kept = [p for p in paragraphs if "$EXPLANATION$" not in p]
    return replace(template, body="\n\n".join(kept), mode="ip", cot_exemplar=None)


def task_description_for(labels: Iterable[str]) -> str:
    listed = ", ".join(labels)
    return (
        "You are reviewing an excerpt from a clinical discharge note. Decide "
        "whether the patient currently has one of the following rare diseases: "
        f"{listed}. A disease that appears only as family history, or that the "
        "patient had in the past but no longer has, does not count. Name the "
        "disease mentioned in the excerpt."
    )


_SECTION_RE = re.compile(r"^--- *([a-z_]+) *---$", re.MULTILINE)


def parse_template_text(raw: str) -> PromptTemplate:
    """Parse the sectioned template file format.

    A short header (``family:``, ``mode:``) is followed by named sections
    delimited by ``--- name ---`` lines; ``body`` is required.
    """
    pieces = _SECTION_RE.split(raw)
    header, rest = pieces[0], pieces[1:]
    fields: dict[str, str] = {}
    for line in header.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise TemplateError(f"malformed header line {line!r}")
        key, value = line.split(":", 1)
        fields[key.strip()] = value.strip()
    sections = {
        rest[i]: rest[i + 1].strip("\n") for i in range(0, len(rest) - 1, 2)
    }
    if "body" not in sections:
        raise TemplateError("template file has no body section")
    known = {"task_description", "cot_exemplar", "json_exemplar", "body"}
    stray = set(sections) - known
    if stray:
        raise TemplateError(f"unknown template sections: {sorted(stray)}")
    return PromptTemplate(
        family=fields.get("family", "custom"),
        mode=fields.get("mode", "cot"),
        body=sections["body"],
        cot_exemplar=sections.get("cot_exemplar"),
        json_exemplar=sections.get("json_exemplar", PromptTemplate.json_exemplar),
        task_description=sections.get("task_description", ""),
        answer_key=fields.get("answer_key", "answer"),
        disease_key=fields.get("disease_key", "disease"),
    )


def load_template(path: str | Path) -> PromptTemplate:
    return parse_template_text(Path(path).read_text(encoding="utf-8"))


def builtin_templates() -> dict[str, PromptTemplate]:
    """One ready-to-use chain-of-thought template per supported family."""
    out: dict[str, PromptTemplate] = {}
    for family in FAMILIES:
        name = family.removesuffix("-style")
        raw = resources.files("modelvote.prompts").joinpath(f"data/{name}.prompt")
        template = parse_template_text(raw.read_text(encoding="utf-8"))
        out[template.family] = template
    return out
