"""Scripted mock backends for tests and desk-scale runs.

All stochastic behaviors draw from a hash of (seed, prompt_hash,
sample_index), never from call order, so transcripts are reproducible
under any scheduling and across interrupted/resumed runs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Mapping

from modelvote.backends.base import BackendSpec, GenerationResult
from modelvote.errors import InputError
from modelvote.prompts import RenderedPrompt

BEHAVIORS = ("always-correct", "always-wrong", "accuracy", "canned", "non-compliant-rate")

DEFAULT_CLASS_LABELS = (
    "Babesiosis",
    "Giant Cell Arteritis",
    "Graft Versus Host Disease",
    "Cryptogenic Organizing Pneumonia",
)


@dataclass(frozen=True)
class MockScript:
    """What a mock backend should do with each prompt.

    ``gold_source`` maps doc_id (from the prompt's window_ref) to the gold
    (identification, disease label) pair that "correct" answers repeat.
    """

    behavior: str = "always-correct"
    accuracy: float = 1.0
    non_compliant_rate: float = 0.0
    seed: int = 0
    canned: Mapping[str, str] = field(default_factory=dict)  # prompt_hash -> text
    gold_source: Mapping[str, tuple[bool, str]] = field(default_factory=dict)
    class_labels: tuple[str, ...] = DEFAULT_CLASS_LABELS

    def __post_init__(self):
        if self.behavior not in BEHAVIORS:
            raise InputError(f"unknown mock behavior {self.behavior!r}")
        if not (0 <= self.accuracy <= 1):
            raise InputError("accuracy must be in [0, 1]")
        if not (0 <= self.non_compliant_rate <= 1):
            raise InputError("non_compliant_rate must be in [0, 1]")


def _unit_draw(*parts: object) -> float:
    digest = hashlib.sha256(":".join(map(str, parts)).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def _gold_for(script: MockScript, prompt: RenderedPrompt) -> tuple[bool, str]:
    doc_id = prompt.window_ref[0]
    try:
        return script.gold_source[doc_id]
    except KeyError:
        raise InputError(f"mock has no gold label for document {doc_id!r}") from None


def _answer_json(identification: bool, disease: str) -> str:
    return json.dumps({"answer": "yes" if identification else "no", "disease": disease})


def _correct_text(script: MockScript, prompt: RenderedPrompt) -> str:
    identification, disease = _gold_for(script, prompt)
    return _answer_json(identification, disease)


def _wrong_text(script: MockScript, prompt: RenderedPrompt, salt: object) -> str:
    identification, disease = _gold_for(script, prompt)
    others = [c for c in script.class_labels if c != disease] or [disease]
    pick = int(_unit_draw("wrong", script.seed, prompt.content_hash, salt) * len(others))
    return _answer_json(not identification, others[min(pick, len(others) - 1)])


def _non_compliant_text(prompt: RenderedPrompt) -> str:
    disease = prompt.window_ref[1]
    return (
        f"Based on the context I believe the patient may well have {disease}, "
        "though the note is not fully conclusive either way."
    )


def generate_mock(spec: BackendSpec, prompt: RenderedPrompt, *, sample_index: int = 0
                  ) -> GenerationResult:
    script = spec.script or MockScript()

    if script.behavior == "canned":
        try:
            text = script.canned[prompt.content_hash]
        except KeyError:
            raise InputError(
                f"no canned text for prompt {prompt.content_hash[:12]}"
            ) from None
    elif script.behavior == "always-correct":
        text = _correct_text(script, prompt)
    elif script.behavior == "always-wrong":
        text = _wrong_text(script, prompt, sample_index)
    elif script.behavior == "accuracy":
        u = _unit_draw("acc", script.seed, prompt.content_hash, sample_index)
        if u < script.accuracy:
            text = _correct_text(script, prompt)
        else:
            text = _wrong_text(script, prompt, sample_index)
    else:  # non-compliant-rate
        u = _unit_draw("nc", script.seed, prompt.content_hash, sample_index)
        if u < script.non_compliant_rate:
            text = _non_compliant_text(prompt)
        else:
            text = _correct_text(script, prompt)

    return GenerationResult(
        backend_id=spec.backend_id,
        prompt_hash=prompt.content_hash,
        raw_text=text,
        latency=0.0,
        attempt_count=1,
    )
