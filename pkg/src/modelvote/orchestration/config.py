"""Run configuration, loadable from a YAML or JSON document."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import yaml

from modelvote.backends import BackendSpec, MockScript
from modelvote.errors import InputError
from modelvote.voting import EnsembleConfig

MODES = ("mvp", "self-consistency")


@dataclass(frozen=True)
class SyntheticSpec:
    n_docs: int
    positive_rate: float = 0.5
    doc_words: tuple[int, int] = (60, 200)


@dataclass(frozen=True)
class RunConfig:
    run_id: str
    classes: tuple[str, ...]
    context_sizes: tuple[int, ...]
    backends: tuple[BackendSpec, ...]
    mode: str = "mvp"
    sc_samples: int = 1
    identification_threshold: int | None = None
    seed: int = 0
    parallelism: int = 4
    corpus_path: str | None = None
    term_list_path: str | None = None
    gold_path: str | None = None
    synthetic: SyntheticSpec | None = None
    templates: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.run_id:
            raise InputError("run_id must be non-empty")
        if not self.classes:
            raise InputError("classes must be non-empty")
        if not self.context_sizes or any(s < 1 for s in self.context_sizes):
            raise InputError("context_sizes must be positive")
        if not self.backends:
            raise InputError("at least one backend is required")
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        ids = [b.backend_id for b in self.backends]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate backend_id")
        if self.mode == "self-consistency":
            if self.sc_samples < 2:
                raise InputError("self-consistency needs sc_samples >= 2")
            if len(self.backends) != 1:
                raise InputError("self-consistency runs use exactly one backend")
            if self.backends[0].temperature <= 0:
                raise InputError("self-consistency requires temperature > 0")
        if self.corpus_path is None and self.synthetic is None:
            raise InputError("either corpus_path or synthetic must be given")
        if self.parallelism < 1:
            raise InputError("parallelism must be >= 1")

    @property
    def samples_per_prompt(self) -> int:
        return self.sc_samples if self.mode == "self-consistency" else 1

    def ensemble(self) -> EnsembleConfig:
        """Voting members: the backends (mvp) or the repeated samples (sc)."""
        if self.mode == "mvp":
            member_ids = tuple(b.backend_id for b in self.backends)
        else:
            member_ids = tuple(f"sample-{i}" for i in range(self.sc_samples))
        return EnsembleConfig(
            member_ids=member_ids,
            identification_threshold=self.identification_threshold,
        )


def _backend_from_dict(raw: Mapping) -> BackendSpec:
    raw = dict(raw)
    script = raw.pop("script", None)
    if script is not None:
        script = MockScript(**script)
    return BackendSpec(script=script, **raw)


def run_config_from_dict(raw: Mapping) -> RunConfig:
    raw = dict(raw)
    backends = tuple(_backend_from_dict(b) for b in raw.pop("backends", ()))
    synthetic = raw.pop("synthetic", None)
    if synthetic is not None:
        if "doc_words" in synthetic:
            synthetic["doc_words"] = tuple(synthetic["doc_words"])
        synthetic = SyntheticSpec(**synthetic)
    for key in ("classes", "context_sizes"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return RunConfig(backends=backends, synthetic=synthetic, **raw)


def load_run_config(path: str | Path) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json"):
        raw = json.loads(text)
    else:
        raw = yaml.safe_load(text)
    if not isinstance(raw, dict):
        raise InputError("run config must be a mapping")
    return run_config_from_dict(raw)
