"""The experiment driver: render, generate, extract, enqueue, evaluate.

Runs are resumable: every step is keyed, previously answered
(backend, prompt, sample) triples are never re-queried, and the run log
stays valid however the process dies. Per-pair generation failures are
logged and reported together at the end instead of aborting the batch.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from modelvote.backends import BackendSpec, generate
from modelvote.corpus import (
    Document,
    TermEntry,
    build_inverted_index,
    extract_context_windows,
    generate_synthetic_corpus,
    load_corpus,
    load_term_list,
)
from modelvote.errors import InputError, ModelVoteError
from modelvote.labels import ClassCatalog, default_term_entries
from modelvote.orchestration.annotation import enqueue_manual_annotation
from modelvote.orchestration.config import RunConfig
from modelvote.orchestration.reporting import build_run_record, compute_verdicts
from modelvote.orchestration.store import RunRecord, RunStore, ref_to_dict
from modelvote.parsing import NON_COMPLIANT, extract_json
from modelvote.prompts import (
    builtin_templates,
    load_template,
    render_prompt,
    task_description_for,
)


class RunAbortedError(ModelVoteError):
    """Some generations failed; the partial log is preserved for resume."""

    def __init__(self, failed: int):
        super().__init__(f"{failed} generation(s) failed; partial log preserved")
        self.failed = failed


def _load_inputs(cfg: RunConfig):
    if cfg.term_list_path:
        terms = load_term_list(cfg.term_list_path)
    else:
        terms = default_term_entries()
    by_id = {t.disease_id: t for t in terms}
    missing = [c for c in cfg.classes if c not in by_id]
    if missing:
        raise InputError(f"classes not in the term list: {missing}")
    class_terms = [by_id[c] for c in cfg.classes]

    gold = None
    if cfg.synthetic is not None:
        corpus, gold_map = generate_synthetic_corpus(
            cfg.seed,
            cfg.synthetic.n_docs,
            class_terms,
            cfg.synthetic.positive_rate,
            doc_words=cfg.synthetic.doc_words,
        )
        gold = {k: (v.identification, v.disease_id) for k, v in gold_map.items()}
    else:
        corpus = load_corpus(cfg.corpus_path)
        if cfg.gold_path:
            gold = _load_gold(cfg.gold_path)
    return corpus, class_terms, gold


def _load_gold(path: str) -> dict[str, tuple[bool, str]]:
    gold: dict[str, tuple[bool, str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            gold[record["doc_id"]] = (bool(record["identification"]), record["disease"])
    return gold


def _config_fingerprint(cfg: RunConfig) -> dict:
    return {
        "classes": list(cfg.classes),
        "context_sizes": sorted(cfg.context_sizes),
        "backend_ids": [b.backend_id for b in cfg.backends],
        "mode": cfg.mode,
        "sc_samples": cfg.samples_per_prompt,
        "identification_threshold": cfg.identification_threshold,
        "seed": cfg.seed,
    }


def _config_event(cfg: RunConfig, class_terms: Sequence[TermEntry]) -> dict:
    return {
        "type": "run_config",
        "run_id": cfg.run_id,
        "members": list(cfg.ensemble().member_ids),
        "classes_detail": [
            {
                "disease_id": t.disease_id,
                "label": t.preferred_label,
                "synonyms": list(t.synonyms),
            }
            for t in class_terms
        ],
        **_config_fingerprint(cfg),
    }


def _wire_mock(spec: BackendSpec, gold: dict | None, catalog: ClassCatalog) -> BackendSpec:
    if spec.kind != "mock" or spec.script is None:
        return spec
    if not gold:
        return spec
    gold_labels = {
        doc_id: (identification, catalog.label_of(disease_id))
        for doc_id, (identification, disease_id) in gold.items()
    }
    script = replace(
        spec.script,
        gold_source=gold_labels,
        class_labels=tuple(catalog.label_of(c) for c in catalog.disease_ids),
    )
    return replace(spec, script=script)


def _templates_for(cfg: RunConfig, catalog: ClassCatalog):
    templates = builtin_templates()
    for family, path in cfg.templates.items():
        templates[family] = load_template(path)
    labels = [catalog.label_of(c) for c in catalog.disease_ids]
    description = task_description_for(labels)
    return {
        family: replace(template, task_description=description)
        for family, template in templates.items()
    }


def run_experiment(
    cfg: RunConfig,
    store_root: str | Path,
    *,
    max_new_generations: int | None = None,
) -> RunRecord:
    """Drive the full pipeline for one run; safe to call again to resume.

    ``max_new_generations`` caps how many new generations this invocation
    performs (used to exercise interrupt/resume); the run simply stops
    early and the next call continues from the log.
    """
    store = RunStore(store_root, cfg.run_id, create=True)
    state = store.state()

    corpus, class_terms, gold = _load_inputs(cfg)
    catalog = ClassCatalog.from_terms(class_terms)

    if state.config is None:
        store.append(_config_event(cfg, class_terms))
    else:
        previous = {k: state.config.get(k) for k in _config_fingerprint(cfg)}
        if previous != _config_fingerprint(cfg):
            raise InputError(
                f"run {cfg.run_id!r} already exists with a different configuration"
            )

    index = build_inverted_index(corpus, class_terms)
    windows = extract_context_windows(
        corpus, index, class_terms, cfg.classes, cfg.context_sizes, gold=gold
    )
    for window in windows:
        if window.ref not in state.windows:
            store.append(
                {
                    "type": "window",
                    "window": ref_to_dict(window.ref),
                    "text": window.text,
                    "gold_identification": window.gold_identification,
                    "gold_disease": window.gold_disease,
                }
            )

    templates = _templates_for(cfg, catalog)
    specs = [_wire_mock(spec, gold, catalog) for spec in cfg.backends]

    jobs = []
    queued: set[tuple[str, str, int]] = set()
    for spec in specs:
        if spec.prompt_family not in templates:
            raise InputError(
                f"backend {spec.backend_id!r} wants unknown template family "
                f"{spec.prompt_family!r}"
            )
        template = templates[spec.prompt_family]
        for window in windows:
            prompt = render_prompt(template, window)
            prompt_key = (spec.backend_id, window.ref)
            if prompt_key not in state.prompts:
                store.append(
                    {
                        "type": "prompt",
                        "backend_id": spec.backend_id,
                        "prompt_hash": prompt.content_hash,
                        "window": ref_to_dict(window.ref),
                        "text": prompt.text,
                        "template_id": prompt.template_id,
                    }
                )
                state.prompts[prompt_key] = {"prompt_hash": prompt.content_hash}
            # identical window texts share one generation per backend
            for sample_index in range(cfg.samples_per_prompt):
                key = (spec.backend_id, prompt.content_hash, sample_index)
                if key not in state.generations and key not in queued:
                    queued.add(key)
                    jobs.append((spec, prompt, sample_index))

    if max_new_generations is not None:
        jobs = jobs[:max_new_generations]

    failed = 0

    def work(job):
        spec, prompt, sample_index = job
        try:
            return job, generate(spec, prompt, sample_index=sample_index), None
        except ModelVoteError as exc:
            return job, None, str(exc)

    if jobs:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            for job, result, error in pool.map(work, jobs):
                spec, prompt, sample_index = job
                if error is not None:
                    failed += 1
                    store.append(
                        {
                            "type": "generation_error",
                            "backend_id": spec.backend_id,
                            "prompt_hash": prompt.content_hash,
                            "sample_index": sample_index,
                            "error": error,
                        }
                    )
                    continue
                store.append(
                    {
                        "type": "generation",
                        "backend_id": spec.backend_id,
                        "prompt_hash": prompt.content_hash,
                        "sample_index": sample_index,
                        "raw_text": result.raw_text,
                        "attempts": result.attempt_count,
                    }
                )

    # answers parse against the keys of whichever template prompted them
    keys_by_backend = {
        spec.backend_id: templates[spec.prompt_family].extraction_keys
        for spec in specs
    }
    state = store.state()
    for key in sorted(state.generations):
        if key in state.extractions:
            continue
        extraction = extract_json(
            state.generations[key]["raw_text"],
            catalog,
            keys=keys_by_backend.get(key[0], ("answer", "disease")),
        )
        event = {
            "type": "extraction",
            "backend_id": key[0],
            "prompt_hash": key[1],
            "sample_index": key[2],
            "status": extraction.status,
        }
        if extraction.answer is not None:
            event["identification"] = extraction.answer.identification
            event["disease"] = extraction.answer.disease_label
            event["span"] = list(extraction.json_span)
        store.append(event)

    state = store.state()
    failures = [
        key for key, ext in sorted(state.extractions.items())
        if ext["status"] == NON_COMPLIANT
    ]
    if failures:
        enqueue_manual_annotation(store, failures)
        state = store.state()

    for ref, verdict in sorted(compute_verdicts(state).items()):
        if ref not in state.verdicts:
            store.append({"type": "verdict", "window": ref_to_dict(ref), **verdict})

    if failed:
        raise RunAbortedError(failed)
    return build_run_record(store.state())
