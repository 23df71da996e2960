"""Manual annotation queue for non-compliant generations.

Each failure becomes one pending task, idempotently keyed by the
generation it covers. Submitting a label appends the human vote to the
run log; the owning ballot then completes on the next evaluation pass.
"""

from __future__ import annotations

import time
from typing import Sequence

from modelvote.errors import InputError
from modelvote.labels import OTHER
from modelvote.orchestration.store import (
    AnnotationTask,
    GenKey,
    RunState,
    RunStore,
    TaskConflictError,
    TaskNotFoundError,
    ref_to_dict,
    task_id_for,
)


def enqueue_manual_annotation(
    store: RunStore, failures: Sequence[GenKey]
) -> list[AnnotationTask]:
    """One pending task per failed generation; re-enqueueing is a no-op."""
    state = store.state()
    tasks: list[AnnotationTask] = []
    for key in sorted(set(failures)):
        generation = state.generations.get(key)
        if generation is None:
            raise InputError(f"failure references unknown generation {key}")
        extraction = state.extractions.get(key)
        if extraction is None or extraction["status"] != "non-compliant":
            raise InputError(f"generation {key} is not a non-compliant extraction")
        task_id = task_id_for(store.run_id, key)
        existing = state.tasks.get(task_id)
        if existing is not None:
            tasks.append(existing)
            continue
        backend_id, prompt_hash, sample_index = key
        owning_refs = sorted(
            ref
            for (b, ref), record in state.prompts.items()
            if b == backend_id and record["prompt_hash"] == prompt_hash
        )
        if not owning_refs:
            raise InputError(f"generation {key} has no recorded prompt")
        window = ref_to_dict(owning_refs[0])
        store.append(
            {
                "type": "task",
                "task_id": task_id,
                "backend_id": backend_id,
                "prompt_hash": prompt_hash,
                "sample_index": sample_index,
                "window": window,
                "raw_text": generation["raw_text"],
            }
        )
        tasks.append(
            AnnotationTask(
                task_id=task_id,
                backend_id=backend_id,
                prompt_hash=prompt_hash,
                sample_index=sample_index,
                window_ref=(window["doc_id"], window["disease_id"], window["window_words"]),
                raw_text=generation["raw_text"],
            )
        )
    return tasks


def allowed_labels(state: RunState) -> tuple[str, ...]:
    if not state.config:
        raise InputError("run log has no config event")
    return (*state.config["classes"], OTHER)


def submit_label(
    store: RunStore,
    task_id: str,
    identification: str,
    disease: str,
    annotator_id: str,
) -> AnnotationTask:
    """Label a pending task; the first writer wins, later ones conflict."""
    if identification not in ("yes", "no"):
        raise InputError(f"identification must be yes/no, got {identification!r}")
    state = store.state()
    if disease not in allowed_labels(state):
        raise InputError(f"disease {disease!r} is not in the configured label set")
    if task_id not in state.tasks:
        raise TaskNotFoundError(f"no task {task_id!r}")

    def guard(fresh: RunState) -> None:
        task = fresh.tasks.get(task_id)
        if task is None:
            raise TaskNotFoundError(f"no task {task_id!r}")
        if task.status != "pending":
            raise TaskConflictError(f"task {task_id!r} is already labeled")

    store.append_guarded(
        {
            "type": "label",
            "task_id": task_id,
            "identification": identification,
            "disease": disease,
            "annotator_id": annotator_id,
            "labeled_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        },
        guard,
    )
    return store.state().tasks[task_id]
