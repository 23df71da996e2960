"""Experiment orchestration: run store, pipeline driver, annotation queue, API."""

from modelvote.orchestration.config import RunConfig, SyntheticSpec, load_run_config
from modelvote.orchestration.store import (
    AnnotationTask,
    RunRecord,
    RunState,
    RunStore,
    TaskConflictError,
    TaskNotFoundError,
    UnknownRunError,
)
from modelvote.orchestration.experiment import RunAbortedError, run_experiment
from modelvote.orchestration.annotation import enqueue_manual_annotation, submit_label
from modelvote.orchestration.reporting import (
    ballots_for,
    run_ablation,
    run_report,
    run_ttest,
)

__all__ = [
    "RunConfig",
    "SyntheticSpec",
    "load_run_config",
    "AnnotationTask",
    "RunRecord",
    "RunState",
    "RunStore",
    "TaskConflictError",
    "TaskNotFoundError",
    "UnknownRunError",
    "RunAbortedError",
    "run_experiment",
    "enqueue_manual_annotation",
    "submit_label",
    "ballots_for",
    "run_ablation",
    "run_report",
    "run_ttest",
]
