"""Ensemble majority-vote prompting pipeline for clinical rare-disease mentions.

Subpackages cover the stages end to end: corpus indexing and window
extraction, per-family prompt rendering, generation backends (live HTTP,
scripted mocks, replay), structured-answer extraction, vote aggregation,
evaluation statistics, and the experiment orchestrator with its human
annotation queue. The most commonly used entry points are re-exported
here.
"""

from modelvote.corpus import (
    Document,
    FilterConfig,
    InvertedIndex,
    TermEntry,
    apply_weak_supervision_filters,
    build_inverted_index,
    extract_context_windows,
    generate_synthetic_corpus,
    load_corpus,
    load_term_list,
    select_top_diseases,
)
from modelvote.prompts import PromptTemplate, builtin_templates, render_prompt
from modelvote.backends import BackendSpec, MockScript, generate, generate_batch
from modelvote.labels import ClassCatalog, default_term_entries
from modelvote.parsing import compliance_report, extract_json
from modelvote.voting import (
    EnsembleConfig,
    score_classification,
    self_consistency_aggregate,
    vote_classification,
    vote_identification,
)
from modelvote.evaluation import (
    ablation_leave_one_out,
    aprf,
    cohens_kappa,
    paired_t_test,
)
from modelvote.orchestration import (
    RunConfig,
    RunStore,
    load_run_config,
    run_experiment,
    run_report,
)

__version__ = "0.1.0"

__all__ = [
    "Document",
    "FilterConfig",
    "InvertedIndex",
    "TermEntry",
    "apply_weak_supervision_filters",
    "build_inverted_index",
    "extract_context_windows",
    "generate_synthetic_corpus",
    "load_corpus",
    "load_term_list",
    "select_top_diseases",
    "PromptTemplate",
    "builtin_templates",
    "render_prompt",
    "BackendSpec",
    "MockScript",
    "generate",
    "generate_batch",
    "ClassCatalog",
    "default_term_entries",
    "compliance_report",
    "extract_json",
    "EnsembleConfig",
    "score_classification",
    "self_consistency_aggregate",
    "vote_classification",
    "vote_identification",
    "ablation_leave_one_out",
    "aprf",
    "cohens_kappa",
    "paired_t_test",
    "RunConfig",
    "RunStore",
    "load_run_config",
    "run_experiment",
    "run_report",
    "__version__",
]
