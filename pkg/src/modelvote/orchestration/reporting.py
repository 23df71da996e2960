"""Evaluation over a run log: ballots, verdicts, reports, ablation, t-tests.

Metrics are computed over samples whose ballots are complete (every
member vote resolved by parsing or human labeling); the coverage figure
makes partial reporting visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from modelvote.errors import InputError
from modelvote.evaluation import (
    AblationReport,
    TTestResult,
    ablation_leave_one_out,
    aprf_for_ensemble,
    aprf_for_member,
    correctness_vector,
    ensemble_predictions,
    member_predictions,
    paired_t_test,
)
from modelvote.evaluation.scoring import CLASSIFICATION, IDENTIFICATION, TASKS
from modelvote.evaluation.tables import TableRow, build_results_table
from modelvote.labels import OTHER
from modelvote.orchestration.store import (
    RunRecord,
    RunState,
    RunStore,
    WindowRef,
    ref_to_dict,
)
from modelvote.parsing import NON_COMPLIANT, compliance_from_counts
from modelvote.voting import EnsembleConfig, vote_classification, vote_identification

ENSEMBLE = "ensemble"


def ensemble_config(state: RunState) -> EnsembleConfig:
    if not state.config:
        raise InputError("run log has no config event")
    return EnsembleConfig(
        member_ids=tuple(state.config["members"]),
        identification_threshold=state.config.get("identification_threshold"),
    )


@dataclass
class BallotSet:
    """Complete ballots for one (task, context size) slice of a run."""

    task: str
    context_size: int
    refs: list[WindowRef]
    ballots: list[dict[str, str]]
    gold: list[str]
    incomplete: int

    @property
    def total(self) -> int:
        return len(self.refs) + self.incomplete


class MissingGoldError(InputError):
    """Scoring was requested for a run whose windows carry no gold labels."""


def ballots_for(
    state: RunState, task: str, context_size: int, require_gold: bool = True
) -> BallotSet:
    """Complete ballots for one slice; ``require_gold=False`` allows
    coverage accounting on unlabeled corpora (gold stays empty)."""
    if task not in TASKS:
        raise InputError(f"unknown task {task!r}")
    members = state.members()
    refs: list[WindowRef] = []
    ballots: list[dict[str, str]] = []
    gold: list[str] = []
    incomplete = 0
    for ref in sorted(state.windows):
        if ref[2] != context_size:
            continue
        window = state.windows[ref]
        ballot: dict[str, str] = {}
        for member_id, key in state.gen_keys_for(ref):
            vote = state.vote_for(key)
            if vote is None:
                ballot = {}
                break
            identification, disease, _source = vote
            ballot[member_id] = identification if task == IDENTIFICATION else disease
        if len(ballot) != len(members):
            incomplete += 1
            continue
        gold_value = (
            window["gold_identification"]
            if task == IDENTIFICATION
            else window["gold_disease"]
        )
        if gold_value is None:
            if require_gold:
                raise MissingGoldError(f"window {ref} has no gold {task} label")
        elif task == IDENTIFICATION:
            gold.append("yes" if gold_value else "no")
        else:
            gold.append(gold_value)
        refs.append(ref)
        ballots.append(ballot)
    return BallotSet(
        task=task, context_size=context_size, refs=refs, ballots=ballots,
        gold=gold, incomplete=incomplete,
    )


def compute_verdicts(state: RunState) -> dict[WindowRef, dict]:
    """Identification and classification verdicts for complete ballots."""
    cfg = ensemble_config(state)
    members = set(cfg.member_ids)
    verdicts: dict[WindowRef, dict] = {}
    for ref in sorted(state.windows):
        ident_votes: dict[str, str] = {}
        class_votes: dict[str, str] = {}
        for member_id, key in state.gen_keys_for(ref):
            vote = state.vote_for(key)
            if vote is None:
                break
            ident_votes[member_id] = vote[0]
            class_votes[member_id] = vote[1]
        if set(ident_votes) != members:
            continue
        ident = vote_identification(ident_votes, cfg)
        cls = vote_classification(class_votes, cfg)
        verdicts[ref] = {
            "identification": ident.decision,
            "yes_votes": ident.yes_votes,
            "classification": sorted(cls.argmax_set),
        }
    return verdicts


def build_run_record(state: RunState) -> RunRecord:
    """Canonical timestamp-free record of everything the run produced."""
    entries = []
    sc_samples = 1
    if state.config and state.config["mode"] == "self-consistency":
        sc_samples = int(state.config["sc_samples"])
    for (backend_id, ref), record in sorted(state.prompts.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        prompt_hash = record["prompt_hash"]
        for sample_index in range(sc_samples):
            key = (backend_id, prompt_hash, sample_index)
            generation = state.generations.get(key)
            if generation is None:
                continue
            extraction = state.extractions.get(key, {})
            vote = state.vote_for(key)
            entries.append(
                {
                    "backend_id": backend_id,
                    "prompt_hash": prompt_hash,
                    "sample_index": sample_index,
                    "window": ref_to_dict(ref),
                    "raw_text": generation["raw_text"],
                    "status": extraction.get("status"),
                    "identification": vote[0] if vote else None,
                    "disease": vote[1] if vote else None,
                    "source": vote[2] if vote else None,
                }
            )
    verdicts = [
        {"window": ref_to_dict(ref), **verdict}
        for ref, verdict in sorted(compute_verdicts(state).items())
    ]
    coverage = {"complete": len(verdicts), "total": len(state.windows)}
    return RunRecord(
        run_id=state.run_id,
        entries=tuple(entries),
        verdicts=tuple(verdicts),
        coverage=coverage,
    )


@dataclass
class RunReport:
    run_id: str
    rows: list[TableRow] = field(default_factory=list)
    compliance: list = field(default_factory=list)
    compliance_overall: object = None
    coverage: dict = field(default_factory=dict)
    pending_tasks: int = 0


def _classes_of(state: RunState) -> list[str]:
    return [*state.config["classes"], OTHER]


def run_report(store: RunStore) -> RunReport:
    """Per-model and ensemble APRF per (task, context), plus compliance."""
    state = store.state()
    cfg = ensemble_config(state)
    config = state.config or {}
    report = RunReport(run_id=state.run_id)

    sizes = sorted(config.get("context_sizes", ()))
    for task in TASKS:
        for size in sizes:
            ballot_set = ballots_for(state, task, size, require_gold=False)
            report.coverage[f"{task}@{size}"] = {
                "complete": len(ballot_set.refs),
                "total": ballot_set.total,
            }
            # unlabeled corpora get compliance and coverage but no scores
            if not ballot_set.refs or len(ballot_set.gold) != len(ballot_set.refs):
                continue
            classes = _classes_of(state) if task == CLASSIFICATION else None
            per_member = {
                member: aprf_for_member(
                    ballot_set.ballots, ballot_set.gold, member, task, classes
                )
                for member in cfg.member_ids
            }
            ensemble_scores = aprf_for_ensemble(
                ballot_set.ballots, ballot_set.gold, cfg, task, classes
            )
            report.rows.extend(
                build_results_table(per_member, ensemble_scores, size, task)
            )

    per_backend_counts: dict[str, tuple[int, int]] = {}
    for backend_id in config.get("backend_ids", ()):
        outcomes = [
            ext for key, ext in state.extractions.items() if key[0] == backend_id
        ]
        if outcomes:
            failures = sum(1 for ext in outcomes if ext["status"] == NON_COMPLIANT)
            per_backend_counts[backend_id] = (failures, len(outcomes))
    if per_backend_counts:
        records, overall = compliance_from_counts(per_backend_counts)
        report.compliance = records
        report.compliance_overall = overall
    report.pending_tasks = sum(
        1 for task in state.tasks.values() if task.status == "pending"
    )
    return report


def run_ablation(store: RunStore, task: str, context_size: int) -> AblationReport:
    state = store.state()
    cfg = ensemble_config(state)
    ballot_set = ballots_for(state, task, context_size)
    if not ballot_set.refs:
        raise InputError(f"no complete ballots for {task} at {context_size} words")
    classes = _classes_of(state) if task == CLASSIFICATION else None
    return ablation_leave_one_out(
        ballot_set.ballots, ballot_set.gold, cfg, task, classes
    )


def _member_correctness(
    state: RunState, member: str, task: str, context_size: int
) -> tuple[list[WindowRef], list[int]]:
    cfg = ensemble_config(state)
    ballot_set = ballots_for(state, task, context_size)
    if member == ENSEMBLE:
        predictions = ensemble_predictions(ballot_set.ballots, ballot_set.gold, cfg, task)
    else:
        predictions = member_predictions(ballot_set.ballots, member)
    return ballot_set.refs, correctness_vector(predictions, ballot_set.gold)


def run_ttest(
    store_a: RunStore,
    store_b: RunStore,
    task: str,
    context_size: int,
    member_a: str = ENSEMBLE,
    member_b: str = ENSEMBLE,
) -> TTestResult:
    """Paired t-test on per-sample correctness, paired by window."""
    refs_a, correct_a = _member_correctness(store_a.state(), member_a, task, context_size)
    refs_b, correct_b = _member_correctness(store_b.state(), member_b, task, context_size)
    by_ref_a = dict(zip(refs_a, correct_a))
    by_ref_b = dict(zip(refs_b, correct_b))
    shared = [ref for ref in refs_a if ref in by_ref_b]
    if not shared:
        raise InputError("runs share no scored samples")
    xs = [by_ref_a[ref] for ref in shared]
    ys = [by_ref_b[ref] for ref in shared]
    return paired_t_test(xs, ys)
