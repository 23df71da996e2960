"""Turn per-sample ballots into label predictions and APRF scores.

A ballot maps member ids to votes for one sample. For identification the
prediction is the threshold verdict; for classification the tied-max set
collapses to the gold label when it is among the winners (that counts as
correct) and to the lexicographically smallest winner otherwise.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from modelvote.errors import InputError
from modelvote.evaluation.metrics import AprfScores, aprf
from modelvote.voting import (
    EnsembleConfig,
    resolve_argmax,
    vote_classification,
    vote_identification,
)

IDENTIFICATION = "identification"
CLASSIFICATION = "classification"
TASKS = (IDENTIFICATION, CLASSIFICATION)

IDENTIFICATION_CLASSES = ("yes", "no")


def _check_task(task: str) -> None:
    if task not in TASKS:
        raise InputError(f"unknown task {task!r}")


def ensemble_predictions(
    ballots: Sequence[Mapping[str, str]],
    gold: Sequence[str],
    cfg: EnsembleConfig,
    task: str,
) -> list[str]:
    _check_task(task)
    if len(ballots) != len(gold):
        raise InputError("ballots and gold differ in length")
    predictions: list[str] = []
    for ballot, gold_label in zip(ballots, gold):
        if task == IDENTIFICATION:
            predictions.append(vote_identification(ballot, cfg).decision)
        else:
            verdict = vote_classification(ballot, cfg)
            predictions.append(resolve_argmax(verdict, gold_label))
    return predictions


def member_predictions(
    ballots: Sequence[Mapping[str, str]], member_id: str
) -> list[str]:
    try:
        return [ballot[member_id] for ballot in ballots]
    except KeyError:
        raise InputError(f"member {member_id!r} missing from a ballot") from None


def correctness_vector(predictions: Sequence[str], gold: Sequence[str]) -> list[int]:
    """Per-sample 0/1 correctness, the encoding shared by both tasks and
    used for paired t-tests."""
    if len(predictions) != len(gold):
        raise InputError("predictions and gold differ in length")
    return [int(p == g) for p, g in zip(predictions, gold)]


def _classes_for(task: str, classes: Sequence[str] | None) -> Sequence[str]:
    if task == IDENTIFICATION:
        return IDENTIFICATION_CLASSES
    if not classes:
        raise InputError("classification scoring needs the class list")
    return classes


def aprf_for_ensemble(
    ballots: Sequence[Mapping[str, str]],
    gold: Sequence[str],
    cfg: EnsembleConfig,
    task: str,
    classes: Sequence[str] | None = None,
) -> AprfScores:
    predictions = ensemble_predictions(ballots, gold, cfg, task)
    return aprf(predictions, gold, _classes_for(task, classes))


def aprf_for_member(
    ballots: Sequence[Mapping[str, str]],
    gold: Sequence[str],
    member_id: str,
    task: str,
    classes: Sequence[str] | None = None,
) -> AprfScores:
    _check_task(task)
    predictions = member_predictions(ballots, member_id)
    return aprf(predictions, gold, _classes_for(task, classes))
