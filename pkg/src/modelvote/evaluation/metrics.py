"""Accuracy / precision / recall / F-score over a closed label set.

Precision and recall are macro-averaged over the provided classes, with
per-class undefined ratios contributing 0. The F-score is the harmonic
mean of the two macro averages (not the mean of per-class F values), and
is 0 when both averages vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from modelvote.errors import InputError


@dataclass(frozen=True)
class AprfScores:
    accuracy: float
    precision: float
    recall: float
    f_score: float

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not (0.0 <= value <= 1.0):
                raise InputError(f"{name} out of [0, 1]: {value}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.accuracy, self.precision, self.recall, self.f_score)

    def as_dict(self) -> dict[str, float]:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f_score": self.f_score,
        }


def aprf(
    predictions: Sequence[str], gold: Sequence[str], classes: Sequence[str]
) -> AprfScores:
    if len(predictions) != len(gold):
        raise InputError(
            f"length mismatch: {len(predictions)} predictions vs {len(gold)} gold"
        )
    if not gold:
        raise InputError("need at least one sample")
    if not classes:
        raise InputError("need at least one class")

    n = len(gold)
    accuracy = sum(p == g for p, g in zip(predictions, gold)) / n

    precision_sum = 0.0
    recall_sum = 0.0
    for c in classes:
        tp = sum(1 for p, g in zip(predictions, gold) if p == c and g == c)
        predicted = sum(1 for p in predictions if p == c)
        actual = sum(1 for g in gold if g == c)
        precision_sum += tp / predicted if predicted else 0.0
        recall_sum += tp / actual if actual else 0.0
    precision = precision_sum / len(classes)
    recall = recall_sum / len(classes)
    f_score = (
        0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    )
    return AprfScores(accuracy=accuracy, precision=precision, recall=recall, f_score=f_score)
