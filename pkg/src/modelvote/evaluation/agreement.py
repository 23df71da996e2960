"""Cohen's kappa between two annotators.

kappa = (p_o - p_e) / (1 - p_e), where p_o is the observed agreement
fraction and p_e the chance agreement from the two annotators' marginal
label distributions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from modelvote.errors import InputError


class DegenerateDistributionError(InputError):
    """Chance agreement is 1; kappa is undefined for constant annotations."""


@dataclass(frozen=True)
class KappaResult:
    p_o: float
    p_e: float
    kappa: float


def cohens_kappa(labels_a: Sequence[str], labels_b: Sequence[str]) -> KappaResult:
    if len(labels_a) != len(labels_b):
        raise InputError("label vectors differ in length")
    n = len(labels_a)
    if n == 0:
        raise InputError("need at least one label pair")

    p_o = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    marginal_a = Counter(labels_a)
    marginal_b = Counter(labels_b)
    p_e = sum(
        (marginal_a[label] / n) * (marginal_b[label] / n) for label in marginal_a
    )
    if p_e >= 1.0:
        raise DegenerateDistributionError(
            "both annotators use a single shared label; kappa is undefined"
        )
    kappa = (p_o - p_e) / (1.0 - p_e)
    return KappaResult(p_o=p_o, p_e=p_e, kappa=kappa)
