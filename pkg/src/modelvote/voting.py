"""Majority-vote aggregation across ensemble members.

Identification: yes wins when yes-votes reach the threshold; the default
threshold is half the ensemble rounded up, so a 2-2 tie at four members
resolves to yes and odd ensembles need a strict majority. Classification:
every label tied for the maximum count stays in the verdict's argmax set;
scoring counts the sample correct when the gold label is among them.
Self-consistency reuses both aggregators over repeated samples of a
single backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from modelvote.errors import InputError
from modelvote.parsing import ParsedAnswer

YES = "yes"
NO = "no"


class IncompleteBallotError(InputError):
    """A vote is missing; resolve it via the annotation queue first."""


def default_threshold(m: int) -> int:
    """Yes iff yes-votes >= half the members, ties resolving to yes."""
    return max(1, (m + 1) // 2)


@dataclass(frozen=True)
class EnsembleConfig:
    member_ids: tuple[str, ...]
    identification_threshold: int | None = None   # None = default_threshold(m)

    def __post_init__(self):
        if not self.member_ids:
            raise InputError("ensemble needs at least one member")
        if len(set(self.member_ids)) != len(self.member_ids):
            raise InputError("duplicate member_ids")
        if self.identification_threshold is not None and not (
            1 <= self.identification_threshold <= self.m
        ):
            raise InputError("identification_threshold must be in [1, m]")

    @property
    def m(self) -> int:
        return len(self.member_ids)

    def threshold(self, m: int | None = None) -> int:
        if self.identification_threshold is not None:
            return self.identification_threshold
        return default_threshold(self.m if m is None else m)

    def without(self, member_id: str) -> "EnsembleConfig":
        if member_id not in self.member_ids:
            raise InputError(f"{member_id!r} is not an ensemble member")
        remaining = tuple(b for b in self.member_ids if b != member_id)
        threshold = self.identification_threshold
        if threshold is not None:
            threshold = min(threshold, len(remaining))
        return EnsembleConfig(member_ids=remaining, identification_threshold=threshold)


@dataclass(frozen=True)
class IdentificationVerdict:
    decision: str                      # yes | no
    yes_votes: int
    member_votes: Mapping[str, str]


@dataclass(frozen=True)
class ClassificationVerdict:
    argmax_set: frozenset[str]
    member_votes: Mapping[str, str]


def _check_ballot(votes: Mapping[str, str], cfg: EnsembleConfig) -> None:
    expected = set(cfg.member_ids)
    got = set(votes)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        parts = []
        if missing:
            parts.append(f"missing votes from {missing}")
        if extra:
            parts.append(f"unexpected votes from {extra}")
        raise IncompleteBallotError("; ".join(parts))


def vote_identification(
    votes: Mapping[str, str], cfg: EnsembleConfig
) -> IdentificationVerdict:
    _check_ballot(votes, cfg)
    bad = {v for v in votes.values() if v not in (YES, NO)}
    if bad:
        raise InputError(f"identification votes must be yes/no, got {sorted(bad)}")
    yes_votes = sum(1 for v in votes.values() if v == YES)
    decision = YES if yes_votes >= cfg.threshold() else NO
    return IdentificationVerdict(
        decision=decision, yes_votes=yes_votes, member_votes=dict(votes)
    )


def vote_classification(
    votes: Mapping[str, str], cfg: EnsembleConfig
) -> ClassificationVerdict:
    _check_ballot(votes, cfg)
    counts: dict[str, int] = {}
    for label in votes.values():
        counts[label] = counts.get(label, 0) + 1
    top = max(counts.values())
    argmax = frozenset(label for label, count in counts.items() if count == top)
    return ClassificationVerdict(argmax_set=argmax, member_votes=dict(votes))


def score_classification(verdict: ClassificationVerdict, gold: str) -> bool:
    """Correct iff the gold label is among the tied-max labels."""
    return gold in verdict.argmax_set


def resolve_argmax(verdict: ClassificationVerdict, gold: str) -> str:
    """One representative label: gold when it ties for the max, else the
    lexicographically smallest winner (deterministic stand-in for metrics)."""
    if gold in verdict.argmax_set:
        return gold
    return min(verdict.argmax_set)


def self_consistency_aggregate(
    samples: Sequence[tuple[str, ParsedAnswer]],
    threshold: int | None = None,
) -> tuple[IdentificationVerdict, ClassificationVerdict]:
    """Aggregate repeated samples of one backend with the same vote rules.

    ``samples`` pairs the producing backend_id with each parsed answer;
    mixing backends is an error. Each sample acts as one ensemble member.
    """
    if not samples:
        raise InputError("no samples to aggregate")
    backends = {backend_id for backend_id, _ in samples}
    if len(backends) != 1:
        raise InputError(f"samples mix backends: {sorted(backends)}")
    member_ids = tuple(f"sample-{i}" for i in range(len(samples)))
    cfg = EnsembleConfig(member_ids=member_ids, identification_threshold=threshold)
    ident = vote_identification(
        {m: answer.identification for m, (_, answer) in zip(member_ids, samples)}, cfg
    )
    cls = vote_classification(
        {m: answer.disease_label for m, (_, answer) in zip(member_ids, samples)}, cfg
    )
    return ident, cls
