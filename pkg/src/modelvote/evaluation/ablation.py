"""Leave-one-out ablation over the ensemble.

Each member is removed in turn, verdicts are recomputed over the
remaining votes (identification threshold re-derived from the configured
rule for the smaller ensemble), and APRF is re-scored on the identical
sample set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from modelvote.errors import InputError
from modelvote.evaluation.metrics import AprfScores
from modelvote.evaluation.scoring import aprf_for_ensemble
from modelvote.voting import EnsembleConfig


@dataclass(frozen=True)
class AblationReport:
    baseline: AprfScores
    rows: dict[str, AprfScores]    # excluded member -> scores of the rest
    task: str

    @property
    def row_count(self) -> int:
        """Baseline plus one row per exclusion."""
        return 1 + len(self.rows)


def ablation_leave_one_out(
    ballots: Sequence[Mapping[str, str]],
    gold: Sequence[str],
    cfg: EnsembleConfig,
    task: str,
    classes: Sequence[str] | None = None,
) -> AblationReport:
    if cfg.m < 2:
        raise InputError("ablation needs at least two ensemble members")
    baseline = aprf_for_ensemble(ballots, gold, cfg, task, classes)
    rows: dict[str, AprfScores] = {}
    for member_id in cfg.member_ids:
        reduced_cfg = cfg.without(member_id)
        reduced_ballots = [
            {m: vote for m, vote in ballot.items() if m != member_id}
            for ballot in ballots
        ]
        rows[member_id] = aprf_for_ensemble(
            reduced_ballots, gold, reduced_cfg, task, classes
        )
    return AblationReport(baseline=baseline, rows=rows, task=task)
