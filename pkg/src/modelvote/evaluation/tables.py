"""Result tables: per-model rows plus the ensemble row, best values flagged."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from modelvote.evaluation.metrics import AprfScores

METRICS = ("accuracy", "precision", "recall", "f_score")
ENSEMBLE_LABEL = "ensemble"


@dataclass(frozen=True)
class TableRow:
    model: str
    context: int
    task: str
    scores: AprfScores
    best_flags: tuple[bool, bool, bool, bool]

    def to_record(self) -> dict:
        record = {"model": self.model, "context": self.context, "task": self.task}
        record.update(self.scores.as_dict())
        record["best"] = [METRICS[i] for i, flag in enumerate(self.best_flags) if flag]
        return record


def build_results_table(
    per_model: Mapping[str, AprfScores],
    ensemble: AprfScores,
    context: int,
    task: str,
    ensemble_label: str = ENSEMBLE_LABEL,
) -> list[TableRow]:
    """Rows for one (context, task) group; per-column maxima are flagged,
    ties included."""
    ordered: list[tuple[str, AprfScores]] = [
        *sorted(per_model.items()), (ensemble_label, ensemble)
    ]
    columns = list(zip(*(scores.as_tuple() for _, scores in ordered)))
    maxima = [max(col) for col in columns]
    rows = []
    for name, scores in ordered:
        flags = tuple(
            scores.as_tuple()[i] == maxima[i] for i in range(len(METRICS))
        )
        rows.append(
            TableRow(model=name, context=context, task=task, scores=scores,
                     best_flags=flags)
        )
    return rows


def rows_to_jsonl(rows: Sequence[TableRow]) -> str:
    return "\n".join(json.dumps(row.to_record()) for row in rows) + "\n"


def format_table(rows: Sequence[TableRow]) -> str:
    """Aligned text table; best values per column are starred."""
    if not rows:
        return ""
    name_width = max(len(row.model) for row in rows)
    lines = []
    last_group = None
    header = (
        f"{'model':<{name_width}}  context  task            "
        + "  ".join(f"{m:>10}" for m in METRICS)
    )
    for row in rows:
        group = (row.context, row.task)
        if group != last_group:
            if last_group is not None:
                lines.append("")
            lines.append(header)
            last_group = group
        cells = []
        for value, flag in zip(row.scores.as_tuple(), row.best_flags):
            mark = "*" if flag else " "
            cells.append(f"{value:9.3f}{mark}")
        lines.append(
            f"{row.model:<{name_width}}  {row.context:>7}  {row.task:<14}  "
            + "  ".join(cells)
        )
    return "\n".join(lines) + "\n"
