"""Evaluation statistics: APRF, agreement, paired t-tests, ablation, tables."""

from modelvote.evaluation.metrics import AprfScores, aprf
from modelvote.evaluation.agreement import (
    DegenerateDistributionError,
    KappaResult,
    cohens_kappa,
)
from modelvote.evaluation.ttest import (
    TTestResult,
    ZeroVarianceError,
    paired_t_test,
    regularized_incomplete_beta,
    student_t_two_tailed_p,
)
from modelvote.evaluation.scoring import (
    aprf_for_ensemble,
    aprf_for_member,
    correctness_vector,
    ensemble_predictions,
    member_predictions,
)
from modelvote.evaluation.ablation import AblationReport, ablation_leave_one_out
from modelvote.evaluation.tables import TableRow, build_results_table, format_table

__all__ = [
    "AprfScores",
    "aprf",
    "DegenerateDistributionError",
    "KappaResult",
    "cohens_kappa",
    "TTestResult",
    "ZeroVarianceError",
    "paired_t_test",
    "regularized_incomplete_beta",
    "student_t_two_tailed_p",
    "aprf_for_ensemble",
    "aprf_for_member",
    "correctness_vector",
    "ensemble_predictions",
    "member_predictions",
    "AblationReport",
    "ablation_leave_one_out",
    "TableRow",
    "build_results_table",
    "format_table",
]
