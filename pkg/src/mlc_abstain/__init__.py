"""Bayes-optimal multilabel predictions with partial abstention."""

from .core import (
    ABSTAIN,
    CapacityError,
    InputError,
    PartialLabeling,
    PartialRanking,
    Penalty,
    f_measure,
    generalized_f,
    generalized_hamming,
    rank_loss,
    uncertainty,
)
from .fmeasure import expected_f_full, maximize_f_abstain, maximize_f_full
from .hamming import LabelwiseCosts, minimize_decomposable, minimize_hamming, minimize_hamming_const
from .rank import minimize_rank

__all__ = [
    "ABSTAIN",
    "CapacityError",
    "InputError",
    "LabelwiseCosts",
    "PartialLabeling",
    "PartialRanking",
    "Penalty",
    "expected_f_full",
    "f_measure",
    "generalized_f",
    "generalized_hamming",
    "maximize_f_abstain",
    "maximize_f_full",
    "minimize_decomposable",
    "minimize_hamming",
    "minimize_hamming_const",
    "minimize_rank",
    "rank_loss",
    "uncertainty",
]

__version__ = "0.1.0"
