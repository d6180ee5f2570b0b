"""Risk minimizers for label-wise decomposable losses with abstention."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ABSTAIN, TIE_TOL, InputError, PartialLabeling, Penalty, as_marginals


@dataclass(frozen=True)
class LabelwiseCosts:
    """Per-label misclassification costs; correct predictions cost nothing.

    ``fn_cost[i]`` is paid when label i is relevant but predicted 0,
    ``fp_cost[i]`` when it is irrelevant but predicted 1.
    """

    fn_cost: tuple[float, ...]
    fp_cost: tuple[float, ...]

    def __post_init__(self):
        fn = tuple(float(v) for v in self.fn_cost)
        fp = tuple(float(v) for v in self.fp_cost)
        if len(fn) != len(fp):
            raise InputError("fn_cost and fp_cost differ in length")
        if any(v < 0 for v in fn + fp):
            raise InputError("costs must be nonnegative")
        object.__setattr__(self, "fn_cost", fn)
        object.__setattr__(self, "fp_cost", fp)

    @classmethod
    def unit(cls, m: int) -> "LabelwiseCosts":
        return cls((1.0,) * m, (1.0,) * m)


@dataclass(frozen=True)
class RiskReport:
    prediction: PartialLabeling
    expected_loss: float
    scores: np.ndarray  # label-wise expected loss s_i of the better decision
    chosen_d: int


def _select_size(sorted_scores: np.ndarray, f: Penalty) -> tuple[int, float]:
    m = sorted_scores.size
    d = np.arange(m + 1)
    objective = np.concatenate(([0.0], np.cumsum(sorted_scores))) + f.values()[m - d]
    best = objective.min()
    # largest d among (near-)ties
    chosen = int(np.flatnonzero(objective <= best + TIE_TOL)[-1])
    return chosen, float(objective[chosen])


def minimize_decomposable(p, costs: LabelwiseCosts, f: Penalty) -> RiskReport:
    """Bayes-optimal partial labeling for a decomposable loss plus penalty.

    Labels are sorted by their label-wise expected loss (ties by index) and
    the best prefix length d in 0..m is chosen.
    """
    p = as_marginals(p)
    m = p.size
    if len(costs.fn_cost) != m or f.m != m:
        raise InputError(f"dimension mismatch: m={m}, costs={len(costs.fn_cost)}, penalty m={f.m}")
    loss_if_0 = np.asarray(costs.fn_cost) * p
    loss_if_1 = np.asarray(costs.fp_cost) * (1.0 - p)
    scores = np.minimum(loss_if_0, loss_if_1)
    side = (loss_if_1 < loss_if_0).astype(np.int64)  # ties predict 0

    order = np.argsort(scores, kind="stable")
    d, value = _select_size(scores[order], f)

    entries = np.full(m, ABSTAIN, dtype=np.int64)
    chosen = order[:d]
    entries[chosen] = side[chosen]
    return RiskReport(PartialLabeling(tuple(entries)), value, scores, d)


def minimize_hamming(p, f: Penalty) -> RiskReport:
    """Generalized Hamming minimizer; decides the least uncertain labels first."""
    p = as_marginals(p)
    return minimize_decomposable(p, LabelwiseCosts.unit(p.size), f)


def minimize_hamming_const(p, c: float) -> RiskReport:
    """Closed form for a constant per-label abstention cost ``c``.

    Decide exactly the labels with min(p, 1-p) <= c.
    """
    p = as_marginals(p)
    if not 0.0 <= c <= 1.0:
        raise InputError(f"cost must lie in [0, 1], got {c}")
    scores = np.minimum(p, 1.0 - p)
    decide = scores <= c
    entries = np.where(decide, (p > 0.5).astype(np.int64), ABSTAIN)
    d = int(decide.sum())
    value = float(scores[decide].sum() + (p.size - d) * c)
    return RiskReport(PartialLabeling(tuple(entries)), value, scores, d)
