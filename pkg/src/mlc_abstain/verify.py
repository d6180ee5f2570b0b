"""Randomized comparison of the fast minimizers against the brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CapacityError, InputError, Penalty
from .fmeasure import maximize_f_abstain
from .hamming import minimize_hamming
from .oracle import (
    MAX_F_M,
    MAX_HAMMING_M,
    MAX_RANK_M,
    brute_maximize_f,
    brute_minimize_hamming,
    brute_minimize_rank,
)
from .rank import minimize_rank

BOUNDS = {"hamming": MAX_HAMMING_M, "rank": MAX_RANK_M, "f1": MAX_F_M}

# (low, high) ranges for the random cost, per loss and penalty kind
COST_RANGES = {
    ("hamming", "SEP"): (0.05, 0.5),
    ("hamming", "PAR"): (0.1, 1.0),
    ("rank", "SEP"): (0.1, 1.0),
    ("rank", "PAR"): (0.2, 2.0),
    ("f1", "SEP"): (0.0, 0.5),
    ("f1", "PAR"): (0.0, 1.0),
}


@dataclass(frozen=True)
class Trial:
    p: np.ndarray
    penalty: Penalty
    fast_value: float
    brute_value: float
    fast_prediction: object
    brute_prediction: object

    @property
    def gap(self) -> float:
        return abs(self.fast_value - self.brute_value)


def compare(loss: str, p, f: Penalty) -> Trial:
    if loss == "hamming":
        r = minimize_hamming(p, f)
        bp, bv = brute_minimize_hamming(p, f)
        return Trial(np.asarray(p), f, r.expected_loss, bv, r.prediction, bp)
    if loss == "rank":
        r = minimize_rank(p, f)
        bp, bv = brute_minimize_rank(p, f)
        return Trial(np.asarray(p), f, r.expected_loss, bv, r.ranking, bp)
    if loss == "f1":
        r = maximize_f_abstain(p, f)
        bp, bv = brute_maximize_f(p, f)
        return Trial(np.asarray(p), f, r.expected_value, bv, r.prediction, bp)
    raise InputError(f"unknown loss {loss!r}")


def random_trials(loss: str, m: int, trials: int, seed: int, penalty: str | None = None):
    """Yield Trial objects for random marginals and costs; m is fixed."""
    if loss not in BOUNDS:
        raise InputError(f"unknown loss {loss!r}")
    if m < 1:
        raise InputError("m must be >= 1")
    if m > BOUNDS[loss]:
        raise CapacityError(f"m={m} exceeds the {loss} oracle bound {BOUNDS[loss]}")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        kind = penalty or ("SEP", "PAR")[int(rng.integers(2))]
        lo, hi = COST_RANGES[(loss, kind)]
        p = rng.random(m)
        c = float(rng.uniform(lo, hi))
        yield compare(loss, p, Penalty.make(kind, c, m))
