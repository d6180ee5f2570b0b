"""Brute-force ground truth for the minimizers.

Expectations are sums over all 2^m labelings weighted by the product of
marginals; optimizers enumerate every partial labeling or every ranking
of every label subset. Enumeration order is binary counting, so tie
outcomes are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    ABSTAIN,
    CapacityError,
    InputError,
    PartialLabeling,
    PartialRanking,
    Penalty,
    as_marginals,
)

MAX_ENUM_M = 20
MAX_HAMMING_M = 8
MAX_RANK_M = 7
MAX_F_M = 7

LOSS_KINDS = ("hamming", "rank", "f1")


def _check_capacity(m: int, bound: int):
    if m > bound:
        raise CapacityError(f"m={m} exceeds the brute-force bound {bound}")


@lru_cache(maxsize=None)
def _labelings(m: int) -> np.ndarray:
    # row r is the binary expansion of r, label 0 as the most significant bit
    r = np.arange(2**m)[:, None]
    shifts = np.arange(m - 1, -1, -1)[None, :]
    Y = (r >> shifts) & 1
    Y.setflags(write=False)
    return Y


@lru_cache(maxsize=None)
def _partial_labelings(m: int) -> np.ndarray:
    P = np.array(list(itertools.product((0, 1, ABSTAIN), repeat=m)), dtype=np.int64).reshape(-1, m)
    P.setflags(write=False)
    return P


@dataclass(frozen=True)
class EnumeratedDistribution:
    """Joint label distribution implied by independent marginals."""

    labelings: np.ndarray  # (2^m, m) binary
    probs: np.ndarray  # (2^m,)

    @classmethod
    def from_marginals(cls, p, bound: int = MAX_ENUM_M) -> "EnumeratedDistribution":
        p = as_marginals(p)
        _check_capacity(p.size, bound)
        Y = _labelings(p.size)
        probs = np.prod(np.where(Y == 1, p, 1.0 - p), axis=1)
        return cls(Y, probs)

    @property
    def m(self) -> int:
        return self.labelings.shape[1]

    def relevant_counts(self) -> np.ndarray:
        return self.labelings.sum(axis=1)

    def pair_counts(self) -> np.ndarray:
        """c(y) = r(y) * (m - r(y)), the number of relevant/irrelevant pairs."""
        r = self.relevant_counts()
        return r * (self.m - r)

    def expect(self, values) -> float:
        return float(np.dot(self.probs, values))

    def pairwise_01(self) -> np.ndarray:
        """M[u, v] = P(y_u = 0 and y_v = 1), summed from the joint."""
        Y = self.labelings
        return ((1 - Y) * self.probs[:, None]).T @ Y


def _hamming_matrix(Y, P, weights=None):
    """Mistakes (optionally cost-weighted) for every labeling row of Y and partial labeling row of P."""
    decided = P != ABSTAIN
    wrong = (Y[:, None, :] != P[None, :, :]) & decided[None, :, :]
    if weights is not None:
        fn, fp = weights
        cost = np.where(Y == 1, fn, fp)
        return np.einsum("ypm,ym->yp", wrong, cost)
    return wrong.sum(axis=2)


def _hamming_risk(dist, P, weights=None, block=1024):
    return np.concatenate(
        [dist.probs @ _hamming_matrix(dist.labelings, P[i : i + block], weights) for i in range(0, P.shape[0], block)]
    )


def _f_matrix(Y, P):
    """F(y_D, yhat_D) for every labeling row of Y and partial labeling row of P."""
    decided = (P != ABSTAIN).astype(np.int64)
    ones = (P == 1).astype(np.int64)
    tp = Y @ ones.T
    denom = Y @ decided.T + ones.sum(axis=1)[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        F = np.where(denom == 0, 1.0, 2.0 * tp / np.maximum(denom, 1))
    return F


def exact_expected_loss(p, yhat, loss_kind: str, f: Penalty) -> float:
    """Expected generalized loss of one prediction by full enumeration.

    ``loss_kind`` is ``"hamming"`` or ``"f1"`` (with a PartialLabeling;
    the F loss is 1 - F on the decided part) or ``"rank"`` (with a
    PartialRanking). The abstention penalty is added in every case.
    """
    dist = EnumeratedDistribution.from_marginals(p)
    m = dist.m
    Y = dist.labelings
    if loss_kind == "rank":
        if not isinstance(yhat, PartialRanking):
            raise InputError("rank loss needs a PartialRanking")
        order = list(yhat.order)
        if any(i >= m for i in order):
            raise InputError("ranking index out of range")
        losses = np.zeros(Y.shape[0])
        for a_pos, u in enumerate(order):
            for v in order[a_pos + 1 :]:
                losses += (Y[:, u] == 0) & (Y[:, v] == 1)
        return dist.expect(losses) + f(m - len(order))
    if not isinstance(yhat, PartialLabeling):
        raise InputError(f"{loss_kind} loss needs a PartialLabeling")
    if len(yhat) != m:
        raise InputError("prediction length differs from m")
    P = yhat.to_array()[None, :]
    a = yhat.n_abstained
    if loss_kind == "hamming":
        return dist.expect(_hamming_matrix(Y, P)[:, 0]) + f(a)
    if loss_kind == "f1":
        return 1.0 - dist.expect(_f_matrix(Y, P)[:, 0]) + f(a)
    raise InputError(f"unknown loss kind {loss_kind!r}")


def exact_expected_f(p, yhat: PartialLabeling, f: Penalty) -> float:
    """Expected generalized F-measure (F on decided part minus penalty)."""
    return 1.0 - exact_expected_loss(p, yhat, "f1", f)


def brute_minimize_hamming(p, f: Penalty, costs=None) -> tuple[PartialLabeling, float]:
    """Exhaustive minimum over all 3^m partial labelings.

    ``costs`` optionally gives per-label (fn_cost, fp_cost) sequences.
    """
    p = as_marginals(p)
    _check_capacity(p.size, MAX_HAMMING_M)
    dist = EnumeratedDistribution.from_marginals(p)
    P = _partial_labelings(p.size)
    weights = None
    if costs is not None:
        weights = (np.asarray(costs[0], dtype=float), np.asarray(costs[1], dtype=float))
    risk = _hamming_risk(dist, P, weights)
    risk = risk + f.values()[(P == ABSTAIN).sum(axis=1)]
    best = int(np.argmin(risk))
    return PartialLabeling(tuple(P[best])), float(risk[best])


def brute_maximize_f(p, f: Penalty) -> tuple[PartialLabeling, float]:
    """Exhaustive maximum of expected generalized F over all 3^m partial labelings."""
    p = as_marginals(p)
    _check_capacity(p.size, MAX_F_M)
    dist = EnumeratedDistribution.from_marginals(p)
    P = _partial_labelings(p.size)
    value = dist.probs @ _f_matrix(dist.labelings, P)
    value = value - f.values()[(P == ABSTAIN).sum(axis=1)]
    best = int(np.argmax(value))
    return PartialLabeling(tuple(P[best])), float(value[best])


def brute_maximize_f_full(p) -> tuple[PartialLabeling, float]:
    """Exhaustive maximum of expected F over all 2^m full predictions."""
    p = as_marginals(p)
    _check_capacity(p.size, MAX_F_M)
    dist = EnumeratedDistribution.from_marginals(p)
    P = _labelings(p.size)
    value = dist.probs @ _f_matrix(dist.labelings, P)
    best = int(np.argmax(value))
    return PartialLabeling(tuple(P[best])), float(value[best])


@lru_cache(maxsize=None)
def _rankings(m: int, d: int) -> np.ndarray:
    R = np.array(list(itertools.permutations(range(m), d)), dtype=np.int64).reshape(-1, d)
    R.setflags(write=False)
    return R


def rank_losses_by_size(p, d: int) -> tuple[np.ndarray, np.ndarray]:
    """All ordered d-subsets of labels and their expected rank loss (no penalty)."""
    p = as_marginals(p)
    _check_capacity(p.size, MAX_RANK_M)
    M = EnumeratedDistribution.from_marginals(p).pairwise_01()
    R = _rankings(p.size, d)
    losses = np.zeros(R.shape[0])
    for i in range(d):
        for j in range(i + 1, d):
            losses += M[R[:, i], R[:, j]]
    return R, losses


def brute_minimize_rank(p, f: Penalty) -> tuple[PartialRanking, float]:
    """Exhaustive minimum over every ordering of every label subset."""
    p = as_marginals(p)
    m = p.size
    _check_capacity(m, MAX_RANK_M)
    fv = f.values()
    best_rank, best_val = (), float(fv[m])
    for d in range(1, m + 1):
        R, losses = rank_losses_by_size(p, d)
        total = losses + fv[m - d]
        i = int(np.argmin(total))
        if total[i] < best_val:
            best_rank, best_val = tuple(R[i]), float(total[i])
    return PartialRanking(best_rank, m), best_val
