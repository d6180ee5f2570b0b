"""Expected F-measure maximization, with and without abstention.

Everything here assumes the labels are conditionally independent given
the marginals. Labels are first sorted by decreasing probability; an
optimal prediction then sets the top k positions to 1, the positions
l..m to 0 and abstains on the positions in between.

Two tables drive the computation (positions are 1-based as below):

* ``Q[k, j]`` = P(exactly j of the top k labels are relevant), a
  Poisson-binomial prefix table built in O(m^2).
* ``S(k, j, l)`` = E[1 / (k + j + R_l)] where R_l counts relevant labels
  among positions l..m. It starts at 1/(k+j) for l = m+1 and satisfies
  S(k, j, l) = p_l S(k, j+1, l+1) + (1 - p_l) S(k, j, l+1).

The expected F of the <<k, l>> prediction is then
2 * sum_j j Q[k, j] S(k, j, l).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ABSTAIN, TIE_TOL, InputError, PartialLabeling, Penalty, as_marginals
from .rank import sort_descending


def build_prefix_counts(p_sorted) -> np.ndarray:
    """Return Q with shape (m+1, m+1); row k is the count distribution of the top k.

    Row 0 is the point mass at 0; entries with j > k are zero.
    """
    p = as_marginals(p_sorted)
    m = p.size
    Q = np.zeros((m + 1, m + 1))
    Q[0, 0] = 1.0
    for k in range(1, m + 1):
        pk = p[k - 1]
        Q[k, : k + 1] = (1.0 - pk) * Q[k - 1, : k + 1]
        Q[k, 1 : k + 1] += pk * Q[k - 1, :k]
    return Q


def _suffix_weight_sweep(p_sorted: np.ndarray, Q: np.ndarray):
    """Yield (l, F) for l = m+1 down to 2, where F[k] is the expected F of <<k, l>>.

    F[k] is only meaningful for 1 <= k < l; other entries are NaN. All k
    are advanced together, one O(m^2) update per l.
    """
    m = p_sorted.size
    ks = np.arange(1, m + 1)[:, None]
    js = np.arange(m + 1)[None, :]
    S = 1.0 / (ks + js)  # row k-1 holds S(k, ., l)
    weights = js * Q[1:, :]  # j * Q[k, j]
    valid = np.arange(1, m + 1)

    def evaluate(l):
        F = np.full(m + 1, np.nan)
        rows = valid < l
        F[1:][rows] = 2.0 * np.einsum("ij,ij->i", weights[rows], S[rows])
        return F

    yield m + 1, evaluate(m + 1)
    for l in range(m, 1, -1):
        pl = p_sorted[l - 1]
        rows = slice(0, l - 1)  # k = 1..l-1
        S[rows, :l] = pl * S[rows, 1 : l + 1] + (1.0 - pl) * S[rows, :l]
        yield l, evaluate(l)


def expected_f_full(p, k: int) -> float:
    """Expected F of the full prediction marking the k most probable labels relevant.

    For k = 0 this is the probability that no label is relevant.
    """
    p = as_marginals(p)
    m = p.size
    if not 0 <= k <= m:
        raise InputError(f"k must lie in 0..{m}, got {k}")
    q = p[sort_descending(p)]
    if k == 0:
        return float(np.prod(1.0 - q))
    Q = build_prefix_counts(q)
    # single k: roll S from l = m+1 down to k+1
    S = 1.0 / (k + np.arange(m + 1, dtype=np.float64))
    for l in range(m, k, -1):
        pl = q[l - 1]
        S[:l] = pl * S[1 : l + 1] + (1.0 - pl) * S[:l]
    j = np.arange(k + 1)
    return float(2.0 * np.dot(j * Q[k, : k + 1], S[: k + 1]))


@dataclass(frozen=True)
class FMaxReport:
    prediction: PartialLabeling
    expected_value: float
    k_star: int
    l_star: int  # 1-based start of the predicted-0 block; m+1 if empty
    grid: np.ndarray | None = None  # grid[k, l] = expected F_G of <<k, l>>, NaN if not a candidate

    @property
    def n_abstained(self) -> int:
        return self.prediction.n_abstained


def _labeling(order: np.ndarray, m: int, k: int, l: int) -> PartialLabeling:
    entries = np.full(m, ABSTAIN, dtype=np.int64)
    entries[order[:k]] = 1
    entries[order[l - 1 :]] = 0
    return PartialLabeling(tuple(entries))


def maximize_f_full(p) -> FMaxReport:
    """Lewis-style expected-F maximizer over full predictions.

    Evaluates the top-k prediction for every k in 0..m and keeps the best
    (ties toward smaller k).
    """
    p = as_marginals(p)
    m = p.size
    order = sort_descending(p)
    q = p[order]
    values = np.empty(m + 1)
    values[0] = np.prod(1.0 - q)
    Q = build_prefix_counts(q)
    for l, F in _suffix_weight_sweep(q, Q):
        if l - 1 >= 1:
            values[l - 1] = F[l - 1]
    best = values.max()
    k = int(np.flatnonzero(values >= best - TIE_TOL)[0])
    return FMaxReport(_labeling(order, m, k, k + 1), float(values[k]), k, k + 1)


def maximize_f_abstain(p, f: Penalty, *, strict: bool = False, keep_grid: bool = False) -> FMaxReport:
    """Maximize the expected generalized F-measure over partial predictions.

    Candidates are all <<k, l>> predictions with 1 <= k < l <= m+1, full
    abstention (value 1 - f(m)), and, unless ``strict`` is set, the
    all-zero predictions on a suffix l..m (value P(suffix all
    irrelevant) - f(l-1)). The latter are needed because a decided part
    that is all zero scores 1 when the truth there is all zero too.

    Ties prefer fewer abstentions, then smaller k. O(m^3) time.
    """
    p = as_marginals(p)
    m = p.size
    if f.m != m:
        raise InputError(f"penalty built for m={f.m}, marginals have m={m}")
    order = sort_descending(p)
    q = p[order]
    fv = f.values()
    Q = build_prefix_counts(q)

    grid = np.full((m + 1, m + 2), np.nan)
    grid[0, m + 1] = 1.0 - fv[m]
    if not strict:
        # suffix products P(positions l..m all irrelevant), l = 1..m
        tail = np.cumprod((1.0 - q)[::-1])[::-1]
        for l in range(1, m + 1):
            grid[0, l] = tail[l - 1] - fv[l - 1]
    ks = np.arange(m + 1)
    for l, F in _suffix_weight_sweep(q, Q):
        rows = (ks >= 1) & (ks < l)
        grid[rows, l] = F[rows] - fv[l - ks[rows] - 1]

    best = np.nanmax(grid)
    near = np.argwhere(grid >= best - TIE_TOL)
    k, l = min(((int(k), int(l)) for k, l in near), key=lambda kl: (kl[1] - kl[0] - 1, kl[0]))
    return FMaxReport(
        _labeling(order, m, k, l),
        float(grid[k, l]),
        k,
        l,
        grid if keep_grid else None,
    )
