"""Expected rank loss of partial rankings and its greedy minimizer.

Positions refer to the labels sorted by decreasing relevance probability.
Under label independence an optimal selection of d positions is a prefix
plus a suffix of that order, and optimal selections of consecutive sizes
differ by one position next to the gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import TIE_TOL, InputError, PartialRanking, Penalty, as_marginals, boundary_positions


def sort_descending(p) -> np.ndarray:
    """Stable permutation putting the most probable labels first."""
    p = as_marginals(p)
    return np.argsort(-p, kind="stable")


@dataclass(frozen=True)
class BoundarySelection:
    """Positions {1..prefix} together with {suffix_start..m} (1-based).

    ``suffix_start == m + 1`` encodes an empty suffix, so the empty
    selection is (0, m+1) and the single top label is (1, m+1).
    """

    prefix: int
    suffix_start: int
    m: int

    def __post_init__(self):
        if not (0 <= self.prefix < self.suffix_start <= self.m + 1):
            raise InputError(f"invalid boundary selection <<{self.prefix},{self.suffix_start}>> for m={self.m}")

    @property
    def d(self) -> int:
        return self.prefix + self.m - self.suffix_start + 1

    def positions(self) -> list[int]:
        """Selected 0-based sorted positions, ascending."""
        return boundary_positions(self.m, self.prefix, self.suffix_start)

    @classmethod
    def empty(cls, m: int) -> "BoundarySelection":
        return cls(0, m + 1, m)

    @classmethod
    def single(cls, m: int) -> "BoundarySelection":
        return cls(1, m + 1, m)


def expected_partial_rank_loss(p_sorted, selection) -> float:
    """Expected number of inverted pairs among the selected positions.

    ``p_sorted`` must be in decreasing order; ``selection`` is a
    BoundarySelection or any increasing sequence of 0-based positions.
    Under independence this is the sum over selected i < j of
    p_j * (1 - p_i).
    """
    p_sorted = as_marginals(p_sorted)
    if isinstance(selection, BoundarySelection):
        if selection.m != p_sorted.size:
            raise InputError("selection built for a different m")
        pos = selection.positions()
    else:
        pos = [int(k) for k in selection]
        if any(b <= a for a, b in zip(pos, pos[1:])) or (pos and (pos[0] < 0 or pos[-1] >= p_sorted.size)):
            raise InputError("positions must be increasing and within range")
    q = p_sorted[pos]
    if q.size < 2:
        return 0.0
    miss_before = np.concatenate(([0.0], np.cumsum(1.0 - q)[:-1]))
    return float(np.dot(q, miss_before))


@dataclass(frozen=True)
class CurvePoint:
    d: int
    selection: BoundarySelection
    rank_loss: float  # expected inversions of the selection
    objective: float  # rank_loss + f(m - d)


@dataclass(frozen=True)
class RankRiskReport:
    ranking: PartialRanking
    selection: BoundarySelection
    expected_loss: float
    curve: list[CurvePoint] = field(repr=False)
    greedy_steps: list[tuple[float, float]] = field(default_factory=list, repr=False)

    @property
    def abstained(self) -> tuple[int, ...]:
        ranked = set(self.ranking.order)
        return tuple(i for i in range(self.selection.m) if i not in ranked)


def minimize_rank(p, f: Penalty, *, include_single: bool = True) -> RankRiskReport:
    """Risk-minimizing partial ranking for the rank loss plus penalty.

    Candidates are the empty ranking, the top label alone (unless
    ``include_single`` is False) and the greedy chain of boundary
    selections grown from <<1,m>>. Each step inserts the position right
    after the prefix or right before the suffix, whichever adds less
    expected loss (ties extend the prefix). The insertion cost of position
    x is p_x * sum(1 - p over prefix) + (1 - p_x) * sum(p over suffix).
    Ties across d favour the larger d.

    ``greedy_steps`` records (prefix-side, suffix-side) losses per step.
    """
    p = as_marginals(p)
    m = p.size
    if f.m != m:
        raise InputError(f"penalty built for m={f.m}, marginals have m={m}")
    order = sort_descending(p)
    q = p[order]
    fv = f.values()

    curve = [CurvePoint(0, BoundarySelection.empty(m), 0.0, float(fv[m]))]
    if include_single:
        curve.append(CurvePoint(1, BoundarySelection.single(m), 0.0, float(fv[m - 1])))

    steps: list[tuple[float, float]] = []
    if m >= 2:
        a, b = 1, m  # prefix length, 1-based suffix start
        miss_prefix = 1.0 - q[0]
        hit_suffix = q[m - 1]
        loss = q[m - 1] * (1.0 - q[0])
        curve.append(CurvePoint(2, BoundarySelection(a, b, m), float(loss), float(loss + fv[m - 2])))
        for d in range(3, m + 1):
            xl, xr = a, b - 2  # 0-based positions next to the gap
            left = loss + q[xl] * miss_prefix + (1.0 - q[xl]) * hit_suffix
            right = loss + q[xr] * miss_prefix + (1.0 - q[xr]) * hit_suffix
            steps.append((float(left), float(right)))
            if left <= right + TIE_TOL:
                loss = left
                miss_prefix += 1.0 - q[xl]
                a += 1
            else:
                loss = right
                hit_suffix += q[xr]
                b -= 1
            curve.append(CurvePoint(d, BoundarySelection(a, b, m), float(loss), float(loss + fv[m - d])))

    best = min(pt.objective for pt in curve)
    chosen = max((pt for pt in curve if pt.objective <= best + TIE_TOL), key=lambda pt: pt.d)
    ranking = PartialRanking(tuple(int(order[k]) for k in chosen.selection.positions()), m)
    return RankRiskReport(ranking, chosen.selection, float(chosen.objective), curve, steps)
