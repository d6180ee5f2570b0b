import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlc_abstain.core import InputError, PartialRanking, Penalty, is_boundary_set, uncertainty
from mlc_abstain.oracle import brute_minimize_rank, exact_expected_loss, rank_losses_by_size
from mlc_abstain.rank import BoundarySelection, expected_partial_rank_loss, minimize_rank, sort_descending

TOL = 1e-9
P4 = [0.9, 0.8, 0.7, 0.3]

small_probs = st.lists(st.floats(0, 1), min_size=1, max_size=7)


class TestSort:
    def test_orders(self):
        assert sort_descending([0.3, 0.9]).tolist() == [1, 0]
        assert sort_descending([0.5, 0.5]).tolist() == [0, 1]
        assert sort_descending(P4).tolist() == [0, 1, 2, 3]


class TestBoundarySelection:
    def test_sizes(self):
        assert BoundarySelection(1, 4, 4).positions() == [0, 3]
        assert BoundarySelection(2, 4, 4).d == 3
        assert BoundarySelection.empty(4).d == 0
        assert BoundarySelection.single(4).positions() == [0]

    def test_invalid(self):
        with pytest.raises(InputError):
            BoundarySelection(3, 2, 4)


class TestExpectedPartialRankLoss:
    @pytest.mark.parametrize(
        "sel, value",
        [(BoundarySelection(1, 4, 4), 0.03), (BoundarySelection(2, 4, 4), 0.17), (BoundarySelection(3, 4, 4), 0.47)],
    )
    def test_four_label_table(self, sel, value):
        assert expected_partial_rank_loss(P4, sel) == pytest.approx(value, abs=TOL)

    def test_small_selections(self):
        assert expected_partial_rank_loss(P4, []) == 0.0
        assert expected_partial_rank_loss(P4, [2]) == 0.0

    def test_bad_positions(self):
        with pytest.raises(InputError):
            expected_partial_rank_loss(P4, [2, 1])

    @settings(max_examples=100, deadline=None)
    @given(small_probs, st.data())
    def test_matches_enumeration(self, p, data):
        q = np.sort(np.asarray(p))[::-1]
        pos = sorted(data.draw(st.sets(st.integers(0, len(p) - 1))))
        enumerated = exact_expected_loss(q, PartialRanking(tuple(pos)), "rank", Penalty.sep(0.0, len(p)))
        assert expected_partial_rank_loss(q, pos) == pytest.approx(enumerated, abs=TOL)


class TestMinimizeRank:
    def test_four_label_example(self):
        r = minimize_rank(P4, Penalty.sep(0.03, 4))
        assert r.ranking.order == (0, 3)
        assert r.expected_loss == pytest.approx(0.09, abs=TOL)
        by_d = {pt.d: pt.objective for pt in r.curve}
        assert by_d[0] == pytest.approx(0.12, abs=TOL)
        assert by_d[2] == pytest.approx(0.09, abs=TOL)
        assert by_d[3] == pytest.approx(0.20, abs=TOL)
        assert by_d[4] == pytest.approx(0.47, abs=TOL)

    def test_not_uncertainty_aligned(self):
        r = minimize_rank(P4, Penalty.sep(0.03, 4))
        u = uncertainty(P4)
        assert 3 in r.ranking.order and 1 in r.abstained
        assert u[3] > u[1]

    def test_certain_labels(self):
        r = minimize_rank([1.0, 0.0], Penalty.sep(1.0, 2))
        assert r.ranking.order == (0, 1)
        assert r.expected_loss == 0.0

    def test_single_label_beats_abstention(self):
        # d=1 costs f(2)=0.10, full abstention f(3)=0.15, d=2 costs 0.25+0.05
        r = minimize_rank([0.5, 0.5, 0.5], Penalty.sep(0.05, 3))
        assert len(r.ranking) == 1
        assert r.expected_loss == pytest.approx(0.10, abs=TOL)
        assert brute_minimize_rank([0.5, 0.5, 0.5], Penalty.sep(0.05, 3))[1] == pytest.approx(0.10, abs=TOL)

    def test_strict_mode_skips_single(self):
        r = minimize_rank([0.5, 0.5, 0.5], Penalty.sep(0.05, 3), include_single=False)
        assert r.expected_loss == pytest.approx(0.15, abs=TOL)
        assert len(r.ranking) == 0

    def test_m_equals_one(self):
        r = minimize_rank([0.4], Penalty.sep(0.2, 1))
        assert r.ranking.order == (0,)
        assert r.expected_loss == 0.0

    @settings(max_examples=120, deadline=None)
    @given(small_probs, st.floats(0, 2), st.sampled_from(["SEP", "PAR"]))
    def test_oracle_equivalence(self, p, c, kind):
        f = Penalty.make(kind, c, len(p))
        r = minimize_rank(p, f)
        _, brute = brute_minimize_rank(p, f)
        assert r.expected_loss == pytest.approx(brute, abs=TOL)
        assert exact_expected_loss(p, r.ranking, "rank", f) == pytest.approx(r.expected_loss, abs=TOL)

    @settings(max_examples=80, deadline=None)
    @given(small_probs)
    def test_greedy_chain_is_optimal_per_size(self, p):
        """Each K_d on the chain matches the best ordered d-subset found by enumeration."""
        m = len(p)
        r = minimize_rank(p, Penalty.sep(0.0, m))
        chain = {pt.d: pt for pt in r.curve}
        for d in range(2, m + 1):
            _, losses = rank_losses_by_size(p, d)
            assert chain[d].rank_loss == pytest.approx(losses.min(), abs=TOL)
            assert is_boundary_set(chain[d].selection.positions(), m)

    @settings(max_examples=80)
    @given(st.lists(st.floats(0, 1), min_size=2, max_size=40))
    def test_incremental_updates_match_recomputation(self, p):
        m = len(p)
        r = minimize_rank(p, Penalty.sep(0.1, m))
        q = np.asarray(p)[sort_descending(p)]
        for pt in r.curve:
            assert pt.rank_loss == pytest.approx(expected_partial_rank_loss(q, pt.selection), abs=TOL)
        # each greedy step keeps the cheaper extension
        chain = [pt for pt in r.curve if pt.d >= 3]
        for (left, right), pt in zip(r.greedy_steps, chain):
            assert pt.rank_loss == pytest.approx(min(left, right), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.01, 0.99), min_size=2, max_size=6))
def test_best_subset_of_each_size_is_boundary(p):
    """Exhaustive search over subsets (ordered by probability) lands on a prefix+suffix."""
    m = len(p)
    q = np.sort(np.asarray(p))[::-1]
    for d in range(2, m + 1):
        vals = {K: expected_partial_rank_loss(q, K) for K in itertools.combinations(range(m), d)}
        best = min(vals.values())
        boundary_best = min(v for K, v in vals.items() if is_boundary_set(K, m))
        assert boundary_best == pytest.approx(best, abs=TOL)
