"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v``; the summary
lines are also collected by ``conftest.py`` and shown at the end of the
session.
"""

import time

import numpy as np
import pytest

from mlc_abstain.br import TrainConfig, objective_and_gradient, train
from mlc_abstain.core import ABSTAIN, PartialLabeling, Penalty, generalized_f, generalized_hamming, is_boundary_set, is_uncertainty_aligned
from mlc_abstain.data import synth
from mlc_abstain.fmeasure import maximize_f_abstain, maximize_f_full
from mlc_abstain.hamming import minimize_hamming
from mlc_abstain.oracle import brute_maximize_f_full
from mlc_abstain.rank import minimize_rank, sort_descending
from mlc_abstain.sweep import SweepConfig, parse_grid, run_sweep, summarize, write_rows
from mlc_abstain.verify import random_trials

RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str):
    line = f"ACCEPTANCE {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# shared oracle runs for criteria 3 and 4

ORACLE_TOL = 1e-9
TRIALS_PER_LOSS = 510
BOUND = {"hamming": 8, "rank": 7, "f1": 7}


def _sizes(bound):
    """Spread the trials over m = 1..bound, weighted toward the largest sizes."""
    weights = np.arange(1, bound + 1, dtype=float)
    counts = np.floor(TRIALS_PER_LOSS * weights / weights.sum()).astype(int)
    counts[-1] += TRIALS_PER_LOSS - counts.sum()
    return {m: int(c) for m, c in zip(range(1, bound + 1), counts)}


@pytest.fixture(scope="module")
def oracle_runs():
    out = {}
    start = time.perf_counter()
    for loss, bound in BOUND.items():
        trials = []
        for m, count in _sizes(bound).items():
            trials.extend(random_trials(loss, m, count, seed=1000 * m + len(loss)))
        out[loss] = trials
    out["elapsed"] = time.perf_counter() - start
    return out


def _kl_form(pred: PartialLabeling, p) -> bool:
    code = {1: 0, ABSTAIN: 1, 0: 2}
    seq = [code[int(v)] for v in pred.to_array()[sort_descending(p)]]
    return seq == sorted(seq)


# ---------------------------------------------------------------------------


def test_criterion_01_rank_table():
    p = [0.9, 0.8, 0.7, 0.3]
    f = Penalty.sep(0.03, 4)
    minimize_rank(p, f)  # warm-up
    t0 = time.perf_counter()
    r = minimize_rank(p, f)
    elapsed = time.perf_counter() - t0
    by_d = {pt.d: pt for pt in r.curve}
    losses = [by_d[d].rank_loss for d in (0, 2, 3, 4)]
    totals = [by_d[d].objective for d in (0, 2, 3, 4)]
    ok = (
        np.allclose(losses, [0, 0.03, 0.17, 0.47], rtol=0, atol=1e-9)
        and np.allclose(totals, [0.12, 0.09, 0.20, 0.47], rtol=0, atol=1e-9)
        and set(r.ranking.order) == {0, 3}
        and abs(r.expected_loss - 0.09) <= 1e-9
        and elapsed < 1e-3
    )
    report(1, ok, f"losses={np.round(losses, 12).tolist()} totals={np.round(totals, 12).tolist()} ranking={r.ranking} {elapsed * 1e3:.3f} ms")


def test_criterion_02_rank_not_uncertainty_aligned():
    r = minimize_rank([0.9, 0.8, 0.7, 0.3], Penalty.sep(0.03, 4))
    ok = 1 in r.abstained and 3 in r.ranking.order
    report(2, ok, f"abstains on label 2 (u=0.4), ranks label 4 (u=0.6): ranking={r.ranking}")


def test_criterion_03_oracle_equivalence(oracle_runs):
    parts, ok = [], True
    for loss in BOUND:
        trials = oracle_runs[loss]
        worst = max(t.gap for t in trials)
        ok &= len(trials) >= 500 and worst <= ORACLE_TOL
        parts.append(f"{loss}: {len(trials)} trials, max gap {worst:.2e}")
    ok &= oracle_runs["elapsed"] < 300
    report(3, ok, "; ".join(parts) + f"; {oracle_runs['elapsed']:.1f} s")


def test_criterion_04_structural_invariants(oracle_runs):
    bad = {"hamming": 0, "rank": 0, "f1": 0, "lewis": 0}
    for t in oracle_runs["hamming"]:
        bad["hamming"] += not is_uncertainty_aligned(t.p, t.fast_prediction)
    for t in oracle_runs["rank"]:
        q = t.p[sort_descending(t.p)]
        pos = sorted(int(np.flatnonzero(sort_descending(t.p) == i)[0]) for i in t.fast_prediction.order)
        bad["rank"] += not (is_boundary_set(pos, q.size) or len(pos) <= 1)
    for t in oracle_runs["f1"]:
        bad["f1"] += not _kl_form(t.fast_prediction, t.p)
        full = maximize_f_full(t.p)
        top = set(sort_descending(t.p)[: full.k_star].tolist())
        predicted = {i for i, v in enumerate(full.prediction.entries) if v == 1}
        _, brute = brute_maximize_f_full(t.p)
        bad["lewis"] += predicted != top or abs(full.expected_value - brute) > ORACLE_TOL
    report(4, not any(bad.values()), "violations " + ", ".join(f"{k}={v}" for k, v in bad.items()))


def test_criterion_05_convergence_to_mlc():
    rng = np.random.default_rng(5)
    trials = failures = 0
    for m in range(4, 11):
        for _ in range(200):
            p = rng.random(m)
            for f in (Penalty.sep(0.5, m), Penalty.par(1.0, m)):
                trials += 1
                failures += minimize_hamming(p, f).prediction.n_abstained != 0
    report(5, failures == 0, f"{trials - failures}/{trials} full predictions (SEP c=0.5, PAR c=1, m=4..10)")


def test_criterion_06_monotonicity():
    rng = np.random.default_rng(6)
    inversions = 0
    n = 10_000
    for i in range(n):
        m = int(rng.integers(1, 11))
        y = rng.integers(0, 2, m)
        # status 0 = wrong, 1 = abstain, 2 = correct; yhat2 is never preferred to yhat1
        s1 = rng.integers(0, 3, m)
        s2 = np.minimum(s1, rng.integers(0, 3, m))
        kind = ("SEP", "PAR")[i % 2]
        # c <= 1 keeps every increment f(a+1) - f(a) at most 1 for both kinds
        f = Penalty.make(kind, float(rng.uniform(0, 1)), m)
        assert f.has_bounded_increments()

        def realize(s):
            return PartialLabeling(tuple(int(v) for v in np.where(s == 2, y, np.where(s == 0, 1 - y, ABSTAIN))))

        inversions += generalized_hamming(y, realize(s1), f) > generalized_hamming(y, realize(s2), f) + 1e-12
    report(6, inversions == 0, f"{n} triples, {inversions} inversions")


def test_criterion_07_f_not_monotone():
    f = Penalty.sep(0.1, 2)
    before = generalized_f([1, 0], PartialLabeling((0, 1)), f)
    after = generalized_f([1, 0], PartialLabeling((ABSTAIN, 1)), f)
    ok = before == 0.0 and abs(after - (-0.1)) <= 1e-15
    report(7, ok, f"F_G {before!r} -> {after!r}")


def test_criterion_08_complexity():
    rng = np.random.default_rng(8)
    p = rng.random(10_000)
    times = {}
    for name, fn in (("hamming", minimize_hamming), ("rank", minimize_rank)):
        t0 = time.perf_counter()
        fn(p, Penalty.par(0.4, p.size))
        times[name] = time.perf_counter() - t0
    q = rng.random(400)
    t0 = time.perf_counter()
    maximize_f_abstain(q, Penalty.sep(0.05, q.size))
    times["f1"] = time.perf_counter() - t0
    ok = times["hamming"] < 1 and times["rank"] < 1 and times["f1"] < 10
    report(8, ok, f"hamming m=1e4 {times['hamming']:.3f}s, rank m=1e4 {times['rank']:.3f}s, f1 m=400 {times['f1']:.3f}s")


def test_criterion_09_trainer():
    rng = np.random.default_rng(9)
    worst = 0.0
    h = 1e-5
    for _ in range(100):
        n, d = int(rng.integers(5, 60)), int(rng.integers(1, 8))
        Z = rng.standard_normal((n, d))
        y = rng.integers(0, 2, n).astype(float)
        w, b = rng.standard_normal(d), float(rng.standard_normal())
        c_reg = float(rng.uniform(0.1, 5))
        _, gw, gb = objective_and_gradient(w, b, Z, y, c_reg)
        theta = np.append(w, b)

        def obj(t):
            return objective_and_gradient(t[:-1], t[-1], Z, y, c_reg)[0]

        numeric = np.array([(obj(theta + h * e) - obj(theta - h * e)) / (2 * h) for e in np.eye(d + 1)])
        analytic = np.append(gw, gb)
        worst = max(worst, np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), np.linalg.norm(numeric)))
    ds = synth(6, 10_000, 10, seed=0)
    model = train(ds.X, ds.Y, TrainConfig())
    mae = float(np.mean(np.abs(model.predict_proba(ds.X) - ds.true_marginals)))
    report(9, worst < 1e-5 and mae < 0.05, f"max relative gradient error {worst:.2e} over 100 instances; marginal MAE {mae:.4f}")


def test_criterion_10_end_to_end_sweep(tmp_path):
    ds = synth(6, 2000, 10, seed=0)
    config = SweepConfig("hamming", "SEP", parse_grid("0.05:0.5:0.05"), folds=10, seed=0)
    rows = run_sweep(config, ds)
    write_rows(rows, tmp_path / "a.csv")
    write_rows(run_sweep(config, ds), tmp_path / "b.csv")
    deterministic = (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    s = summarize(rows)
    abst = s["partial"]["abstention_pct"]
    monotone = bool(np.all(np.diff(abst) <= 1e-12))
    slack = s["partial"]["gen_loss"] - np.minimum(s["MLC"]["gen_loss"], s["ABS"]["gen_loss"])
    dominated = bool(np.all(slack <= 0.02))
    report(
        10,
        deterministic and monotone and dominated,
        f"abstention% {np.round(abst, 1).tolist()}; max excess over min(MLC, ABS) {slack.max():.4f}; deterministic={deterministic}",
    )
