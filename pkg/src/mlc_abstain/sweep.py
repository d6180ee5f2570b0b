"""Cross-validated cost sweeps comparing partial predictions with two baselines.

For every fold a binary relevance model is trained on the other folds and
its marginals on the held-out rows are turned into predictions, once per
grid cost. Besides the abstaining predictor ("partial") two reference
series are recorded: full prediction ("MLC") and full abstention ("ABS").

Reported numbers follow the usual plotting conventions: Hamming loss as
100 * L / m, rank loss as L / m, and F-measure as the (generalized)
F value itself, where higher is better. Abstention is a percentage of m.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .br import TrainConfig, train
from .core import (
    ABSTAIN,
    InputError,
    PartialLabeling,
    PartialRanking,
    Penalty,
    f_measure,
    rank_loss,
)
from .data import Dataset, kfold
from .fmeasure import maximize_f_abstain, maximize_f_full
from .hamming import minimize_hamming
from .rank import expected_partial_rank_loss, minimize_rank, sort_descending

LOSSES = ("hamming", "rank", "f1")
PENALTIES = ("SEP", "PAR")
SERIES = ("partial", "MLC", "ABS")

# default cost grid per (loss, penalty)
DEFAULT_GRIDS = {
    ("hamming", "SEP"): "0.05:0.5:0.05",
    ("hamming", "PAR"): "0.1:1:0.1",
    ("rank", "SEP"): "0.1:1:0.1",
    ("rank", "PAR"): "0.2:2:0.2",
    ("f1", "SEP"): "0.01:0.1:0.01",
    ("f1", "PAR"): "0.02:0.2:0.02",
}


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse ``start:stop:step`` into an inclusive, rounded cost grid."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise InputError(f"grid must look like start:stop:step, got {text!r}") from None
    if not step > 0 or stop < start or start < 0:
        raise InputError(f"invalid grid {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 12) for i in range(count))


@dataclass(frozen=True)
class SweepConfig:
    loss: str
    penalty: str
    grid: tuple[float, ...]
    folds: int = 10
    seed: int = 0
    train: TrainConfig = field(default_factory=TrainConfig)
    jobs: int = 1

    def __post_init__(self):
        if self.loss not in LOSSES:
            raise InputError(f"unknown loss {self.loss!r}")
        if self.penalty not in PENALTIES:
            raise InputError(f"unknown penalty {self.penalty!r}")
        if not self.grid:
            raise InputError("cost grid is empty")


@dataclass(frozen=True)
class SweepRow:
    loss_kind: str
    penalty: str
    series: str
    c: float
    fold: int
    gen_loss: float  # realized generalized loss (F: generalized F), normalized
    partial_loss: float  # realized loss on the decided labels only, normalized
    expected_loss: float  # expected generalized loss under the model marginals, normalized
    abstention_pct: float

    FIELDS = (
        "loss_kind",
        "penalty",
        "series",
        "c",
        "fold",
        "gen_loss",
        "partial_loss",
        "expected_loss",
        "abstention_pct",
    )


def _normalizer(loss: str, m: int) -> float:
    return {"hamming": 100.0 / m, "rank": 1.0 / m, "f1": 1.0}[loss]


def _predict(loss, p, f):
    """Return (prediction, expected generalized value, abstention count)."""
    if loss == "hamming":
        r = minimize_hamming(p, f)
        return r.prediction, r.expected_loss, r.prediction.n_abstained
    if loss == "rank":
        r = minimize_rank(p, f)
        return r.ranking, r.expected_loss, p.size - len(r.ranking)
    r = maximize_f_abstain(p, f)
    return r.prediction, r.expected_value, r.prediction.n_abstained


def _mlc(loss, p):
    """Full prediction and its expected plain loss (F: expected F)."""
    if loss == "hamming":
        pred = (p > 0.5).astype(np.int64)
        return PartialLabeling(tuple(pred)), float(np.sum(np.where(pred == 1, 1.0 - p, p)))
    if loss == "rank":
        order = sort_descending(p)
        return PartialRanking(tuple(int(i) for i in order), p.size), expected_partial_rank_loss(p[order], range(p.size))
    r = maximize_f_full(p)
    return r.prediction, r.expected_value


def _realized(loss, y, pred):
    """Realized loss on the decided part (F: F-measure on the decided part)."""
    if loss == "rank":
        return float(rank_loss(y, pred))
    arr = pred.to_array()
    dec = arr != ABSTAIN
    if loss == "hamming":
        return float(np.count_nonzero(y[dec] != arr[dec]))
    return f_measure(y[dec], arr[dec])


def _fold_rows(loss, penalty, grid, fold, y_test, p_test):
    m = y_test.shape[1]
    scale = _normalizer(loss, m)
    rows = []

    mlc_real, mlc_exp = [], []
    for y, p in zip(y_test, p_test):
        pred, exp = _mlc(loss, p)
        mlc_real.append(_realized(loss, y, pred))
        mlc_exp.append(exp)
    mlc_real_mean = float(np.mean(mlc_real)) * scale
    mlc_exp_mean = float(np.mean(mlc_exp)) * scale

    for c in grid:
        f = Penalty.make(penalty, c, m)
        full_abstain = f(m)
        abs_value = (1.0 - full_abstain if loss == "f1" else full_abstain) * scale
        abs_partial = 1.0 if loss == "f1" else 0.0
        gen, part, exp, abst = [], [], [], []
        for y, p in zip(y_test, p_test):
            pred, value, a = _predict(loss, p, f)
            realized = _realized(loss, y, pred)
            part.append(realized)
            gen.append(realized - f(a) if loss == "f1" else realized + f(a))
            exp.append(value)
            abst.append(a)
        rows.append(
            SweepRow(
                loss,
                penalty,
                "partial",
                c,
                fold,
                float(np.mean(gen)) * scale,
                float(np.mean(part)) * scale,
                float(np.mean(exp)) * scale,
                100.0 * float(np.mean(abst)) / m,
            )
        )
        rows.append(SweepRow(loss, penalty, "MLC", c, fold, mlc_real_mean, mlc_real_mean, mlc_exp_mean, 0.0))
        rows.append(SweepRow(loss, penalty, "ABS", c, fold, abs_value, abs_partial * scale, abs_value, 100.0))
    return rows


def _run_fold(args):
    config, ds, marginals, fold, train_rows, test_rows = args
    if marginals is None:
        model = train(ds.X[train_rows], ds.Y[train_rows], config.train)
        p_test = model.predict_proba(ds.X[test_rows])
    else:
        p_test = marginals[test_rows]
    return _fold_rows(config.loss, config.penalty, config.grid, fold, ds.Y[test_rows], p_test)


def run_sweep(config: SweepConfig, ds: Dataset, marginals=None) -> list[SweepRow]:
    """Run the cross-validated sweep.

    If ``marginals`` (n, m) is given it replaces the trained model, e.g.
    the true marginals of a synthetic dataset; the folds then only
    partition the evaluation rows.
    """
    if marginals is not None:
        marginals = np.asarray(marginals, dtype=np.float64)
        if marginals.shape != ds.Y.shape:
            raise InputError(f"marginals shape {marginals.shape} does not match labels {ds.Y.shape}")
    plan = kfold(ds.n, config.folds, config.seed)
    jobs = [(config, ds, marginals, i, tr, te) for i, (tr, te) in enumerate(plan.splits())]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_fold, jobs))
    else:
        results = [_run_fold(j) for j in jobs]
    rows = [r for fold_rows in results for r in fold_rows]
    rows.sort(key=lambda r: (SERIES.index(r.series), r.c, r.fold))
    return rows


def summarize(rows) -> dict[str, dict[str, np.ndarray]]:
    """Fold means per series: {series: {"c": ..., "gen_loss": ..., ...}}."""
    acc = defaultdict(lambda: defaultdict(list))
    for r in rows:
        acc[r.series][r.c].append(r)
    out = {}
    for series, by_c in acc.items():
        cs = sorted(by_c)
        out[series] = {"c": np.array(cs)}
        for name in ("gen_loss", "partial_loss", "expected_loss", "abstention_pct"):
            out[series][name] = np.array([np.mean([getattr(r, name) for r in by_c[c]]) for c in cs])
    return out


def write_rows(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SweepRow.FIELDS)
        for r in rows:
            d = asdict(r)
            w.writerow([repr(d[k]) if isinstance(d[k], float) else d[k] for k in SweepRow.FIELDS])


def read_rows(path) -> list[SweepRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            SweepRow(
                r["loss_kind"],
                r["penalty"],
                r["series"],
                float(r["c"]),
                int(r["fold"]),
                float(r["gen_loss"]),
                float(r["partial_loss"]),
                float(r["expected_loss"]),
                float(r["abstention_pct"]),
            )
            for r in reader
        ]
