"""Datasets: CSV ingestion, synthetic generation and fold planning.

CSV layout: a header ``f0,...,f{d-1},l0,...,l{m-1}`` followed by one row
per instance; ``f*`` columns are real features and ``l*`` columns binary
labels. Marginal files use columns ``p0,...,p{m-1}``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from .core import InputError


class DataFormatError(InputError):
    """Malformed or invalid CSV input."""


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray  # (n, d)
    Y: np.ndarray  # (n, m) in {0, 1}
    true_marginals: np.ndarray | None = None  # (n, m), synthetic data only
    feature_names: tuple[str, ...] = ()
    label_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.X.ndim != 2 or self.Y.ndim != 2 or self.X.shape[0] != self.Y.shape[0]:
            raise InputError(f"inconsistent shapes X{self.X.shape} Y{self.Y.shape}")
        if not np.all((self.Y == 0) | (self.Y == 1)):
            raise InputError("labels must be 0 or 1")
        if self.true_marginals is not None and self.true_marginals.shape != self.Y.shape:
            raise InputError("true marginals must match the label matrix")
        if not self.feature_names:
            object.__setattr__(self, "feature_names", tuple(f"f{i}" for i in range(self.d)))
        if not self.label_names:
            object.__setattr__(self, "label_names", tuple(f"l{i}" for i in range(self.m)))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def m(self) -> int:
        return self.Y.shape[1]

    def subset(self, rows) -> "Dataset":
        tm = None if self.true_marginals is None else self.true_marginals[rows]
        return Dataset(self.X[rows], self.Y[rows], tm, self.feature_names, self.label_names)


def _read_rows(path):
    text = Path(path).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    while rows and not any(cell.strip() for cell in rows[-1]):
        rows.pop()
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    return rows


def load_csv(path, require_labels: bool = True) -> Dataset:
    """Parse a dataset CSV; with ``require_labels=False`` label columns may be absent."""
    rows = _read_rows(path)
    header = [h.strip() for h in rows[0]]
    feat = [i for i, h in enumerate(header) if h.startswith("f")]
    lab = [i for i, h in enumerate(header) if h.startswith("l")]
    if len(feat) + len(lab) != len(header) or (require_labels and not lab):
        raise DataFormatError(f"{path}: line 1: header must name feature columns f* and label columns l*")
    X = np.empty((len(rows) - 1, len(feat)))
    Y = np.empty((len(rows) - 1, len(lab)), dtype=np.int64)
    for r, row in enumerate(rows[1:]):
        line = r + 2
        if len(row) != len(header):
            raise DataFormatError(f"{path}: line {line}: expected {len(header)} fields, got {len(row)}")
        try:
            X[r] = [float(row[i]) for i in feat]
        except ValueError as exc:
            raise DataFormatError(f"{path}: line {line}: {exc}") from None
        for j, i in enumerate(lab):
            cell = row[i].strip()
            if cell not in ("0", "1"):
                raise DataFormatError(f"{path}: line {line}, column {header[i]}: label value {cell!r} is not 0 or 1")
            Y[r, j] = int(cell)
    return Dataset(X, Y, None, tuple(header[i] for i in feat), tuple(header[i] for i in lab))


def write_csv(ds: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(ds.feature_names) + list(ds.label_names))
        for x, y in zip(ds.X, ds.Y):
            w.writerow([repr(float(v)) for v in x] + [str(int(v)) for v in y])


def load_marginals(path) -> np.ndarray:
    rows = _read_rows(path)
    header = [h.strip() for h in rows[0]]
    if not header or not all(h.startswith("p") for h in header):
        raise DataFormatError(f"{path}: line 1: marginal files need a p0,...,p{{m-1}} header")
    out = np.empty((len(rows) - 1, len(header)))
    for r, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise DataFormatError(f"{path}: line {r + 2}: expected {len(header)} fields, got {len(row)}")
        try:
            out[r] = [float(v) for v in row]
        except ValueError as exc:
            raise DataFormatError(f"{path}: line {r + 2}: {exc}") from None
        if np.any(out[r] < 0) or np.any(out[r] > 1):
            raise DataFormatError(f"{path}: line {r + 2}: probabilities must lie in [0, 1]")
    return out


def write_marginals(P, path) -> None:
    P = np.asarray(P, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"p{j}" for j in range(P.shape[1])])
        for row in P:
            w.writerow([repr(float(v)) for v in row])


def synth(m: int, n: int, d: int, seed: int) -> Dataset:
    """Independent-label logistic data with known marginals.

    Features are standard normal, weights N(0, 4/d) and biases N(0, 1),
    so logits have roughly unit-to-two spread. Labels are drawn
    independently given the features.
    """
    if min(m, n, d) < 1:
        raise InputError(f"m, n and d must be positive, got m={m}, n={n}, d={d}")
    rng = np.random.default_rng(seed)
    W = rng.normal(0.0, 2.0 / np.sqrt(d), size=(d, m))
    b = rng.normal(0.0, 1.0, size=m)
    X = rng.standard_normal((n, d))
    P = expit(X @ W + b)
    Y = (rng.random((n, m)) < P).astype(np.int64)
    return Dataset(X, Y, P)


@dataclass(frozen=True)
class FoldPlan:
    folds: tuple[np.ndarray, ...]
    seed: int

    @property
    def k(self) -> int:
        return len(self.folds)

    def splits(self):
        """Yield (train_rows, test_rows) for each fold."""
        for i, test in enumerate(self.folds):
            train = np.sort(np.concatenate([f for j, f in enumerate(self.folds) if j != i]))
            yield train, test


def kfold(n: int, k: int, seed: int) -> FoldPlan:
    if not 2 <= k <= n:
        raise InputError(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    return FoldPlan(tuple(np.sort(part) for part in np.array_split(perm, k)), seed)
