"""Binary relevance with L2-regularized logistic regression.

Each label gets its own logistic model, fitted by batch gradient descent
with Armijo backtracking on standardized features. The per-label
objective, averaged over the n training rows, is

    mean(log(1 + exp(-s * (X w + b)))) + ||w||^2 / (2 * c_reg * n)

with s = 2y - 1, i.e. the usual "C = c_reg" convention with an
unpenalized bias.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import expit, log_expit

from .core import InputError

logger = logging.getLogger(__name__)

MODEL_FORMAT = "mlc-abstain-br"
MODEL_VERSION = 1
PROB_CLAMP = 1e-12


@dataclass(frozen=True)
class TrainConfig:
    c_reg: float = 1.0
    max_iter: int = 2000
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if not self.c_reg > 0:
            raise InputError(f"regularization c_reg must be > 0, got {self.c_reg}")
        if not self.tol > 0:
            raise InputError(f"tolerance must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise InputError("max_iter must be >= 1")


@dataclass(frozen=True)
class LabelFit:
    iterations: int
    grad_norm: float
    objective: float
    converged: bool
    objective_trace: tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class BRModel:
    weights: np.ndarray  # (m, d) on standardized features
    biases: np.ndarray  # (m,)
    feature_mean: np.ndarray  # (d,)
    feature_scale: np.ndarray  # (d,)
    c_reg: float
    fits: tuple[LabelFit, ...] = ()

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    @property
    def n_labels(self) -> int:
        return self.weights.shape[0]

    def scores(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise InputError(f"expected {self.n_features} features, got {X.shape[1]}")
        Z = (X - self.feature_mean) / self.feature_scale
        return Z @ self.weights.T + self.biases

    def predict_proba(self, X) -> np.ndarray:
        """Marginal matrix (n, m) for a feature matrix (n, d)."""
        return np.clip(expit(self.scores(X)), PROB_CLAMP, 1.0 - PROB_CLAMP)

    def save(self, path) -> None:
        doc = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "n_features": self.n_features,
            "n_labels": self.n_labels,
            "c_reg": self.c_reg,
            "feature_mean": self.feature_mean.tolist(),
            "feature_scale": self.feature_scale.tolist(),
            "weights": self.weights.tolist(),
            "biases": self.biases.tolist(),
            "fits": [
                {"iterations": f.iterations, "grad_norm": f.grad_norm, "objective": f.objective, "converged": f.converged}
                for f in self.fits
            ],
        }
        Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "BRModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_VERSION:
            raise InputError(f"{path}: not a version {MODEL_VERSION} {MODEL_FORMAT} file")
        d, m = doc["n_features"], doc["n_labels"]
        weights = np.asarray(doc["weights"], dtype=np.float64).reshape(m, d)
        fits = tuple(LabelFit(**f) for f in doc.get("fits", []))
        return cls(
            weights,
            np.asarray(doc["biases"], dtype=np.float64),
            np.asarray(doc["feature_mean"], dtype=np.float64),
            np.asarray(doc["feature_scale"], dtype=np.float64),
            float(doc["c_reg"]),
            fits,
        )


def objective_and_gradient(w, b, Z, y, c_reg):
    """Regularized mean logistic loss and its gradient with respect to (w, b)."""
    n = Z.shape[0]
    s = 2.0 * y - 1.0
    margin = s * (Z @ w + b)
    reg = 1.0 / (c_reg * n)
    obj = -np.mean(log_expit(margin)) + 0.5 * reg * np.dot(w, w)
    # d/dmargin of -log sigmoid(margin) = -sigmoid(-margin)
    r = -s * expit(-margin) / n
    return obj, Z.T @ r + reg * w, float(r.sum())


def _fit_label(Z, y, config: TrainConfig) -> tuple[np.ndarray, float, LabelFit]:
    d = Z.shape[1]
    w = np.zeros(d)
    b = 0.0
    step = 1.0
    obj, gw, gb = objective_and_gradient(w, b, Z, y, config.c_reg)
    trace = [obj]
    gnorm = float(np.sqrt(np.dot(gw, gw) + gb * gb))
    it = 0
    while it < config.max_iter and gnorm > config.tol:
        it += 1
        step *= 2.0
        sq = gnorm * gnorm
        while True:
            w_new, b_new = w - step * gw, b - step * gb
            obj_new, gw_new, gb_new = objective_and_gradient(w_new, b_new, Z, y, config.c_reg)
            if obj_new <= obj - 0.5 * step * sq:
                break
            step *= 0.5
            if step < 1e-16:
                break
        if obj_new > obj:
            break
        w, b, obj, gw, gb = w_new, b_new, obj_new, gw_new, gb_new
        trace.append(obj)
        gnorm = float(np.sqrt(np.dot(gw, gw) + gb * gb))
    return w, b, LabelFit(it, gnorm, float(obj), gnorm <= config.tol, tuple(trace))


def _standardize(X):
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    constant = scale == 0
    if np.all(constant):
        warnings.warn("every feature has zero variance; fitting intercept-only models", RuntimeWarning, stacklevel=3)
    scale = np.where(constant, 1.0, scale)
    return mean, scale


def train(X, Y, config: TrainConfig | None = None) -> BRModel:
    """Fit one logistic model per label column of Y."""
    config = config or TrainConfig()
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0] or X.shape[0] == 0:
        raise InputError(f"need matching non-empty X (n, d) and Y (n, m), got {X.shape} and {Y.shape}")
    if not np.all((Y == 0) | (Y == 1)):
        raise InputError("labels must be binary")
    mean, scale = _standardize(X)
    Z = (X - mean) / scale
    weights, biases, fits = [], [], []
    for j in range(Y.shape[1]):
        w, b, fit = _fit_label(Z, Y[:, j].astype(np.float64), config)
        if not fit.converged:
            logger.info("label %d: stopped after %d iterations, gradient norm %.3g", j, fit.iterations, fit.grad_norm)
        weights.append(w)
        biases.append(b)
        fits.append(fit)
    return BRModel(np.array(weights), np.array(biases), mean, scale, config.c_reg, tuple(fits))


def predict_marginals(model: BRModel, x) -> np.ndarray:
    """Marginal vector for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InputError("expected a single feature vector")
    return model.predict_proba(x[None, :])[0]
