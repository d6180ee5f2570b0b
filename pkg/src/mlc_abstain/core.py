"""Domain types, loss evaluators and abstention penalties.

A partial labeling is stored as a tuple over {0, 1, ABSTAIN}; a partial
ranking as a tuple of distinct 0-based label indices, best first.
Marginal vectors and ground truths are plain validated numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ABSTAIN = -1
ABSTAIN_SYMBOL = "?"

# Objective values closer than this are treated as ties by the minimizers.
TIE_TOL = 1e-12


class InputError(ValueError):
    """Raised when arguments violate a documented precondition."""


class CapacityError(InputError):
    """Raised when a brute-force computation exceeds its size bound."""


def as_marginals(p) -> np.ndarray:
    """Validate a vector of label relevance probabilities."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"marginals must be a non-empty 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InputError("marginals must lie in [0, 1]")
    return arr


def as_labels(y) -> np.ndarray:
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise InputError("ground truth must be 1-D")
    if not np.all((arr == 0) | (arr == 1)):
        raise InputError("ground truth entries must be 0 or 1")
    return arr.astype(np.int64)


@dataclass(frozen=True)
class PartialLabeling:
    """A labeling over {0, 1, ABSTAIN}."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        for e in entries:
            if e not in (0, 1, ABSTAIN):
                raise InputError(f"invalid partial labeling entry {e!r}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str) -> "PartialLabeling":
        """Parse the ``1,0,?`` form used in prediction files."""
        out = []
        for tok in text.strip().split(","):
            tok = tok.strip()
            if tok == ABSTAIN_SYMBOL:
                out.append(ABSTAIN)
            elif tok in ("0", "1"):
                out.append(int(tok))
            else:
                raise InputError(f"invalid symbol {tok!r} in partial labeling")
        return cls(tuple(out))

    @classmethod
    def abstain_all(cls, m: int) -> "PartialLabeling":
        return cls((ABSTAIN,) * m)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return ",".join(ABSTAIN_SYMBOL if e == ABSTAIN else str(e) for e in self.entries)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def decided(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e != ABSTAIN)

    @property
    def abstained(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e == ABSTAIN)

    @property
    def n_abstained(self) -> int:
        return sum(1 for e in self.entries if e == ABSTAIN)

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


@dataclass(frozen=True)
class PartialRanking:
    """Distinct label indices ordered from most to least probably relevant."""

    order: tuple[int, ...]
    m: int | None = None

    def __post_init__(self):
        order = tuple(int(i) for i in self.order)
        if len(set(order)) != len(order):
            raise InputError(f"duplicate label index in ranking {order}")
        if any(i < 0 for i in order):
            raise InputError("ranking indices must be non-negative")
        if self.m is not None and any(i >= self.m for i in order):
            raise InputError(f"ranking index out of range for m={self.m}")
        object.__setattr__(self, "order", order)

    def __len__(self):
        return len(self.order)

    def __str__(self):
        # 1-based, as written in prediction files
        return ">".join(str(i + 1) for i in self.order) if self.order else "-"

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "PartialRanking":
        text = text.strip()
        if text in ("", "-"):
            return cls((), m)
        return cls(tuple(int(t) - 1 for t in text.split(">")), m)


@dataclass(frozen=True)
class Penalty:
    """Abstention penalty f(a) depending only on the number of abstentions.

    ``kind`` is one of ``"SEP"`` (f(a) = a*c), ``"PAR"``
    (f(a) = a*m*c/(m+a)) or ``"TABLE"`` (explicit values f(0..m)).
    """

    kind: str
    m: int
    c: float = 0.0
    table: tuple[float, ...] | None = field(default=None)

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        if kind not in ("SEP", "PAR", "TABLE"):
            raise InputError(f"unknown penalty kind {self.kind!r}")
        if self.m < 1:
            raise InputError("penalty needs m >= 1")
        if kind == "TABLE":
            if self.table is None or len(self.table) != self.m + 1:
                raise InputError("TABLE penalty needs m+1 values f(0..m)")
            vals = tuple(float(v) for v in self.table)
            if vals[0] != 0.0:
                raise InputError("penalty table must have f(0) = 0")
            if any(b < a for a, b in zip(vals, vals[1:])):
                raise InputError("penalty table must be nondecreasing")
            object.__setattr__(self, "table", vals)
        elif not (self.c >= 0.0 and np.isfinite(self.c)):
            raise InputError(f"penalty cost must be finite and >= 0, got {self.c}")

    @classmethod
    def sep(cls, c: float, m: int) -> "Penalty":
        return cls("SEP", m, float(c))

    @classmethod
    def par(cls, c: float, m: int) -> "Penalty":
        return cls("PAR", m, float(c))

    @classmethod
    def from_table(cls, values: Sequence[float]) -> "Penalty":
        return cls("TABLE", len(values) - 1, table=tuple(values))

    @classmethod
    def make(cls, kind: str, c: float, m: int) -> "Penalty":
        kind = kind.upper()
        if kind == "SEP":
            return cls.sep(c, m)
        if kind == "PAR":
            return cls.par(c, m)
        raise InputError(f"unknown penalty kind {kind!r}")

    def __call__(self, a):
        """Evaluate f at an abstention count (scalar or integer array)."""
        arr = np.asarray(a)
        if np.any(arr < 0) or np.any(arr > self.m):
            raise InputError(f"abstention count out of range 0..{self.m}: {a}")
        if self.kind == "SEP":
            out = arr * self.c
        elif self.kind == "PAR":
            out = arr * self.m * self.c / (self.m + arr)
        else:
            out = np.asarray(self.table)[arr.astype(np.int64)]
        return float(out) if np.ndim(out) == 0 else np.asarray(out, dtype=np.float64)

    def values(self) -> np.ndarray:
        """f(0), ..., f(m)."""
        return np.atleast_1d(self(np.arange(self.m + 1)))

    def has_bounded_increments(self) -> bool:
        """True when 0 <= f(k+1) - f(k) <= 1 for every k."""
        inc = np.diff(self.values())
        return bool(np.all(inc >= 0) and np.all(inc <= 1.0 + 1e-15))


def eval_penalty(f: Penalty, a: int) -> float:
    return f(a)


def _check_same_length(y, yhat):
    if len(y) != len(yhat):
        raise InputError(f"length mismatch: {len(y)} vs {len(yhat)}")


def generalized_hamming(y, yhat: PartialLabeling, f: Penalty) -> float:
    """Mistakes on decided labels plus the penalty for the abstained ones."""
    y = as_labels(y)
    _check_same_length(y, yhat)
    pred = yhat.to_array()
    decided = pred != ABSTAIN
    return float(np.count_nonzero(y[decided] != pred[decided])) + f(int(np.count_nonzero(~decided)))


def rank_loss(y, pi: PartialRanking) -> int:
    """Count ranked pairs where an irrelevant label precedes a relevant one.

    Labels missing from ``pi`` take part in no pair.
    """
    y = as_labels(y)
    if any(i >= len(y) for i in pi.order):
        raise InputError("ranking index out of range")
    seen_irrelevant = 0
    loss = 0
    for idx in pi.order:
        if y[idx]:
            loss += seen_irrelevant
        else:
            seen_irrelevant += 1
    return loss


def f_measure(y, yhat) -> float:
    """F1 of two binary vectors; 1.0 when both are empty or all-zero."""
    y = np.asarray(y, dtype=np.int64)
    yhat = np.asarray(yhat, dtype=np.int64)
    _check_same_length(y, yhat)
    denom = int(y.sum() + yhat.sum())
    if denom == 0:
        return 1.0
    return 2.0 * int(np.dot(y, yhat)) / denom


def generalized_f(y, yhat: PartialLabeling, f: Penalty) -> float:
    """F-measure on the decided part minus the abstention penalty."""
    y = as_labels(y)
    _check_same_length(y, yhat)
    pred = yhat.to_array()
    decided = pred != ABSTAIN
    return f_measure(y[decided], pred[decided]) - f(int(np.count_nonzero(~decided)))


def uncertainty(p):
    """2 * min(p, 1 - p); works elementwise on arrays."""
    p = np.asarray(p, dtype=np.float64)
    if np.any(p < 0) or np.any(p > 1):
        raise InputError("probability out of [0, 1]")
    u = 2.0 * np.minimum(p, 1.0 - p)
    return float(u) if u.ndim == 0 else u


def is_uncertainty_aligned(p, yhat: PartialLabeling) -> bool:
    u = np.atleast_1d(uncertainty(as_marginals(p)))
    dec, abst = list(yhat.decided), list(yhat.abstained)
    if not dec or not abst:
        return True
    return bool(u[dec].max() <= u[abst].min())


def boundary_positions(m: int, prefix: int, suffix_start: int) -> list[int]:
    """0-based sorted positions {0..prefix-1} and {suffix_start-1..m-1}.

    ``suffix_start`` is 1-based, so ``m + 1`` means an empty suffix.
    """
    return list(range(prefix)) + list(range(suffix_start - 1, m))


def is_boundary_set(positions: Iterable[int], m: int) -> bool:
    """Whether a set of sorted positions is a prefix plus a suffix."""
    pos = sorted(set(positions))
    a = 0
    while a < len(pos) and pos[a] == a:
        a += 1
    rest = pos[a:]
    return rest == list(range(m - len(rest), m))
