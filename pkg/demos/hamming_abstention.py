"""
Abstaining on uncertain labels under Hamming loss
=================================================

A multilabel predictor hands us one marginal probability per label.
Under Hamming loss, each label we commit to costs its chance of being
wrong, while each label we skip costs a share of the abstention
penalty. This script walks through one query instance.
"""

import numpy as np

from mlc_abstain import Penalty, minimize_hamming, minimize_hamming_const
from mlc_abstain.oracle import brute_minimize_hamming

p = np.array([0.9, 0.8, 0.7, 0.3])

###############################################################################
# With a linear penalty of 0.25 per skipped label, committing to a label
# pays off only if its error probability min(p, 1 - p) is at most 0.25.

f = Penalty.sep(0.25, p.size)
report = minimize_hamming(p, f)
print("prediction     :", report.prediction)
print("expected loss  :", round(report.expected_loss, 12))
print("labelwise score:", report.scores)

###############################################################################
# The brute-force oracle searches all 3^4 partial predictions and agrees.

pred, value = brute_minimize_hamming(p, f)
print("oracle         :", pred, round(value, 12))

###############################################################################
# Raising the cost makes abstention less attractive. At c = 0.5 no label
# is worth skipping and we recover the usual thresholded prediction.

for c in (0.05, 0.15, 0.25, 0.35, 0.5):
    r = minimize_hamming_const(p, c)
    print(f"c={c:<5} {r.prediction}  abstained={r.prediction.n_abstained}")

###############################################################################
# The concave PAR penalty charges less for each extra abstention, so it
# tends to skip labels in bulk.

for c in (0.2, 0.5, 1.0):
    r = minimize_hamming(p, Penalty.par(c, p.size))
    print(f"PAR c={c:<4} {r.prediction}  loss={r.expected_loss:.4f}")
