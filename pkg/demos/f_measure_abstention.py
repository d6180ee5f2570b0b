"""
Expected F-measure with abstention
==================================

For the F-measure the optimal partial prediction sets the most probable
labels to 1, the least probable to 0, and abstains in between. Exact
expectations under label independence come from a Poisson-binomial
table of prefix counts.
"""

import numpy as np

from mlc_abstain import Penalty, expected_f_full, maximize_f_abstain, maximize_f_full
from mlc_abstain.fmeasure import build_prefix_counts

p = np.array([0.9, 0.3])

###############################################################################
# Row k of the prefix table is the distribution of the number of
# relevant labels among the top k.

print(build_prefix_counts(p))

###############################################################################
# Expected F of predicting the top k labels and nothing else.

for k in range(p.size + 1):
    print(f"k={k}: E[F] = {expected_f_full(p, k):.4f}")
print("best full prediction:", maximize_f_full(p).prediction)

###############################################################################
# With abstention the value of a prediction is the F-measure on the
# decided labels minus the penalty. A very cheap penalty makes full
# abstention the best choice; an expensive one brings back the full
# prediction.

for c in (0.05, 0.2, 2.0):
    r = maximize_f_abstain(p, Penalty.sep(c, p.size))
    print(f"c={c:<4} {r.prediction}  value={r.expected_value:.4f}")

###############################################################################
# The grid of candidate values for a slightly larger instance. Row k,
# column l holds the value of setting the top k to 1 and positions l..m
# to 0 (1-based), NaN where the pair is not a candidate.

q = np.array([0.95, 0.7, 0.55, 0.4, 0.1])
r = maximize_f_abstain(q, Penalty.sep(0.05, q.size), keep_grid=True)
np.set_printoptions(precision=3, suppress=True)
print(r.grid)
print("chosen:", r.prediction, f"(k={r.k_star}, l={r.l_star})")
