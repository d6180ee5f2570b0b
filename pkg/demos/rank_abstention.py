"""
Partial rankings
================

Under the rank loss we may return an ordering of only some labels. The
best ordered subset always consists of a block of the most probable
labels followed by a block of the least probable ones, which a greedy
scan finds in O(m log m).
"""

import numpy as np

from mlc_abstain import Penalty, minimize_rank, uncertainty

p = np.array([0.9, 0.8, 0.7, 0.3])
f = Penalty.sep(0.03, p.size)
report = minimize_rank(p, f)

###############################################################################
# The curve lists the best selection of each size d together with its
# expected rank loss and total objective (loss plus penalty).

print(" d  selection      E[loss]  objective")
for pt in report.curve:
    print(f"{pt.d:>2}  {str(pt.selection.positions()):<13} {pt.rank_loss:8.4f}  {pt.objective:9.4f}")

print("ranking:", report.ranking, " expected loss:", round(report.expected_loss, 12))

###############################################################################
# Label 4 is more uncertain than label 2, yet label 4 is ranked and
# label 2 is not. Unlike Hamming loss, the rank loss does not simply
# drop the most uncertain labels.

print("uncertainty:", uncertainty(p))
print("abstained  :", [i + 1 for i in report.abstained])

###############################################################################
# A larger instance runs in a few milliseconds.

rng = np.random.default_rng(0)
big = rng.random(5000)
r = minimize_rank(big, Penalty.par(0.5, big.size))
print(f"m=5000: ranked {len(r.ranking)} labels, expected loss {r.expected_loss:.2f}")
