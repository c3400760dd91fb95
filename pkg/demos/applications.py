"""Three specialisations of weighted pooling.

Kernel smoothing weights samples by similarity to the query point, timed
pooling discounts older experts by q per unit of time, and voting averages
ballots.
"""

import numpy as np

from paretoagg import Expert
from paretoagg.applications import (
    KernelSpec,
    TimedRuleTable,
    aggregate_timed,
    nw_smooth,
    recover_discount,
    time_shift,
    vote,
)

rng = np.random.default_rng(0)
x = np.sort(rng.uniform(0, 2 * np.pi, 60))
y = np.sin(x) + 0.2 * rng.normal(size=x.size)
samples = [((xi,), yi) for xi, yi in zip(x, y)]
for shape in ("gaussian", "epanechnikov", "tricube", "boxcar"):
    kern = KernelSpec(shape, 0.6)
    fit = [nw_smooth(samples, [g], kern) for g in (np.pi / 2, np.pi, 3 * np.pi / 2)]
    print(f"{shape:>13}: {np.round(fit, 3)}   (sin: [1, 0, -1])")

experts = [Expert("a", [0.9, 0.1], timestamp=0), Expert("b", [0.2, 0.8], timestamp=3)]
w = {"a": 1.0, "b": 4.0}
now = aggregate_timed(experts, 0.5, w)
later = aggregate_timed(time_shift(experts, 10), 0.5, w)
print("\ntimed pool:", np.round(now, 6), "after a shift of 10:", np.round(later, 6))

pool = [Expert(i, p, timestamp=t) for i, p in (("a", [0.9, 0.1]), ("b", [0.2, 0.8])) for t in (0, 1, 2)]
table = TimedRuleTable.from_rule(pool, 0.8, w, max_size=2)
q, weights, report = recover_discount(table)
print(f"recovered q = {q:.12f}, weights {weights}, {report.pairs_used} pairs used")

print("\nvote:", vote([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [2, 1, 1]))
