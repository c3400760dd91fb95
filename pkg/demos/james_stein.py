"""The sample mean is not admissible in five dimensions.

Monte Carlo squared-error risk of x and of the James-Stein estimate from one
N(θ, I) observation. Near the origin shrinkage wins by a wide margin; far
away the two risks meet.
"""

import numpy as np

from paretoagg.estimators import dominance_report, report_csv

d = 5
grid = [np.zeros(d), np.full(d, 0.5), np.full(d, 2.0), np.full(d, 20.0)]
labels = ["origin", "norm~1.1", "norm~4.5", "norm~45"]
rows = dominance_report(d, grid, 200_000, seed=7, labels=labels)
print(report_csv(rows))
print("analytic: mean risk", d, "everywhere; James-Stein risk at the origin", 2)
