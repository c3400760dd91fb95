"""Admissible rules of a small testing problem and the priors that support them.

Two states, three outcomes, two actions. Every admissible pure rule turns out
to be Bayes for some prior, and the LP hands that prior back.
"""

import numpy as np

from paretoagg import DecisionProblem, admissible_profiles, supporting_prior
from paretoagg.decision import enumerate_risk_set

likelihood = [[0.6, 0.3, 0.1],
              [0.1, 0.3, 0.6]]
loss = [[0.0, 1.0],   # state 0: action 0 is right
        [2.0, 0.0]]   # state 1: action 1 is right, missing it costs twice as much
problem = DecisionProblem.from_arrays(likelihood, loss)

risk_set = enumerate_risk_set(problem)
S = np.array([s for _, s in risk_set])
print(f"{len(risk_set)} pure rules")
for rule, s in risk_set:
    print(f"  {rule.assignment}  risk {np.round(s, 3)}")

adm = admissible_profiles(S)
print("\nadmissible:", [risk_set[i][0].assignment for i in adm])

for i in adm:
    cert = supporting_prior(S, i)
    print(f"  rule {risk_set[i][0].assignment}: prior {np.round(cert.supporting_prior, 4)}, "
          f"Bayes risk {cert.bayes_value:.4f}, gap {cert.gap:.1e}")
