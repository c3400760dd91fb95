"""Pooling experts, checking a table of pooled priors, and recovering weights.

Each expert holds the prior its preferred model is Bayes against. A
consistent pooling rule is a weighted average, so a table generated that way
passes the checker, a nudged entry fails it, and pair entries pin the weights
down up to a common scale.
"""

import numpy as np

from paretoagg import (
    AggregationRule,
    DecisionProblem,
    Expert,
    RuleTable,
    check_consistency,
    recover_weights,
    select_model,
)

experts = [
    Expert("ana", [0.7, 0.2, 0.1]),
    Expert("bo", [0.2, 0.6, 0.2]),
    Expert("cy", [0.1, 0.2, 0.7]),
]
rule = AggregationRule({"ana": 2.0, "bo": 1.0, "cy": 0.5})

table = RuleTable.from_rule(experts, rule)
report = check_consistency(table)
print("generated table:", report.verdict.value, f"({report.checked_pairs} disjoint pairs)")

entries = dict(table.entries)
entries[("ana", "bo", "cy")] = entries[("ana", "bo", "cy")] + np.array([0.002, -0.001, -0.001])
report = check_consistency(RuleTable(table.singletons, entries))
print("nudged table:   ", report.verdict.value)
for v in report.violations[:3]:
    print("   ", v.kind, v.a, "|", v.b, "-", v.detail)

pairs = RuleTable(table.singletons, {k: v for k, v in table.entries.items() if len(k) == 2})
w, rep = recover_weights(pairs)
print("\nrecovered weights:", {k: round(v, 6) for k, v in w.items()})
print("max reconstruction residual:", rep.max_reconstruction_residual)

# three-way classification with a 0-1 loss and a noisy signal
problem = DecisionProblem.from_arrays(0.7 * np.eye(3) + 0.1, 1 - np.eye(3))
prior, pure, value = select_model(problem, experts, rule)
print("\npooled prior:", np.round(prior, 4))
print("chosen action per outcome:", pure.assignment, f"Bayes risk {value:.4f}")
