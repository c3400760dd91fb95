"""Finite Wald decision theory and consistent aggregation of Pareto optimal models."""

__version__ = "0.1.0"

from .admissibility import (
    CompleteClassCertificate,
    Dominance,
    admissible_profiles,
    dominance,
    is_bayes_for,
    supporting_prior,
)
from .aggregation import (
    AggregationRule,
    ConsistencyReport,
    Expert,
    Preference,
    RuleTable,
    Verdict,
    aggregate,
    aggregate_ordered,
    check_consistency,
    check_coordinatewise_pareto,
    prefers,
    recover_weights,
    select_model,
)
from .decision import (
    DecisionProblem,
    PureRule,
    RandomizedRule,
    bayes_risk,
    bayes_rule,
    enumerate_risk_set,
    mix,
    risk_profile,
)
from .errors import (
    DimensionError,
    InfeasibleError,
    ParetoAggError,
    UnidentifiableError,
    ValidationError,
)

__all__ = [
    "AggregationRule",
    "CompleteClassCertificate",
    "ConsistencyReport",
    "DecisionProblem",
    "DimensionError",
    "Dominance",
    "Expert",
    "InfeasibleError",
    "ParetoAggError",
    "Preference",
    "PureRule",
    "RandomizedRule",
    "RuleTable",
    "UnidentifiableError",
    "ValidationError",
    "Verdict",
    "admissible_profiles",
    "aggregate",
    "aggregate_ordered",
    "bayes_risk",
    "bayes_rule",
    "check_consistency",
    "check_coordinatewise_pareto",
    "dominance",
    "enumerate_risk_set",
    "is_bayes_for",
    "mix",
    "prefers",
    "recover_weights",
    "risk_profile",
    "select_model",
    "supporting_prior",
]
