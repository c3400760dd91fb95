"""Finite Wald decision problems.

A problem fixes finitely many states, outcomes and actions, a likelihood
matrix ``P[state, outcome]`` and a loss table ``L[state, action]`` (the
quantity of interest is already composed into the loss). Randomized rules
are finite mixtures of pure outcome-to-action maps; over finite spaces this
loses nothing, since every attainable risk profile is a convex combination
of pure-rule profiles.

Priors and risk profiles are plain 1-D float arrays of length ``m``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError

PROB_TOL = 1e-9
DEFAULT_CAP = 100_000


def as_prior(weights, m: int | None = None, name: str = "prior") -> np.ndarray:
    """Validate and return a probability vector as a float array."""
    p = np.asarray(weights, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError(f"{name} must be a non-empty vector")
    if m is not None and p.size != m:
        raise DimensionError("states", m, p.size, name)
    if not np.all(np.isfinite(p)):
        raise ValidationError(f"{name} has non-finite entries")
    if np.any(p < -PROB_TOL) or np.any(p > 1 + PROB_TOL):
        raise ValidationError(f"{name} has entries outside [0, 1]: {p.tolist()}")
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise ValidationError(f"{name} sums to {p.sum():.12g}, not 1")
    return p


def as_profile(values, m: int | None = None, name: str = "risk profile") -> np.ndarray:
    s = np.asarray(values, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValidationError(f"{name} must be a non-empty vector")
    if m is not None and s.size != m:
        raise DimensionError("states", m, s.size, name)
    if not np.all(np.isfinite(s)):
        raise ValidationError(f"{name} has non-finite entries")
    return s


@dataclass(frozen=True, eq=False)
class DecisionProblem:
    """States, outcomes, actions, likelihood ``P[θ, x]`` and loss ``L[θ, a]``."""

    states: tuple
    outcomes: tuple
    actions: tuple
    likelihood: np.ndarray
    loss: np.ndarray

    def __post_init__(self):
        for attr in ("states", "outcomes", "actions"):
            labels = tuple(getattr(self, attr))
            if not labels:
                raise ValidationError(f"{attr} must be non-empty")
            if len(set(labels)) != len(labels):
                raise ValidationError(f"duplicate labels in {attr}")
            object.__setattr__(self, attr, labels)
        m, n, k = self.m, self.n, self.k

        P = np.array(self.likelihood, dtype=float)
        if P.ndim != 2:
            raise ValidationError("likelihood must be a matrix")
        if P.shape[0] != m:
            raise DimensionError("states", m, P.shape[0], "likelihood rows")
        if P.shape[1] != n:
            raise DimensionError("outcomes", n, P.shape[1], "likelihood columns")
        if not np.all(np.isfinite(P)) or np.any(P < 0) or np.any(P > 1):
            raise ValidationError("likelihood entries must lie in [0, 1]")
        bad = np.flatnonzero(np.abs(P.sum(axis=1) - 1.0) > PROB_TOL)
        if bad.size:
            raise ValidationError(f"likelihood row {int(bad[0])} does not sum to 1")

        L = np.array(self.loss, dtype=float)
        if L.ndim != 2:
            raise ValidationError("loss must be a matrix")
        if L.shape[0] != m:
            raise DimensionError("states", m, L.shape[0], "loss rows")
        if L.shape[1] != k:
            raise DimensionError("actions", k, L.shape[1], "loss columns")
        if not np.all(np.isfinite(L)) or np.any(L < 0):
            raise ValidationError("loss entries must be finite and non-negative")

        P.setflags(write=False)
        L.setflags(write=False)
        object.__setattr__(self, "likelihood", P)
        object.__setattr__(self, "loss", L)

    @property
    def m(self) -> int:
        return len(self.states)

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @property
    def k(self) -> int:
        return len(self.actions)

    @classmethod
    def from_arrays(cls, likelihood, loss) -> "DecisionProblem":
        """Build a problem with default labels ``t0.., x0.., a0..``."""
        P = np.asarray(likelihood, dtype=float)
        L = np.asarray(loss, dtype=float)
        if P.ndim != 2 or L.ndim != 2:
            raise ValidationError("likelihood and loss must be matrices")
        return cls(
            states=tuple(f"t{i}" for i in range(P.shape[0])),
            outcomes=tuple(f"x{i}" for i in range(P.shape[1])),
            actions=tuple(f"a{i}" for i in range(L.shape[1])),
            likelihood=P,
            loss=L,
        )

    @classmethod
    def from_dict(cls, data: dict) -> "DecisionProblem":
        try:
            return cls(
                states=data["states"],
                outcomes=data["outcomes"],
                actions=data["actions"],
                likelihood=data["likelihood"],
                loss=data["loss"],
            )
        except KeyError as exc:
            raise ValidationError(f"problem is missing key {exc.args[0]!r}") from None

    def to_dict(self) -> dict:
        return {
            "states": list(self.states),
            "outcomes": list(self.outcomes),
            "actions": list(self.actions),
            "likelihood": self.likelihood.tolist(),
            "loss": self.loss.tolist(),
        }

    @classmethod
    def random(cls, rng: np.random.Generator, m: int, n: int, k: int) -> "DecisionProblem":
        """Draw a problem with Dirichlet likelihood rows and uniform losses."""
        P = rng.dirichlet(np.ones(n), size=m)
        P /= P.sum(axis=1, keepdims=True)
        L = rng.uniform(0.0, 1.0, size=(m, k))
        return cls.from_arrays(P, L)


@dataclass(frozen=True)
class PureRule:
    """A non-randomized rule: one action index per outcome."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))

    def __len__(self):
        return len(self.assignment)

    def check(self, problem: DecisionProblem) -> None:
        if len(self.assignment) != problem.n:
            raise DimensionError("outcomes", problem.n, len(self.assignment), "pure rule")
        for a in self.assignment:
            if not 0 <= a < problem.k:
                raise DimensionError("actions", problem.k, a, "pure rule action index")


@dataclass(frozen=True)
class RandomizedRule:
    """A finite mixture ``((PureRule, weight), ...)`` with positive weights."""

    support: tuple[tuple[PureRule, float], ...]

    def __post_init__(self):
        support = tuple((r if isinstance(r, PureRule) else PureRule(r), float(w))
                        for r, w in self.support)
        if not support:
            raise ValidationError("randomized rule needs a non-empty support")
        rules = [r for r, _ in support]
        if len(set(rules)) != len(rules):
            raise ValidationError("randomized rule support has duplicate pure rules")
        weights = np.array([w for _, w in support])
        if np.any(weights <= 0):
            raise ValidationError("support weights must be positive")
        if abs(weights.sum() - 1.0) > PROB_TOL:
            raise ValidationError(f"support weights sum to {weights.sum():.12g}, not 1")
        object.__setattr__(self, "support", support)

    @classmethod
    def pure(cls, rule) -> "RandomizedRule":
        return cls(((rule if isinstance(rule, PureRule) else PureRule(rule), 1.0),))

    def check(self, problem: DecisionProblem) -> None:
        for r, _ in self.support:
            r.check(problem)


def _as_randomized(rule) -> RandomizedRule:
    if isinstance(rule, RandomizedRule):
        return rule
    return RandomizedRule.pure(rule)


def risk_profile(problem: DecisionProblem, rule) -> np.ndarray:
    """Risk vector ``R(θ, d)`` of a pure or randomized rule."""
    rule = _as_randomized(rule)
    rule.check(problem)
    P, L = problem.likelihood, problem.loss
    out = np.zeros(problem.m)
    for pure, w in rule.support:
        out += w * np.einsum("tx,tx->t", P, L[:, list(pure.assignment)])
    return out


def bayes_risk(prior, profile) -> float:
    """Prior-weighted risk ``<π, s>``."""
    prior = np.asarray(prior, dtype=float)
    profile = np.asarray(profile, dtype=float)
    if prior.shape != profile.shape or prior.ndim != 1:
        raise DimensionError("states", prior.size, profile.size, "bayes_risk")
    return float(prior @ profile)


def bayes_rule(problem: DecisionProblem, prior) -> tuple[PureRule, float]:
    """Bayes rule for ``prior`` and its Bayes risk.

    The Bayes risk separates over outcomes, so each outcome independently
    takes the action with the smallest prior-weighted expected loss. Ties go
    to the lowest action index.
    """
    prior = as_prior(prior, problem.m)
    # cost[x, a] = sum_θ π(θ) P(x|θ) L(θ, a)
    cost = np.einsum("t,tx,ta->xa", prior, problem.likelihood, problem.loss)
    actions = np.argmin(cost, axis=1)
    value = float(cost[np.arange(problem.n), actions].sum())
    return PureRule(tuple(actions.tolist())), value


def mix(rules: Sequence, weights: Sequence[float]) -> RandomizedRule:
    """Randomize over ``rules`` with probabilities ``weights``.

    Supports are merged and duplicate pure rules have their weights added,
    so the risk profile of the result is the same convex combination of the
    input profiles.
    """
    if len(rules) != len(weights) or not rules:
        raise ValidationError("mix needs equally many (>= 1) rules and weights")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValidationError("mixing weights must be non-negative")
    if abs(w.sum() - 1.0) > PROB_TOL:
        raise ValidationError(f"mixing weights sum to {w.sum():.12g}, not 1")
    merged: dict[PureRule, float] = {}
    for rule, wi in zip(rules, w):
        if wi == 0:
            continue
        for pure, wp in _as_randomized(rule).support:
            merged[pure] = merged.get(pure, 0.0) + wi * wp
    return RandomizedRule(tuple(merged.items()))


def pure_rules(problem: DecisionProblem) -> Iterable[PureRule]:
    """All ``k**n`` pure rules in lexicographic order of their assignments."""
    for a in itertools.product(range(problem.k), repeat=problem.n):
        yield PureRule(a)


def risk_matrix(problem: DecisionProblem, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Profiles of every pure rule, one row each, lexicographic rule order."""
    count = problem.k ** problem.n
    if count > cap:
        raise ValidationError(f"risk set has k**n = {count} pure rules, above cap {cap}")
    rules = np.array(list(itertools.product(range(problem.k), repeat=problem.n)),
                     dtype=int).reshape(count, problem.n)
    # contrib[t, x, a] = P(x|t) L(t, a)
    contrib = problem.likelihood[:, :, None] * problem.loss[:, None, :]
    out = np.zeros((count, problem.m))
    for x in range(problem.n):
        out += contrib[:, x, rules[:, x]].T
    return out


def enumerate_risk_set(problem: DecisionProblem, cap: int = DEFAULT_CAP):
    """List of ``(PureRule, profile)`` for every pure rule.

    The risk set is the convex hull of the returned profiles.
    """
    S = risk_matrix(problem, cap)
    return [(r, S[i]) for i, r in enumerate(pure_rules(problem))]
