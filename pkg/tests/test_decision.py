import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paretoagg import DecisionProblem, PureRule, RandomizedRule, bayes_risk, bayes_rule, mix, risk_profile
from paretoagg.decision import enumerate_risk_set, pure_rules, risk_matrix
from paretoagg.errors import DimensionError, ValidationError

from conftest import priors, problems


def brute_profile(problem, rule):
    # sum over (theta, x, action) terms one at a time
    out = []
    for t in range(problem.m):
        total = 0.0
        for pr, w in rule.support:
            for x in range(problem.n):
                total += w * problem.likelihood[t, x] * problem.loss[t, pr.assignment[x]]
        out.append(total)
    return np.array(out)


def test_risk_examples(diag_problem):
    one = DecisionProblem.from_arrays([[1]], [[0]])
    np.testing.assert_array_equal(risk_profile(one, PureRule([0])), [0])
    np.testing.assert_array_equal(risk_profile(diag_problem, PureRule([0, 1])), [0, 0])
    rule = RandomizedRule.pure(PureRule([1, 1]))
    np.testing.assert_array_equal(risk_profile(diag_problem, rule), [1, 0])
    np.testing.assert_array_equal(brute_profile(diag_problem, rule), [1, 0])


def test_dimension_errors():
    with pytest.raises(DimensionError) as exc:
        DecisionProblem.from_arrays([[1, 0], [0, 1]], [[0, 1]])
    assert exc.value.axis == "states"
    with pytest.raises(ValidationError):
        DecisionProblem.from_arrays([[0.5, 0.4]], [[0]])
    with pytest.raises(ValidationError):
        risk_profile(DecisionProblem.from_arrays([[1]], [[0]]), PureRule([3]))


def test_bayes_risk_examples():
    assert bayes_risk([1], [0.7]) == pytest.approx(0.7)
    assert bayes_risk([0.5, 0.5], [1, 0]) == pytest.approx(0.5)


def test_bayes_risk_linear_in_prior(rng):
    p1, p2 = rng.dirichlet(np.ones(3), size=2)
    s = rng.uniform(size=3)
    a = 0.3
    lhs = bayes_risk(a * p1 + (1 - a) * p2, s)
    assert abs(lhs - (a * bayes_risk(p1, s) + (1 - a) * bayes_risk(p2, s))) <= 1e-12


def test_bayes_rule_examples(diag_problem, blind_problem):
    rule, value = bayes_rule(diag_problem, [0.5, 0.5])
    assert rule.assignment == (0, 1) and value == 0
    rule, value = bayes_rule(blind_problem, [0.9, 0.1])
    assert rule.assignment == (0,) and value == pytest.approx(0.1)


@given(problems())
def test_bayes_rule_degenerate_prior(problem):
    prior = np.zeros(problem.m)
    prior[0] = 1
    rule, _ = bayes_rule(problem, prior)
    best = problem.loss[0].min()
    # outcomes with zero likelihood under θ0 are free; the rest must be optimal
    for x, a in enumerate(rule.assignment):
        if problem.likelihood[0, x] > 0:
            assert problem.loss[0, a] <= best + 1e-12


def test_mix_examples(blind_problem):
    d1, d2 = PureRule([1, 1]), PureRule([0, 0])
    assert mix([d1], [1]).support == ((d1, 1.0),)
    half = mix([PureRule([0]), PureRule([1])], [0.5, 0.5])
    np.testing.assert_allclose(risk_profile(blind_problem, half), [0.5, 0.5])
    merged = mix([d1, d1], [0.3, 0.7])
    assert len(merged.support) == 1 and merged.support[0][1] == pytest.approx(1.0)
    assert merged.support[0][0] == d1
    with pytest.raises(ValidationError):
        mix([d1, d2], [0.5, 0.6])


def test_enumerate_examples(diag_problem):
    one = DecisionProblem.from_arrays([[0.5, 0.5]], [[1]])
    assert len(enumerate_risk_set(one)) == 1
    S = risk_matrix(diag_problem)
    np.testing.assert_array_equal(S, [[0, 1], [0, 0], [1, 1], [1, 0]])
    with pytest.raises(ValidationError, match="4"):
        risk_matrix(diag_problem, cap=3)


@given(problems(), st.data())
def test_profile_affine_in_weights(problem, data):
    rules = list(pure_rules(problem))
    idx = data.draw(st.lists(st.integers(0, len(rules) - 1), min_size=1, max_size=4, unique=True))
    w = np.array(data.draw(st.lists(st.floats(0.05, 1), min_size=len(idx), max_size=len(idx))))
    w /= w.sum()
    chosen = [rules[i] for i in idx]
    lhs = risk_profile(problem, mix(chosen, w))
    rhs = sum(wi * risk_profile(problem, r) for wi, r in zip(w, chosen))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    np.testing.assert_allclose(lhs, brute_profile(problem, mix(chosen, w)), atol=1e-12)


@given(problems(), st.data())
def test_bayes_rule_matches_enumeration(problem, data):
    prior = data.draw(priors(problem.m))
    rule, value = bayes_rule(problem, prior)
    S = risk_matrix(problem)
    vals = S @ prior
    # bayes value is the minimum over the risk set
    assert abs(value - vals.min()) <= 1e-12
    assert np.all(value <= vals + 1e-12)
    # same rule under lowest-action tie-break: the lexicographically first minimiser
    # among rules that are per-outcome optimal
    rules = list(itertools.product(range(problem.k), repeat=problem.n))
    post = prior[:, None] * problem.likelihood
    per_x = post.T @ problem.loss
    first = tuple(int(np.argmin(per_x[x])) for x in range(problem.n))
    assert rule.assignment == first
    assert abs(vals[rules.index(first)] - value) <= 1e-12


def test_roundtrip_dict(diag_problem):
    again = DecisionProblem.from_dict(diag_problem.to_dict())
    np.testing.assert_array_equal(again.loss, diag_problem.loss)
    assert again.states == diag_problem.states
