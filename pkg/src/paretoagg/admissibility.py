"""Pareto dominance, admissible profiles and supporting-prior certificates.

Admissibility is judged against the whole risk set, i.e. the convex hull of
the given profiles: a profile can be beaten by a randomization of others even
when no single profile beats it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _simplex
from .decision import DecisionProblem, bayes_risk, bayes_rule, risk_profile
from .errors import DimensionError, InfeasibleError, LPError, ValidationError

STRICT_TOL = 1e-12
ADMISSIBLE_TOL = 1e-9


class Dominance(str, enum.Enum):
    """How risk profile ``r1`` compares with ``r2`` (lower risk is better)."""

    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"
    AS_GOOD_AS = "as_good_as"
    AS_GOOD_AS_REVERSED = "as_good_as_reversed"

    def mirror(self) -> "Dominance":
        return _MIRROR[self]


_MIRROR = {
    Dominance.DOMINATES: Dominance.DOMINATED_BY,
    Dominance.DOMINATED_BY: Dominance.DOMINATES,
    Dominance.EQUAL: Dominance.EQUAL,
    Dominance.INCOMPARABLE: Dominance.INCOMPARABLE,
    Dominance.AS_GOOD_AS: Dominance.AS_GOOD_AS_REVERSED,
    Dominance.AS_GOOD_AS_REVERSED: Dominance.AS_GOOD_AS,
}


def dominance(r1, r2, tol: float = STRICT_TOL, strict: float = STRICT_TOL) -> Dominance:
    """Classify the Pareto relation between two risk profiles.

    ``tol`` is the equality slack and ``strict`` the margin a coordinate must
    clear to count as a strict improvement. With equal thresholds (the
    default) a weakly-better-but-not-dominating pair is reported as equal;
    ``AS_GOOD_AS`` only appears when ``strict > tol``.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    if r1.shape != r2.shape or r1.ndim != 1:
        raise DimensionError("states", r1.size, r2.size, "dominance")
    diff = r1 - r2
    if np.all(np.abs(diff) <= tol):
        return Dominance.EQUAL
    if np.all(diff <= tol):
        return Dominance.DOMINATES if np.any(diff < -strict) else Dominance.AS_GOOD_AS
    if np.all(diff >= -tol):
        return Dominance.DOMINATED_BY if np.any(diff > strict) else Dominance.AS_GOOD_AS_REVERSED
    return Dominance.INCOMPARABLE


def _profiles_matrix(profiles) -> np.ndarray:
    S = np.asarray(profiles, dtype=float)
    if S.ndim != 2 or S.shape[0] == 0 or S.shape[1] == 0:
        raise ValidationError("profiles must be a non-empty list of equal-length vectors")
    if not np.all(np.isfinite(S)):
        raise ValidationError("profiles have non-finite entries")
    return S


def _hull_improvement(S: np.ndarray, i: int):
    """Best hull point coordinate-wise below ``S[i]``: min total risk LP."""
    N, m = S.shape
    res = _simplex.linprog(
        S.sum(axis=1),
        A_ub=S.T, b_ub=S[i],
        A_eq=np.ones((1, N)), b_eq=[1.0],
    )
    if not res.success:
        raise LPError(f"admissibility LP ended with status {res.status}", index=i)
    return res


def admissible_profiles(profiles, tol: float = ADMISSIBLE_TOL) -> list[int]:
    """Indices of profiles not Pareto dominated by any point of their hull.

    For each candidate ``s_i`` an LP minimises the total risk of a mixture
    ``sum_j λ_j s_j`` subject to staying coordinate-wise below ``s_i``. The
    candidate is admissible iff that minimum is not below ``sum(s_i) - tol``.
    """
    S = _profiles_matrix(profiles)
    N = S.shape[0]
    totals = S.sum(axis=1)
    # cheap pass: dominated by a single other profile
    le = np.all(S[None, :, :] <= S[:, None, :] + STRICT_TOL, axis=2)
    lt = np.any(S[None, :, :] < S[:, None, :] - STRICT_TOL, axis=2)
    beaten = np.any(le & lt, axis=1)
    out = []
    for i in range(N):
        if beaten[i]:
            continue
        res = _hull_improvement(S, i)
        if res.fun >= totals[i] - tol:
            out.append(i)
    return out


def dominance_witness(profiles, index: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Mixture weights and hull point dominating ``profiles[index]``, if any."""
    S = _profiles_matrix(profiles)
    res = _hull_improvement(S, index)
    if res.fun >= S[index].sum() - ADMISSIBLE_TOL:
        return None
    lam = np.clip(res.x, 0.0, None)
    lam /= lam.sum()
    return lam, lam @ S


@dataclass(frozen=True)
class CompleteClassCertificate:
    """A prior under which ``profile_index`` attains the minimum Bayes risk.

    ``gap`` is ``max_j (bayes_value - <π, s_j>)`` over all profiles; it is
    zero for an exact certificate and must not exceed 1e-9.
    """

    profile_index: int
    supporting_prior: np.ndarray
    bayes_value: float
    gap: float

    def to_dict(self) -> dict:
        return {
            "profile_index": self.profile_index,
            "supporting_prior": self.supporting_prior.tolist(),
            "bayes_value": self.bayes_value,
            "gap": self.gap,
        }


def supporting_prior(profiles, index: int, tol: float = ADMISSIBLE_TOL) -> CompleteClassCertificate:
    """Separating-hyperplane certificate for an admissible profile.

    Finds ``π`` in the simplex with ``<π, s_index> <= <π, s_j>`` for all ``j``.
    The answer is the first feasible vertex reached by Bland's rule, which is
    deterministic; other supporting priors usually exist.

    Raises
    ------
    InfeasibleError
        If the profile is dominated (``witness`` holds the dominating mixture
        and hull point) or no supporting prior exists.
    """
    S = _profiles_matrix(profiles)
    N, m = S.shape
    if not 0 <= index < N:
        raise ValidationError(f"profile index {index} out of range [0, {N})")
    # weakly supported but dominated profiles (e.g. tied on the support of π) are rejected
    witness = dominance_witness(S, index)
    if witness is not None:
        raise InfeasibleError(
            f"profile {index} is not admissible: dominated by hull point "
            f"{np.round(witness[1], 12).tolist()}",
            witness=witness,
        )
    target = S[index]
    diffs = target[None, :] - S
    rows = ~np.all(np.abs(diffs) <= STRICT_TOL, axis=1)
    res = _simplex.linprog(
        np.zeros(m),
        A_ub=diffs[rows], b_ub=np.zeros(int(rows.sum())),
        A_eq=np.ones((1, m)), b_eq=[1.0],
        feas_tol=tol,
    )
    if res.status == "infeasible":
        raise InfeasibleError(f"profile {index} admits no supporting prior within tolerance {tol}")
    if not res.success:
        raise LPError(f"supporting-prior LP ended with status {res.status}", index=index)
    pi = np.clip(res.x, 0.0, None)
    pi /= pi.sum()
    values = S @ pi
    value = float(values[index])
    return CompleteClassCertificate(index, pi, value, float(np.max(value - values)))


def is_bayes_for(problem: DecisionProblem, rule, prior, tol: float = ADMISSIBLE_TOL) -> bool:
    """Whether ``rule`` attains the minimum Bayes risk under ``prior``."""
    _, best = bayes_rule(problem, prior)
    return bayes_risk(prior, risk_profile(problem, rule)) <= best + tol
