"""Consistent aggregation of expert priors.

Each expert carries the prior its Pareto optimal model is Bayes against. A
consistent ranking rule maps a finite set of experts to a single prior, and
(in the non-degenerate case) must be a weighted average of the members'
priors, optionally restricted to the top class of a weak order on experts.

This module provides the two representations, checkers that test a given
table of subset priors for consistency and coordinate-wise Pareto, recovery
of the weights from pair entries, and the full expert-set to Bayes-rule
pipeline.
"""

from __future__ import annotations

import enum
import itertools
import warnings
import zlib
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import _simplex
from .decision import PROB_TOL, DecisionProblem, PureRule, as_prior, as_profile, bayes_rule
from .errors import DimensionError, InfeasibleError, LPError, UnidentifiableError, ValidationError

INDIFFERENCE_TOL = 1e-12
SEGMENT_TOL = 1e-9
CYCLE_TOL = 1e-6
SAMPLES_PER_PAIR = 100


class DegeneracyWarning(UserWarning):
    """Singleton priors are collinear, so weights may not be unique."""


@dataclass(frozen=True, eq=False)
class Expert:
    """An expert: identifier, prior and optional characteristics.

    ``timestamp`` is the time before prediction (used by timed pooling) and
    ``multiplicity`` the number of identical copies (used by counted pooling).
    """

    id: str
    prior: np.ndarray
    characteristics: np.ndarray | None = None
    timestamp: float | None = None
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "prior", as_prior(self.prior, name=f"prior of {self.id!r}"))
        if self.characteristics is not None:
            object.__setattr__(self, "characteristics",
                               np.asarray(self.characteristics, dtype=float))
        if self.timestamp is not None:
            t = float(self.timestamp)
            if not np.isfinite(t) or t < 0:
                raise ValidationError(f"timestamp of {self.id!r} must be finite and >= 0")
            object.__setattr__(self, "timestamp", t)
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise ValidationError(f"multiplicity of {self.id!r} must be a positive integer")
        object.__setattr__(self, "multiplicity", int(self.multiplicity))


@dataclass(frozen=True)
class AggregationRule:
    """Positive weight per expert id, plus an optional integer rank per id.

    Higher rank means higher order; equal ranks form one equivalence class.
    An empty ``order`` puts every expert in a single class.
    """

    weights: Mapping[str, float]
    order: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        weights = {str(k): float(v) for k, v in self.weights.items()}
        bad = [k for k, v in weights.items() if not (np.isfinite(v) and v > 0)]
        if bad:
            raise ValidationError(f"weights must be positive; offending ids {sorted(bad)}")
        order = {}
        for k, v in self.order.items():
            if int(v) != v:
                raise ValidationError(f"rank of {k!r} must be an integer")
            order[str(k)] = int(v)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "order", order)

    def weight(self, expert_id: str) -> float:
        try:
            return self.weights[expert_id]
        except KeyError:
            raise ValidationError(f"no weight for expert {expert_id!r}") from None

    def rank(self, expert_id: str) -> int:
        if not self.order:
            return 0
        try:
            return self.order[expert_id]
        except KeyError:
            raise ValidationError(f"no rank for expert {expert_id!r}") from None


def _members(experts: Iterable[Expert]) -> list[Expert]:
    experts = list(experts)
    if not experts:
        raise ValidationError("cannot aggregate an empty set of experts")
    ids = [e.id for e in experts]
    if len(set(ids)) != len(ids):
        raise ValidationError("expert ids must be unique within a set")
    m = experts[0].prior.size
    for e in experts:
        if e.prior.size != m:
            raise DimensionError("states", m, e.prior.size, f"prior of {e.id!r}")
    return experts


def weighted_average(priors, weights) -> np.ndarray:
    """Normalized weighted average of prior rows."""
    G = np.asarray(priors, dtype=float)
    w = np.asarray(weights, dtype=float)
    lam = w / w.sum()
    return lam @ G


def aggregate(experts: Iterable[Expert], rule: AggregationRule) -> np.ndarray:
    """Weighted average of the members' priors with weights ``w(e) / Σ w``."""
    experts = _members(experts)
    return weighted_average([e.prior for e in experts], [rule.weight(e.id) for e in experts])


def top_class(experts: Iterable[Expert], rule: AggregationRule) -> list[Expert]:
    """Members attaining the highest rank."""
    experts = _members(experts)
    ranks = [rule.rank(e.id) for e in experts]
    top = max(ranks)
    return [e for e, r in zip(experts, ranks) if r == top]


def aggregate_ordered(experts: Iterable[Expert], rule: AggregationRule) -> np.ndarray:
    """Weighted average over the top equivalence class only.

    Lower-ranked members get zero weight whatever their ``w``.
    """
    return aggregate(top_class(experts, rule), rule)


class Preference(str, enum.Enum):
    S1_BETTER = "s1_better"
    S2_BETTER = "s2_better"
    INDIFFERENT = "indifferent"


def prefers(prior, s1, s2, tol: float = INDIFFERENCE_TOL) -> Preference:
    """Ranking of two risk profiles induced by ``prior``: lower Bayes risk wins."""
    prior = np.asarray(prior, dtype=float)
    s1 = as_profile(s1, prior.size, "s1")
    s2 = as_profile(s2, prior.size, "s2")
    r1, r2 = float(prior @ s1), float(prior @ s2)
    if r1 < r2 - tol:
        return Preference.S1_BETTER
    if r2 < r1 - tol:
        return Preference.S2_BETTER
    return Preference.INDIFFERENT


def canonical(subset: Iterable[str]) -> tuple[str, ...]:
    ids = tuple(sorted(str(s) for s in subset))
    if len(set(ids)) != len(ids):
        raise ValidationError(f"subset {list(ids)} repeats an expert")
    if not ids:
        raise ValidationError("subsets must be non-empty")
    return ids


@dataclass(frozen=True, eq=False)
class RuleTable:
    """Observed priors ``g(A)`` for finite expert subsets ``A``.

    ``entries`` maps canonical (sorted) id tuples to priors and always
    contains every singleton of the pool.
    """

    singletons: Mapping[str, np.ndarray]
    entries: Mapping[tuple[str, ...], np.ndarray]

    def __post_init__(self):
        if not self.singletons:
            raise ValidationError("rule table needs at least one singleton")
        singles = {}
        m = None
        for k, v in self.singletons.items():
            p = as_prior(v, m, name=f"singleton prior of {k!r}")
            m = p.size
            singles[str(k)] = p
        entries = {(k,): p for k, p in singles.items()}
        for key, v in self.entries.items():
            key = canonical(key)
            missing = [i for i in key if i not in singles]
            if missing:
                raise ValidationError(f"subset {list(key)} references unknown ids {missing}")
            p = as_prior(v, m, name=f"prior of subset {list(key)}")
            if len(key) == 1 and np.max(np.abs(p - singles[key[0]])) > PROB_TOL:
                raise ValidationError(f"singleton entry {key[0]!r} disagrees with its prior")
            entries.setdefault(key, p)
        object.__setattr__(self, "singletons", singles)
        object.__setattr__(self, "entries", entries)

    @property
    def ids(self) -> list[str]:
        return sorted(self.singletons)

    @property
    def m(self) -> int:
        return next(iter(self.singletons.values())).size

    def __getitem__(self, subset) -> np.ndarray:
        return self.entries[canonical(subset)]

    def __contains__(self, subset) -> bool:
        return canonical(subset) in self.entries

    def keys(self) -> list[tuple[str, ...]]:
        return sorted(self.entries, key=lambda k: (len(k), k))

    @classmethod
    def from_rule(cls, experts: Iterable[Expert], rule: AggregationRule,
                  subsets: Iterable[Iterable[str]] | None = None,
                  ordered: bool = False) -> "RuleTable":
        """Tabulate ``aggregate`` (or ``aggregate_ordered``) over ``subsets``.

        Defaults to every non-empty subset of the pool.
        """
        experts = _members(experts)
        by_id = {e.id: e for e in experts}
        if subsets is None:
            ids = sorted(by_id)
            subsets = [c for r in range(2, len(ids) + 1) for c in itertools.combinations(ids, r)]
        agg = aggregate_ordered if ordered else aggregate
        entries = {}
        for s in subsets:
            key = canonical(s)
            entries[key] = agg([by_id[i] for i in key], rule)
        return cls({e.id: e.prior for e in experts}, entries)

    @classmethod
    def from_dict(cls, data: dict) -> "RuleTable":
        try:
            singles = data["singletons"]
            raw = data.get("entries", [])
            entries = {}
            for item in raw:
                key = canonical(item["subset"])
                if key in entries:
                    raise ValidationError(f"duplicate entry for subset {list(key)}")
                entries[key] = item["prior"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed rule table: {exc}") from None
        return cls(singles, entries)

    def to_dict(self) -> dict:
        return {
            "singletons": {k: self.singletons[k].tolist() for k in self.ids},
            "entries": [{"subset": list(k), "prior": self.entries[k].tolist()}
                        for k in self.keys() if len(k) > 1],
        }


# -- geometry helpers -------------------------------------------------------

def segment_projection(c, a, b) -> tuple[float, float]:
    """Write ``c ≈ t·a + (1-t)·b`` by least squares on the line through a, b.

    Returns ``(t, residual)`` with the residual measured as the largest
    coordinate deviation from the line point. ``t`` is not clipped.
    """
    c, a, b = (np.asarray(v, dtype=float) for v in (c, a, b))
    u = a - b
    uu = float(u @ u)
    if uu == 0.0:
        return float("nan"), float(np.max(np.abs(c - a)))
    t = float((c - b) @ u) / uu
    return t, float(np.max(np.abs(c - (b + t * u))))


def segment_distance(c, a, b) -> tuple[float, float]:
    """Largest-coordinate distance from ``c`` to the closed segment [a, b].

    Returns ``(distance, t)`` where ``t`` is the clipped segment parameter.
    """
    c, a, b = (np.asarray(v, dtype=float) for v in (c, a, b))
    u = a - b
    uu = float(u @ u)
    t = 0.0 if uu == 0.0 else min(1.0, max(0.0, float((c - b) @ u) / uu))
    return float(np.max(np.abs(c - (b + t * u)))), t


def _cone_projection(c, a, b) -> np.ndarray:
    """Euclidean projection of ``c`` onto the cone generated by a and b."""
    best, best_d = np.zeros_like(c), float(c @ c)
    G = np.stack([a, b], axis=1)
    try:
        coef = np.linalg.solve(G.T @ G, G.T @ c)
    except np.linalg.LinAlgError:
        coef = None
    cands = []
    if coef is not None and np.all(coef >= 0):
        cands.append(G @ coef)
    for v in (a, b):
        vv = float(v @ v)
        if vv > 0:
            cands.append(max(0.0, float(c @ v) / vv) * v)
    for p in cands:
        d = float((c - p) @ (c - p))
        if d < best_d:
            best, best_d = p, d
    return best


def _pair_rng(key_a, key_b) -> np.random.Generator:
    tag = "|".join([",".join(key_a), ",".join(key_b)]).encode()
    return np.random.default_rng(zlib.crc32(tag))


def _split_profiles(d: np.ndarray):
    """Non-negative (s1, s2) in [0, 1]^m with ``s2 - s1`` proportional to d."""
    d = d / np.max(np.abs(d))
    return np.clip(-d, 0, None), np.clip(d, 0, None)


# -- consistency ------------------------------------------------------------

class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    WEAKLY_CONSISTENT_ONLY = "weakly_consistent_only"
    INCONSISTENT = "inconsistent"


_SEVERITY = {Verdict.CONSISTENT: 0, Verdict.WEAKLY_CONSISTENT_ONLY: 1, Verdict.INCONSISTENT: 2}


@dataclass(frozen=True)
class Violation:
    """A disjoint pair ``(a, b)`` whose union entry breaks consistency.

    ``kind`` is one of ``segment`` / ``endpoint`` (geometric test) or
    ``implication`` / ``strict_implication`` (ranking test, with the witnessing
    risk profiles in ``witness``).
    """

    a: tuple[str, ...]
    b: tuple[str, ...]
    kind: str
    detail: str
    witness: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def to_dict(self) -> dict:
        out = {"a": list(self.a), "b": list(self.b), "kind": self.kind, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = {"s1": list(self.witness[0]), "s2": list(self.witness[1])}
        return out


@dataclass(frozen=True)
class ConsistencyReport:
    verdict: Verdict
    violations: tuple[Violation, ...]
    checked_pairs: int
    segment_verdict: Verdict
    implication_verdict: Verdict

    @property
    def agree(self) -> bool:
        """Whether the geometric and ranking tests reached the same verdict."""
        return self.segment_verdict == self.implication_verdict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "segment_verdict": self.segment_verdict.value,
            "implication_verdict": self.implication_verdict.value,
            "checked_pairs": self.checked_pairs,
            "violations": [v.to_dict() for v in self.violations],
        }


def disjoint_pairs(table: RuleTable) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """All unordered disjoint ``(A, B)`` whose union is also tabulated."""
    keys = table.keys()
    sets = [frozenset(k) for k in keys]
    present = set(sets)
    out = []
    for i, j in itertools.combinations(range(len(keys)), 2):
        if sets[i].isdisjoint(sets[j]) and (sets[i] | sets[j]) in present:
            out.append((keys[i], keys[j]))
    return out


def _implication_check(a, b, c, key_a, key_b, strict, tol, samples):
    """Search for risk-profile pairs that break the agreement implication.

    Uniform samples from [0, 1]^m are complemented by directed pairs built
    from the dual geometry, so a violation is found whenever one exists
    (up to the indifference tolerance).
    """
    m = a.size
    rng = _pair_rng(key_a, key_b)
    S1 = rng.uniform(size=(samples, m))
    S2 = rng.uniform(size=(samples, m))
    extra = []
    p = _cone_projection(c, a, b)
    if np.max(np.abs(p - c)) > 1e-13:
        extra.append(_split_profiles(p - c))
    if strict:
        for u, v in ((a, b), (b, a)):
            vv = float(v @ v)
            d = u - (float(u @ v) / vv) * v
            if np.max(np.abs(d)) > 1e-15:
                extra.append(_split_profiles(d))
    if extra:
        S1 = np.vstack([S1, [e[0] for e in extra]])
        S2 = np.vstack([S2, [e[1] for e in extra]])
    D = S2 - S1  # s1 is weakly preferred under π iff π·D >= -tol
    da, db, dc = D @ a, D @ b, D @ c
    weak_bad = (da >= -tol) & (db >= -tol) & (dc < -tol)
    if np.any(weak_bad):
        i = int(np.flatnonzero(weak_bad)[0])
        return "implication", (S1[i], S2[i]), (da[i], db[i], dc[i])
    if strict:
        strict_bad = (((da > tol) & (db >= -tol)) | ((db > tol) & (da >= -tol))) & (dc <= tol)
        if np.any(strict_bad):
            i = int(np.flatnonzero(strict_bad)[0])
            return "strict_implication", (S1[i], S2[i]), (da[i], db[i], dc[i])
    return None


def check_consistency(table: RuleTable, mode: str = "strict", tol: float = SEGMENT_TOL,
                      samples: int = SAMPLES_PER_PAIR) -> ConsistencyReport:
    """Test a rule table for (weak) consistency over all disjoint pairs.

    Two independent routes are run on each pair ``(A, B)``:

    * geometric: ``g(A∪B)`` must lie on the segment ``[g(A), g(B)]`` within
      ``tol`` (strict mode: off its endpoints unless ``g(A) = g(B)``);
    * ranking: whenever both ``g(A)`` and ``g(B)`` weakly prefer ``s1`` to
      ``s2``, so must ``g(A∪B)`` (strict mode adds the strict clause).

    By duality both routes should agree; ``report.agree`` records whether
    they did.
    """
    if mode not in ("weak", "strict"):
        raise ValidationError(f"mode must be 'weak' or 'strict', not {mode!r}")
    strict = mode == "strict"
    pairs = disjoint_pairs(table)
    violations = []
    seg_sev = imp_sev = 0
    for ka, kb in pairs:
        a, b = table.entries[ka], table.entries[kb]
        c = table.entries[canonical(ka + kb)]
        dist, t = segment_distance(c, a, b)
        if dist > tol:
            seg_sev = 2
            violations.append(Violation(ka, kb, "segment",
                                        f"union prior is {dist:.3e} off the segment"))
        elif strict and np.max(np.abs(a - b)) > tol:
            end = min(np.max(np.abs(c - a)), np.max(np.abs(c - b)))
            if end <= tol:
                seg_sev = max(seg_sev, 1)
                violations.append(Violation(ka, kb, "endpoint",
                                            f"union prior sits on an endpoint (t={t:.3g})"))
        hit = _implication_check(a, b, c, ka, kb, strict, INDIFFERENCE_TOL, samples)
        if hit is not None:
            kind, (s1, s2), (ra, rb, rc) = hit
            imp_sev = max(imp_sev, 2 if kind == "implication" else 1)
            violations.append(Violation(
                ka, kb, kind,
                f"risk differences under g(A), g(B), g(A∪B): {ra:.3e}, {rb:.3e}, {rc:.3e}",
                (tuple(s1.tolist()), tuple(s2.tolist())),
            ))
    by_sev = {v: k for k, v in _SEVERITY.items()}
    seg_v, imp_v = by_sev[seg_sev], by_sev[imp_sev]
    violations.sort(key=lambda v: (len(v.a), v.a, len(v.b), v.b, v.kind))
    return ConsistencyReport(by_sev[max(seg_sev, imp_sev)], tuple(violations),
                             len(pairs), seg_v, imp_v)


@dataclass(frozen=True)
class HullWitness:
    """Separating hyperplane: ``direction·g(e) <= level < direction·g(A)``."""

    subset: tuple[str, ...]
    direction: np.ndarray
    level: float
    distance: float

    def to_dict(self) -> dict:
        return {"subset": list(self.subset), "direction": self.direction.tolist(),
                "level": self.level, "distance": self.distance}


def hull_membership(points, target, tol: float = SEGMENT_TOL):
    """L1 distance from ``target`` to the convex hull of ``points`` via LP.

    Returns ``(distance, weights, direction, level)``; for a point outside
    the hull, ``direction``/``level`` separate it from every ``points`` row.
    """
    G = np.asarray(points, dtype=float)
    c = np.asarray(target, dtype=float)
    n, m = G.shape
    A_eq = np.zeros((m + 1, n + 2 * m))
    A_eq[:m, :n] = G.T
    A_eq[:m, n:n + m] = np.eye(m)
    A_eq[:m, n + m:] = -np.eye(m)
    A_eq[m, :n] = 1.0
    cost = np.concatenate([np.zeros(n), np.ones(2 * m)])
    res = _simplex.linprog(cost, A_eq=A_eq, b_eq=np.concatenate([c, [1.0]]))
    if not res.success:
        raise LPError(f"hull-membership LP ended with status {res.status}")
    y, mu = res.duals_eq[:m], res.duals_eq[m]
    return res.fun, res.x[:n], y, -float(mu)


def check_coordinatewise_pareto(table: RuleTable, tol: float = SEGMENT_TOL):
    """Whether every entry lies in the convex hull of its members' priors.

    Returns ``(True, None)`` or ``(False, HullWitness)`` for the first failing
    subset in canonical order.
    """
    for key in table.keys():
        if len(key) == 1:
            continue
        G = np.stack([table.singletons[i] for i in key])
        dist, _, y, level = hull_membership(G, table.entries[key], tol)
        if dist > tol:
            return False, HullWitness(key, y, level, float(dist))
    return True, None


# -- weight recovery --------------------------------------------------------

def affine_dimension(points, tol: float = 1e-9) -> int:
    P = np.asarray(points, dtype=float)
    if P.shape[0] <= 1:
        return 0
    return int(np.linalg.matrix_rank(P[1:] - P[0], tol=tol))


def richness_warning(priors) -> bool:
    """Warn (and return True) if the priors span less than a plane."""
    if affine_dimension(priors) < 2:
        warnings.warn("singleton priors lie on one line; weights may not be unique",
                      DegeneracyWarning, stacklevel=3)
        return True
    return False


@dataclass(frozen=True)
class RecoveryReport:
    root: str
    lambdas: dict
    flagged_pairs: dict
    cycle_residuals: dict
    reconstruction_residuals: dict
    degenerate: bool

    @property
    def max_cycle_residual(self) -> float:
        return max(self.cycle_residuals.values(), default=0.0)

    @property
    def max_reconstruction_residual(self) -> float:
        return max(self.reconstruction_residuals.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return (not self.flagged_pairs and self.max_cycle_residual <= CYCLE_TOL
                and self.max_reconstruction_residual <= CYCLE_TOL)

    def to_dict(self) -> dict:
        join = ",".join
        return {
            "root": self.root,
            "ok": self.ok,
            "degenerate": self.degenerate,
            "lambdas": {join(k): v for k, v in self.lambdas.items()},
            "flagged_pairs": {join(k): v for k, v in self.flagged_pairs.items()},
            "cycle_residuals": {join(k): v for k, v in self.cycle_residuals.items()},
            "max_cycle_residual": self.max_cycle_residual,
            "max_reconstruction_residual": self.max_reconstruction_residual,
        }


def pair_ratio(c, a, b, tol: float = SEGMENT_TOL, label: str = "pair"):
    """Solve ``c = λ a + (1-λ) b`` for λ; returns ``(λ, residual)``.

    Raises if the segment degenerates to a point or if λ leaves (0, 1).
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if np.max(np.abs(a - b)) <= tol:
        raise UnidentifiableError(f"{label}: members have identical priors, weight ratio "
                                  "is not identifiable")
    lam, resid = segment_projection(c, a, b)
    if resid <= tol and (lam < -tol or lam > 1 + tol):
        raise InfeasibleError(f"{label}: pair weight λ={lam:.6g} lies outside [0, 1]")
    if resid <= tol and (lam <= tol or lam >= 1 - tol):
        raise InfeasibleError(f"{label}: pair weight λ={lam:.6g} gives a non-positive weight")
    return lam, resid


def recover_weights(table: RuleTable, tol: float = SEGMENT_TOL):
    """Reconstruct expert weights (up to scale) from the table's pair entries.

    Each pair ``g({i, j}) = λ g(i) + (1-λ) g(j)`` yields ``w(i)/w(j) =
    λ/(1-λ)``. Ratios are propagated breadth-first from the smallest id (whose
    weight is fixed to 1); remaining pairs serve as cycle checks, and every
    table entry is re-aggregated to measure the reconstruction residual.
    """
    ids = table.ids
    degenerate = richness_warning([table.singletons[i] for i in ids])
    ratios: dict[tuple[str, str], float] = {}
    lambdas, flagged = {}, {}
    unidentifiable = []
    for key in table.keys():
        if len(key) != 2:
            continue
        i, j = key
        a, b = table.singletons[i], table.singletons[j]
        try:
            lam, resid = pair_ratio(table.entries[key], a, b, tol, label=f"pair {list(key)}")
        except UnidentifiableError:
            unidentifiable.append(key)
            continue
        if resid > tol:
            flagged[key] = resid
            continue
        lambdas[key] = lam
        ratios[key] = lam / (1.0 - lam)

    adj: dict[str, list[str]] = {i: [] for i in ids}
    for i, j in ratios:
        adj[i].append(j)
        adj[j].append(i)

    def ratio(i, j):  # w(i) / w(j)
        return ratios[(i, j)] if (i, j) in ratios else 1.0 / ratios[(j, i)]

    root = ids[0]
    weights = {root: 1.0}
    tree = set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in weights:
                weights[v] = weights[u] / ratio(u, v)
                tree.add(tuple(sorted((u, v))))
                queue.append(v)
    missing = [i for i in ids if i not in weights]
    if missing:
        hint = f"; unidentifiable pairs {[list(k) for k in unidentifiable]}" if unidentifiable else ""
        if flagged:
            hint += f"; pairs off their segment {[list(k) for k in flagged]}"
        raise UnidentifiableError(
            f"pair graph is disconnected: no ratio path from {root!r} to {missing}{hint}")

    cycles = {}
    for key in ratios:
        if key not in tree:
            i, j = key
            cycles[key] = abs(ratios[key] / (weights[i] / weights[j]) - 1.0)

    recon = {}
    for key, p in table.entries.items():
        G = np.stack([table.singletons[i] for i in key])
        recon[key] = float(np.max(np.abs(weighted_average(G, [weights[i] for i in key]) - p)))

    report = RecoveryReport(root, lambdas, flagged, cycles, recon, degenerate)
    return {i: weights[i] for i in ids}, report


# -- pipeline ---------------------------------------------------------------

def select_model(problem: DecisionProblem, experts: Iterable[Expert], rule: AggregationRule,
                 ordered: bool = False) -> tuple[np.ndarray, PureRule, float]:
    """Aggregate the experts' priors and return a Bayes rule for the result."""
    experts = _members(experts)
    for e in experts:
        if e.prior.size != problem.m:
            raise DimensionError("states", problem.m, e.prior.size, f"prior of {e.id!r}")
    prior = aggregate_ordered(experts, rule) if ordered else aggregate(experts, rule)
    pure, value = bayes_rule(problem, prior)
    return prior, pure, value
