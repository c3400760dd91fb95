"""Pooling with repeated and with timestamped experts.

Repeated experts: copies of one pure characteristic share a prior and a
weight, so a pool reduces to counts ``N(e)`` and weights ``N(e)·w(e)``.

Timestamped experts: ``(t, e)`` is expert ``e`` seen ``t`` time units before
the prediction. A stationary consistent rule (invariant under shifting every
timestamp by the same amount) weights ``(t, e)`` by ``q**t · w(e)`` for a
single discount factor ``q > 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from ..aggregation import (
    SEGMENT_TOL,
    AggregationRule,
    Expert,
    pair_ratio,
    weighted_average,
)
from ..decision import as_prior
from ..errors import DimensionError, UnidentifiableError, ValidationError


def _weight_of(weights, expert_id: str) -> float:
    if isinstance(weights, AggregationRule):
        return weights.weight(expert_id)
    try:
        w = float(weights[expert_id])
    except KeyError:
        raise ValidationError(f"no weight for expert {expert_id!r}") from None
    if not (np.isfinite(w) and w > 0):
        raise ValidationError(f"weight of {expert_id!r} must be positive")
    return w


def _check_states(priors, what="experts"):
    m = priors[0].size
    for p in priors:
        if p.size != m:
            raise DimensionError("states", m, p.size, what)


def aggregate_with_multiplicity(pure_experts: Iterable[tuple[Expert, int]], weights) -> np.ndarray:
    """Pool pure experts appearing ``count`` times each.

    Equivalent to pooling the expanded population in which every copy keeps
    its expert's prior and weight.
    """
    items = list(pure_experts)
    if not items:
        raise ValidationError("need at least one pure expert")
    ids = [e.id for e, _ in items]
    if len(set(ids)) != len(ids):
        raise ValidationError("pure experts must be listed once each; use counts for copies")
    counts = []
    for e, n in items:
        if int(n) != n or n < 1:
            raise ValidationError(f"count of {e.id!r} must be a positive integer")
        counts.append(int(n))
    priors = [e.prior for e, _ in items]
    _check_states(priors)
    w = [n * _weight_of(weights, e.id) for (e, _), n in zip(items, counts)]
    return weighted_average(priors, w)


def _timed_members(experts: Iterable[Expert]) -> list[Expert]:
    experts = list(experts)
    if not experts:
        raise ValidationError("need at least one timed expert")
    seen = set()
    for e in experts:
        if e.timestamp is None:
            raise ValidationError(f"expert {e.id!r} has no timestamp")
        key = (e.id, e.timestamp)
        if key in seen:
            raise ValidationError(f"expert {e.id!r} appears twice at time {e.timestamp}")
        seen.add(key)
    _check_states([e.prior for e in experts])
    return experts


def _discount_weights(times, base_weights, q: float) -> np.ndarray:
    # log domain, so large shifts neither overflow nor underflow
    logw = np.asarray(times, dtype=float) * np.log(q) + np.log(np.asarray(base_weights, dtype=float))
    return np.exp(logw - logw.max())


def aggregate_timed(experts: Iterable[Expert], q: float, weights) -> np.ndarray:
    """Pool timestamped experts with weights ``q**t · w(e)``."""
    q = float(q)
    if not (np.isfinite(q) and q > 0):
        raise ValidationError(f"discount factor must be positive, got {q}")
    experts = _timed_members(experts)
    lam = _discount_weights([e.timestamp for e in experts],
                            [_weight_of(weights, e.id) for e in experts], q)
    return weighted_average([e.prior for e in experts], lam)


def time_shift(experts: Iterable[Expert], c: float) -> list[Expert]:
    """Every timestamp moved ``c`` units further into the past."""
    if c < 0:
        raise ValidationError("time shifts must be non-negative")
    return [replace(e, timestamp=e.timestamp + c) for e in _timed_members(experts)]


def _timed_key(members) -> tuple[tuple[str, float], ...]:
    key = tuple(sorted((str(i), float(t)) for i, t in members))
    if not key:
        raise ValidationError("timed subsets must be non-empty")
    if len(set(key)) != len(key):
        raise ValidationError(f"timed subset {list(key)} repeats a member")
    return key


@dataclass(frozen=True, eq=False)
class TimedRuleTable:
    """Observed priors for subsets of timed experts.

    ``singletons`` maps expert id to its prior ``g(e)``; ``entries`` maps
    sorted tuples of ``(id, time)`` to the observed pooled prior.
    """

    singletons: Mapping[str, np.ndarray]
    entries: Mapping[tuple, np.ndarray]

    def __post_init__(self):
        if not self.singletons:
            raise ValidationError("timed rule table needs singleton priors")
        singles, m = {}, None
        for k, v in self.singletons.items():
            p = as_prior(v, m, name=f"singleton prior of {k!r}")
            m = p.size
            singles[str(k)] = p
        entries = {}
        for key, v in self.entries.items():
            key = _timed_key(key)
            missing = sorted({i for i, _ in key if i not in singles})
            if missing:
                raise ValidationError(f"timed subset references unknown ids {missing}")
            if any(t < 0 for _, t in key):
                raise ValidationError("timestamps must be non-negative")
            entries[key] = as_prior(v, m, name=f"prior of timed subset {list(key)}")
        object.__setattr__(self, "singletons", singles)
        object.__setattr__(self, "entries", entries)

    @property
    def ids(self) -> list[str]:
        return sorted(self.singletons)

    def keys(self):
        return sorted(self.entries, key=lambda k: (len(k), k))

    @classmethod
    def from_rule(cls, experts: Iterable[Expert], q: float, weights,
                  subsets: Iterable | None = None, max_size: int | None = None) -> "TimedRuleTable":
        """Tabulate ``aggregate_timed`` over subsets of a timed pool.

        By default every subset of size >= 2 (up to ``max_size``) is listed.
        """
        experts = _timed_members(experts)
        by_key = {(e.id, e.timestamp): e for e in experts}
        singles = {}
        for e in experts:
            singles.setdefault(e.id, e.prior)
        if subsets is None:
            keys = sorted(by_key)
            top = len(keys) if max_size is None else min(max_size, len(keys))
            subsets = [c for r in range(2, top + 1) for c in itertools.combinations(keys, r)]
        entries = {}
        for s in subsets:
            key = _timed_key(s)
            entries[key] = aggregate_timed([by_key[k] for k in key], q, weights)
        return cls(singles, entries)

    @classmethod
    def from_dict(cls, data: dict) -> "TimedRuleTable":
        try:
            entries = {}
            for item in data.get("entries", []):
                key = _timed_key((m[0], m[1]) for m in item["subset"])
                entries[key] = item["prior"]
            return cls(data["singletons"], entries)
        except (KeyError, TypeError, IndexError) as exc:
            raise ValidationError(f"malformed timed rule table: {exc}") from None

    def to_dict(self) -> dict:
        return {
            "singletons": {k: self.singletons[k].tolist() for k in self.ids},
            "entries": [{"subset": [[i, t] for i, t in k], "prior": self.entries[k].tolist()}
                        for k in self.keys()],
        }


@dataclass(frozen=True)
class DiscountReport:
    pairs_used: int
    flagged_pairs: dict
    equation_residual: float
    reconstruction_residuals: dict

    @property
    def max_reconstruction_residual(self) -> float:
        return max(self.reconstruction_residuals.values(), default=0.0)

    def to_dict(self) -> dict:
        fmt = lambda k: ";".join(f"{i}@{t:g}" for i, t in k)  # noqa: E731
        return {
            "pairs_used": self.pairs_used,
            "flagged_pairs": {fmt(k): v for k, v in self.flagged_pairs.items()},
            "equation_residual": self.equation_residual,
            "max_reconstruction_residual": self.max_reconstruction_residual,
        }


def recover_discount(table: TimedRuleTable, tol: float = SEGMENT_TOL):
    """Recover the discount factor and expert weights from pair entries.

    Every entry pairing two distinct experts ``(t_i, e_i), (t_j, e_j)`` gives
    the pair weight λ, and::

        log(λ / (1 - λ)) = (t_i - t_j)·log q + log w(e_i) - log w(e_j)

    The stacked equations are solved by least squares with the weight of the
    smallest id fixed to 1. ``q`` is identified once some pair of experts
    appears at two different relative time offsets (or a cycle of pairs has
    a non-zero net offset); a pair of one expert at two times carries no
    information, because both members share a prior.

    Returns
    -------
    (q, weights, DiscountReport)
    """
    ids = table.ids
    index = {e: k for k, e in enumerate(ids[1:], start=1)}
    rows, rhs, flagged = [], [], {}
    for key in table.keys():
        if len(key) != 2 or key[0][0] == key[1][0]:
            continue
        (i, ti), (j, tj) = key
        try:
            lam, resid = pair_ratio(table.entries[key], table.singletons[i],
                                    table.singletons[j], tol, label=f"timed pair {list(key)}")
        except UnidentifiableError:
            continue
        if resid > tol:
            flagged[key] = resid
            continue
        row = np.zeros(len(ids))
        row[0] = ti - tj
        if i in index:
            row[index[i]] += 1.0
        if j in index:
            row[index[j]] -= 1.0
        rows.append(row)
        rhs.append(np.log(lam) - np.log1p(-lam))
    if not rows:
        raise UnidentifiableError("no usable pair of distinct experts: need pairs "
                                  "(t1, e), (t2, e') with e != e'")
    X = np.array(rows)
    y = np.array(rhs)
    rank = np.linalg.matrix_rank(X)
    if rank < X.shape[1]:
        if np.linalg.matrix_rank(X[:, 1:]) == rank:
            raise UnidentifiableError(
                "discount factor is confounded with weight ratios: need the same two "
                "experts paired at a different relative time offset")
        raise UnidentifiableError("expert weights are not connected by pairs: every expert "
                                  "must be linked to the others through pair entries")
    sol, *_ = np.linalg.lstsq(X, y, rcond=None)
    q = float(np.exp(sol[0]))
    weights = {ids[0]: 1.0}
    for e, k in index.items():
        weights[e] = float(np.exp(sol[k]))
    eq_resid = float(np.max(np.abs(X @ sol - y)))

    recon = {}
    for key, p in table.entries.items():
        members = [Expert(i, table.singletons[i], timestamp=t) for i, t in key]
        recon[key] = float(np.max(np.abs(aggregate_timed(members, q, weights) - p)))
    return q, {e: weights[e] for e in ids}, DiscountReport(len(rows), flagged, eq_resid, recon)
