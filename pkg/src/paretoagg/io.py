"""Readers and writers for the JSON and CSV interchange formats.

Problem::

    {"states": [...], "outcomes": [...], "actions": [...],
     "likelihood": [[...]], "loss": [[...]]}

Expert pool (``timestamp``/``multiplicity``/``characteristics`` optional)::

    {"experts": [{"id": ..., "prior": [...], "timestamp": ..., "multiplicity": ...}],
     "weights": {id: w}, "order": {id: rank}}

Rule table::

    {"singletons": {id: [...]}, "entries": [{"subset": [ids], "prior": [...]}]}

Timed rule tables use ``[[id, t], ...]`` subsets. Samples CSV has header
``x1,...,xk,y``; ballots are a JSON list of priors or
``{"ballots": [...], "weights": [...]}``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .aggregation import AggregationRule, Expert, RuleTable
from .applications.pooling import TimedRuleTable
from .decision import DecisionProblem, PureRule, RandomizedRule
from .errors import ValidationError


def read_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def dumps(obj) -> str:
    """Compact JSON with shortest round-trip float formatting."""
    return json.dumps(obj, separators=(",", ":"), allow_nan=True)


def load_problem(path) -> DecisionProblem:
    data = read_json(path)
    if not isinstance(data, dict):
        raise ValidationError("problem file must hold a JSON object")
    return DecisionProblem.from_dict(data)


def rule_from_json(data) -> RandomizedRule:
    """A rule as ``[a0, a1, ...]``, ``{"assignment": [...]}`` or ``{"support": [...]}``."""
    if isinstance(data, list):
        return RandomizedRule.pure(PureRule(data))
    if isinstance(data, dict) and "assignment" in data:
        return RandomizedRule.pure(PureRule(data["assignment"]))
    if isinstance(data, dict) and "support" in data:
        try:
            return RandomizedRule(tuple((PureRule(s["assignment"]), s["weight"])
                                        for s in data["support"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed rule support: {exc}") from None
    raise ValidationError("rule must be a list of action indices or an object with "
                          "'assignment' or 'support'")


def pool_from_json(data, require_unique: bool = True) -> tuple[list[Expert], AggregationRule]:
    if not isinstance(data, dict) or "experts" not in data:
        raise ValidationError("pool must be an object with an 'experts' list")
    experts = []
    try:
        for item in data["experts"]:
            experts.append(Expert(
                id=item["id"],
                prior=item["prior"],
                characteristics=item.get("characteristics"),
                timestamp=item.get("timestamp"),
                multiplicity=item.get("multiplicity", 1),
            ))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed expert entry: {exc}") from None
    ids = [e.id for e in experts]
    if require_unique and len(set(ids)) != len(ids):
        raise ValidationError("expert ids must be unique within a pool")
    weights = data.get("weights")
    if weights is None:
        weights = {i: 1.0 for i in ids}
    return experts, AggregationRule(weights, data.get("order", {}))


def pool_to_json(experts, rule: AggregationRule) -> dict:
    out = []
    for e in experts:
        item = {"id": e.id, "prior": e.prior.tolist()}
        if e.characteristics is not None:
            item["characteristics"] = e.characteristics.tolist()
        if e.timestamp is not None:
            item["timestamp"] = e.timestamp
        if e.multiplicity != 1:
            item["multiplicity"] = e.multiplicity
        out.append(item)
    data = {"experts": out, "weights": dict(rule.weights)}
    if rule.order:
        data["order"] = dict(rule.order)
    return data


def load_pool(path, require_unique: bool = True):
    return pool_from_json(read_json(path), require_unique)


def load_table(path) -> RuleTable:
    data = read_json(path)
    if not isinstance(data, dict):
        raise ValidationError("rule table must be a JSON object")
    return RuleTable.from_dict(data)


def load_timed_table(path) -> TimedRuleTable:
    data = read_json(path)
    if not isinstance(data, dict):
        raise ValidationError("timed rule table must be a JSON object")
    return TimedRuleTable.from_dict(data)


def load_samples(path) -> list[tuple[np.ndarray, float]]:
    """Samples CSV with header ``x1,...,xk,y``."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise ValidationError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    k = len(header) - 1
    if k < 1 or header[-1] != "y" or header[:-1] != [f"x{i}" for i in range(1, k + 1)]:
        raise ValidationError("samples header must be x1,...,xk,y")
    out = []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != k + 1:
            raise ValidationError(f"{path}:{lineno}: expected {k + 1} fields, got {len(r)}")
        try:
            vals = [float(v) for v in r]
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: non-numeric field") from None
        out.append((np.array(vals[:k]), vals[k]))
    if not out:
        raise ValidationError(f"{path} has no sample rows")
    return out


def load_ballots(path):
    data = read_json(path)
    if isinstance(data, list):
        return data, None
    if isinstance(data, dict) and "ballots" in data:
        return data["ballots"], data.get("weights")
    raise ValidationError("ballots must be a list of priors or an object with 'ballots'")


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ValidationError(f"cannot parse vector {text!r}") from None


def write_text(text: str, out: str | None, stream) -> None:
    if out is None or out == "-":
        stream.write(text)
        return
    Path(out).write_text(text, encoding="utf-8")
