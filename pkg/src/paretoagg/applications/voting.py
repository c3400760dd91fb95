"""Weighted voting over reported rankings.

Each voter reports a prior, read as a ranking of risk profiles; the social
ranking is their weighted average, and a lone voter's ballot is reproduced
exactly.
"""

from __future__ import annotations

import numpy as np

from ..decision import as_prior
from ..errors import DimensionError, ValidationError


def vote(ballots, weights=None) -> np.ndarray:
    """Social prior ``Σ w_i·ballot_i / Σ w_i`` (equal weights by default)."""
    ballots = [as_prior(b, name=f"ballot {i}") for i, b in enumerate(ballots)]
    if not ballots:
        raise ValidationError("vote needs at least one ballot")
    m = ballots[0].size
    for i, b in enumerate(ballots):
        if b.size != m:
            raise DimensionError("states", m, b.size, f"ballot {i}")
    w = np.ones(len(ballots)) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (len(ballots),):
        raise DimensionError("ballots", len(ballots), w.size, "weights")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValidationError("voter weights must be positive")
    if len(ballots) == 1:
        return ballots[0].copy()
    return (w / w.sum()) @ np.stack(ballots)
