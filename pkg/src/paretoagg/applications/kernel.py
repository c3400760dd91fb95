"""Nadaraya-Watson kernel smoothing.

The smoother is consistent pooling where the pooled "experts" are observed
samples and the weight of a sample is its kernel similarity to the query
point, ``w(x0, x_i) = d(||x0 - x_i|| / h(x0))`` for a non-increasing ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

from ..errors import DimensionError, EmptyNeighborhoodError, ValidationError


def _gaussian(t):
    return np.exp(-0.5 * t * t)


def _epanechnikov(t):
    return np.maximum(0.0, 1.0 - t * t)


def _tricube(t):
    return np.maximum(0.0, 1.0 - t ** 3) ** 3


def _boxcar(t):
    return np.where(t <= 1.0, 1.0, 0.0)


SHAPES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "gaussian": _gaussian,
    "epanechnikov": _epanechnikov,
    "tricube": _tricube,
    "boxcar": _boxcar,
}


class TabulatedShape:
    """Piecewise-linear kernel shape through ``(grid[i], values[i])``.

    Constant at ``values[-1]`` beyond the last knot. Values must be
    non-negative and non-increasing.
    """

    def __init__(self, grid, values):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValidationError("tabulated kernel needs matching 1-D grid and values (>= 2 knots)")
        if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise ValidationError("tabulated kernel grid must start at 0 and increase strictly")
        if np.any(values < 0) or np.any(np.diff(values) > 0):
            raise ValidationError("tabulated kernel values must be non-negative and non-increasing")
        self.grid = grid
        self.values = values

    def __call__(self, t):
        return np.interp(t, self.grid, self.values, right=self.values[-1])


Bandwidth = Union[float, Callable[[np.ndarray], float]]


@dataclass(frozen=True)
class KernelSpec:
    """Kernel shape (a name in ``SHAPES`` or a :class:`TabulatedShape`) and bandwidth.

    ``bandwidth`` may be a constant or a callable ``h(x0)`` evaluated at the
    query point.
    """

    shape: Union[str, TabulatedShape] = "gaussian"
    bandwidth: Bandwidth = 1.0

    def __post_init__(self):
        if isinstance(self.shape, str):
            if self.shape not in SHAPES:
                raise ValidationError(f"unknown kernel shape {self.shape!r}; "
                                      f"choose from {sorted(SHAPES)}")
        elif not isinstance(self.shape, TabulatedShape):
            raise ValidationError("kernel shape must be a name or a TabulatedShape")
        if not callable(self.bandwidth):
            h = float(self.bandwidth)
            if not (np.isfinite(h) and h > 0):
                raise ValidationError("bandwidth must be positive")

    def d(self, t):
        fn = SHAPES[self.shape] if isinstance(self.shape, str) else self.shape
        return fn(np.asarray(t, dtype=float))

    def h(self, x0) -> float:
        h = float(self.bandwidth(x0)) if callable(self.bandwidth) else float(self.bandwidth)
        if not (np.isfinite(h) and h > 0):
            raise ValidationError(f"bandwidth at the query point must be positive, got {h}")
        return h


def _samples_arrays(samples):
    pairs = list(samples)
    if not pairs:
        raise ValidationError("need at least one sample")
    X = np.array([np.atleast_1d(np.asarray(x, dtype=float)) for x, _ in pairs])
    y = np.array([float(v) for _, v in pairs])
    return X, y


def kernel_weights(X, x0, kernel: KernelSpec) -> np.ndarray:
    """Similarity ``d(||x0 - x_i|| / h(x0))`` of each row of ``X`` to ``x0``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if X.shape[1] != x0.size:
        raise DimensionError("features", X.shape[1], x0.size, "query point")
    dist = np.linalg.norm(X - x0, axis=1)
    return kernel.d(dist / kernel.h(x0))


def nw_smooth(samples, x0, kernel: KernelSpec | None = None) -> float:
    """Kernel-weighted average of sample responses at ``x0``.

    ``samples`` is a sequence of ``(x, y)`` pairs with vector (or scalar) x.

    Raises
    ------
    EmptyNeighborhoodError
        When every kernel weight is zero at ``x0``.
    """
    kernel = kernel or KernelSpec()
    X, y = _samples_arrays(samples)
    w = kernel_weights(X, x0, kernel)
    total = math.fsum(w)
    if total <= 0.0:
        raise EmptyNeighborhoodError("empty neighborhood: no sample has positive kernel "
                                     "weight at the query point")
    return math.fsum(w * y) / total


def check_symmetric_similarity(similarity: Mapping[tuple, float], tol: float = 1e-9) -> list[tuple]:
    """Pairs ``(e1, e2)`` whose similarity differs from ``(e2, e1)`` by more than ``tol``.

    A pair whose mirror is missing is flagged as well. Each unordered pair
    is reported once, in sorted order.
    """
    flagged = []
    seen = set()
    for (a, b), v in sorted(similarity.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        key = tuple(sorted((a, b), key=str))
        if a == b or key in seen:
            continue
        seen.add(key)
        back = similarity.get((b, a))
        if back is None or abs(float(v) - float(back)) > tol:
            flagged.append(key)
    return flagged
