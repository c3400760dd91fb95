"""Sample mean versus James-Stein under squared loss.

For one observation ``x ~ N_d(θ, I)`` the identity estimator has risk ``d``
everywhere, while the James-Stein estimator has strictly smaller risk for
every θ once ``d >= 3``; the sample mean is therefore not admissible.

Monte Carlo draws are reproducible: samples are split into fixed-size chunks
and chunk ``i`` uses a Philox generator seeded by
``SeedSequence(seed, spawn_key=(i,))``. The partition is independent of the
thread count and chunk sums are reduced in index order, so results do not
depend on how many workers run.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError

CHUNK = 1 << 16
SE_FACTOR = 4.0
GENERATOR_ID = (f"numpy-{np.__version__} Philox4x64 SeedSequence(seed, spawn_key=(chunk,)) "
                f"chunk={CHUNK} standard_normal")
THREADS_ENV = "AGG_ENGINE_THREADS"


def james_stein(x) -> np.ndarray:
    """James-Stein shrinkage ``(1 - (d-2)/||x||²)·x`` of one observation.

    A 2-D input is treated as a batch of observations, one per row.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2):
        raise ValidationError("james_stein expects a vector or a batch of row vectors")
    d = x.shape[-1]
    if d < 3:
        raise ValidationError(f"James-Stein needs dimension d >= 3 to dominate the mean, got d={d}")
    norm2 = np.sum(x * x, axis=-1, keepdims=True)
    if np.any(norm2 == 0):
        raise ValidationError("James-Stein is singular at the zero vector")
    return (1.0 - (d - 2) / norm2) * x


def sample_mean(x) -> np.ndarray:
    """The identity estimator (a single observation is its own mean)."""
    return np.array(x, dtype=float)


# Extra estimators (e.g. a positive-part variant) can be registered here and
# referred to by name in mc_risk / dominance_report.
ESTIMATORS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "mean": sample_mean,
    "james_stein": james_stein,
}


@dataclass(frozen=True)
class McConfig:
    dimension: int
    theta: tuple
    samples: int
    seed: int

    def __post_init__(self):
        d = int(self.dimension)
        if d != self.dimension or d < 1:
            raise ValidationError("dimension must be an integer >= 1")
        theta = tuple(float(t) for t in np.atleast_1d(np.asarray(self.theta, dtype=float)))
        if len(theta) != d:
            raise ValidationError(f"theta has length {len(theta)}, expected {d}")
        if not all(math.isfinite(t) for t in theta):
            raise ValidationError("theta must be finite")
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValidationError("samples must be an integer >= 1")
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "samples", int(self.samples))
        object.__setattr__(self, "seed", int(self.seed))


def _chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(chunk,))
    return np.random.Generator(np.random.Philox(ss))


def _chunk_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def draw_observations(config: McConfig) -> np.ndarray:
    """All ``samples`` observations as an array (for small runs and tests)."""
    theta = np.asarray(config.theta)
    parts = [theta + _chunk_generator(config.seed, i).standard_normal((n, config.dimension))
             for i, n in enumerate(_chunk_sizes(config.samples))]
    return np.concatenate(parts)


def _resolve(estimator) -> Callable:
    if callable(estimator):
        return estimator
    try:
        return ESTIMATORS[estimator]
    except KeyError:
        raise ValidationError(f"unknown estimator {estimator!r}; "
                              f"choose from {sorted(ESTIMATORS)}") from None


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "0")
        try:
            threads = int(raw)
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ValidationError("thread count must be >= 0")
    return threads or (os.cpu_count() or 1)


def mc_risk(estimator, config: McConfig, threads: int | None = None) -> tuple[float, float]:
    """Monte Carlo squared-error risk and its standard error.

    Returns ``(mean of ||est(x) - θ||², standard error)``; the standard
    error is NaN for a single sample.
    """
    est = _resolve(estimator)
    theta = np.asarray(config.theta)
    if est is james_stein and config.dimension < 3:
        raise ValidationError(f"James-Stein needs dimension d >= 3, got d={config.dimension}")
    sizes = _chunk_sizes(config.samples)

    def run(i):
        x = theta + _chunk_generator(config.seed, i).standard_normal((sizes[i], config.dimension))
        err = np.sum((est(x) - theta) ** 2, axis=1)
        mean = float(np.mean(err))
        return len(err), mean, float(np.sum((err - mean) ** 2))

    workers = min(thread_count(threads), len(sizes))
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]

    # ordered pairwise merge of (count, mean, M2)
    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    if n < 2:
        return mean, float("nan")
    return mean, math.sqrt(m2 / (n - 1) / n)


@dataclass(frozen=True)
class DominanceRow:
    theta_label: str
    estimator: str
    risk: float
    std_error: float
    samples: int
    seed: int
    dominant_flag: bool


REPORT_COLUMNS = ("theta_label", "estimator", "risk", "std_error", "samples", "seed",
                  "dominant_flag")


def dominance_report(d: int, theta_grid: Sequence, samples: int, seed: int,
                     labels: Sequence[str] | None = None,
                     threads: int | None = None) -> list[DominanceRow]:
    """Mean and James-Stein risks at each grid point, with a dominance flag.

    Both estimators see the same draws. The flag is set when
    ``JS risk + 4·SE < mean risk``.
    """
    if d < 3:
        raise ValidationError(f"James-Stein column needs d >= 3, got d={d}")
    grid = [np.asarray(t, dtype=float) for t in theta_grid]
    if labels is None:
        labels = [f"theta{i}" for i in range(len(grid))]
    if len(labels) != len(grid):
        raise ValidationError("one label per grid point")
    rows = []
    for label, theta in zip(labels, grid):
        cfg = McConfig(d, tuple(theta), samples, seed)
        r_mean, se_mean = mc_risk("mean", cfg, threads)
        r_js, se_js = mc_risk("james_stein", cfg, threads)
        flag = bool(r_js + SE_FACTOR * se_js < r_mean)
        rows.append(DominanceRow(label, "mean", r_mean, se_mean, samples, seed, flag))
        rows.append(DominanceRow(label, "james_stein", r_js, se_js, samples, seed, flag))
    return rows


def report_csv(rows: Sequence[DominanceRow], header: Sequence[str] = ()) -> str:
    """Render rows as CSV; ``header`` lines are emitted first as ``# ...`` comments."""
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        w.writerow([r.theta_label, r.estimator, repr(r.risk), repr(r.std_error),
                    r.samples, r.seed, int(r.dominant_flag)])
    return buf.getvalue()
