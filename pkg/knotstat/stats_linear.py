import logging
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .exceptions import (
    DegenerateClusterError,
    DomainError,
    SingularSystemError,
    UndefinedCorrelationError,
)


__all__ = [
    "SampleStats",
    "LinearModel",
    "MultilinearModel",
    "MetricReport",
    "TwoClusterFit",
    "sample_stats",
    "pearson",
    "linear_fit",
    "multilinear_fit",
    "mse",
    "mape",
    "wrapped_mse",
    "metric_report",
    "two_cluster_fit",
]

logger = logging.getLogger(__name__)

# Normal-equation systems past this condition number are treated as singular
MAX_CONDITION = 1e12


SampleStats = namedtuple("SampleStats", ["mean", "variance", "std"])


@dataclass(frozen=True)
class LinearModel:
    slope: float
    intercept: float

    def predict(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.intercept


@dataclass(frozen=True, eq=False)
class MultilinearModel:
    beta: np.ndarray
    intercept: float

    def predict(self, X):
        return np.asarray(X, dtype=float) @ self.beta + self.intercept


@dataclass(frozen=True)
class MetricReport:
    """ mape is None iff the targets contain a zero """

    mse: float
    mape: Optional[float] = None
    relative_mse: Optional[float] = None

    def to_dict(self):
        return {"mse": self.mse, "mape": self.mape, "relative_mse": self.relative_mse}


def _vector(x, name="x"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DomainError("{} must be one dimensional, got shape {}".format(name, x.shape))
    return x


def _pair(x, y, minimum=2):
    x, y = _vector(x, "x"), _vector(y, "y")
    if x.shape != y.shape:
        raise DomainError("length mismatch: {} vs {}".format(len(x), len(y)))
    if len(x) < minimum:
        raise DomainError("need at least {} points, got {}".format(minimum, len(x)))
    return x, y


#### ------------ Sample statistics ------------- ####


def sample_stats(x):
    """ Mean, and variance / std with the n - 1 denominator """
    x = _vector(x)
    if len(x) < 2:
        raise DomainError("sample variance needs at least 2 values, got {}".format(len(x)))
    mean = float(np.mean(x))
    # exactly zero for constant input, the rounded mean can miss x
    variance = 0.0 if np.ptp(x) == 0 else float(np.sum((x - mean) ** 2) / (len(x) - 1))
    return SampleStats(mean, variance, float(np.sqrt(variance)))


def _covariance(x, y):
    return float(np.sum((x - x.mean()) * (y - y.mean())) / (len(x) - 1))


def pearson(x, y):
    x, y = _pair(x, y)
    sx, sy = sample_stats(x).std, sample_stats(y).std
    if sx == 0 or sy == 0:
        raise UndefinedCorrelationError("correlation undefined for a constant vector")
    r = _covariance(x, y) / (sx * sy)
    return float(min(1.0, max(-1.0, r)))


#### ------------ Regression ------------- ####


def linear_fit(x, y):
    """
    Closed-form least squares y ~ a x + b

    Returns (LinearModel, training MSE).
    """
    x, y = _pair(x, y)
    variance = sample_stats(x).variance
    if variance == 0:
        raise DomainError("linear fit needs a non-constant x")
    slope = _covariance(x, y) / variance
    intercept = float(y.mean() - slope * x.mean())
    model = LinearModel(slope=float(slope), intercept=intercept)
    return model, mse(model.predict(x), y)


def multilinear_fit(X, y):
    """
    Least squares y ~ X beta + b through the normal equations of the
    intercept-augmented design, solved by LU with partial pivoting.
    """
    X = np.asarray(X, dtype=float)
    y = _vector(y, "y")
    if X.ndim == 1:
        X = X[:, None]
    n, m = X.shape
    if n != len(y):
        raise DomainError("X has {} rows but y has {} entries".format(n, len(y)))
    if n < m + 1:
        raise DomainError("need at least {} rows for {} inputs, got {}".format(m + 1, m, n))
    A = np.hstack([X, np.ones((n, 1))])
    gram = A.T @ A
    condition = float(np.linalg.cond(gram))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularSystemError(
            "normal equations are singular (condition estimate {:.3g})".format(condition),
            condition=condition,
        )
    solution = scipy.linalg.lu_solve(scipy.linalg.lu_factor(gram), A.T @ y)
    return MultilinearModel(beta=solution[:m], intercept=float(solution[m]))


#### ------------ Error metrics ------------- ####


def mse(pred, y):
    pred, y = _pair(pred, y, minimum=1)
    return float(np.mean((y - pred) ** 2))


def mape(pred, y):
    """ Mean absolute percentage error, in percent """
    pred, y = _pair(pred, y, minimum=1)
    if np.any(y == 0):
        raise DomainError("MAPE is undefined, the targets contain zeros")
    return float(100.0 * np.mean(np.abs(y - pred) / np.abs(y)))


def wrapped_mse(pred, y, period=0.5):
    """ MSE with the cyclic distance on R / period Z """
    pred, y = _pair(pred, y, minimum=1)
    delta = np.mod(y - pred, period)
    delta = np.minimum(delta, period - delta)
    return float(np.mean(delta ** 2))


def metric_report(pred, y, baseline_mse=None):
    error = mse(pred, y)
    try:
        percentage = mape(pred, y)
    except DomainError:
        percentage = None
    relative = None
    if baseline_mse is not None:
        relative = relative_error(error, baseline_mse)
    return MetricReport(mse=error, mape=percentage, relative_mse=relative)


def relative_error(value, baseline):
    if baseline == 0:
        return 1.0 if value == 0 else float("inf")
    return value / baseline


#### ------------ Two-cluster regression ------------- ####


@dataclass(frozen=True, eq=False)
class TwoClusterFit:
    models: tuple
    pearson: tuple
    assignment: np.ndarray
    inertia: float


def _lloyd(points, centroids, max_iter):
    assignment = None
    for _ in range(max_iter):
        distances = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assignment = distances.argmin(axis=1)
        if assignment is not None and np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
        for c in range(len(centroids)):
            members = points[assignment == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
    inertia = float(((points - centroids[assignment]) ** 2).sum())
    return assignment, centroids, inertia


def two_cluster_fit(x, y, seed, max_iter=100, n_init=10):
    """
    2-means on the standardized (x, y) plane, then a line and a correlation
    per cluster. Clusters are ordered by ascending centroid x (then y).

    Initial centroids are pairs of distinct data points drawn from a
    generator seeded with ``seed``; the best of ``n_init`` Lloyd runs (lowest
    inertia) is kept.
    """
    x, y = _pair(x, y, minimum=4)
    sx, sy = sample_stats(x), sample_stats(y)
    points = np.column_stack(
        [
            (x - sx.mean) / (sx.std or 1.0),
            (y - sy.mean) / (sy.std or 1.0),
        ]
    )
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        start = points[rng.choice(len(points), size=2, replace=False)].copy()
        assignment, centroids, inertia = _lloyd(points, start, max_iter)
        if best is None or inertia < best[2]:
            best = (assignment, centroids, inertia)
    assignment, centroids, inertia = best

    # Ties in x fall back to y
    if tuple(centroids[0]) > tuple(centroids[1]):
        assignment = 1 - assignment

    models, correlations = [], []
    for c in (0, 1):
        mask = assignment == c
        if mask.sum() < 2:
            raise DegenerateClusterError(
                "cluster {} has {} point(s), at least 2 are needed".format(c, int(mask.sum()))
            )
        model, _ = linear_fit(x[mask], y[mask])
        models.append(model)
        correlations.append(pearson(x[mask], y[mask]))
    logger.debug("two-cluster fit sizes %s", np.bincount(assignment, minlength=2).tolist())
    return TwoClusterFit(
        models=tuple(models),
        pearson=tuple(correlations),
        assignment=assignment,
        inertia=inertia,
    )
