import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .config import DerivedSettings
from .exceptions import DataError, DomainError


__all__ = [
    "Determinant",
    "MahlerMeasure",
    "RootOfUnityEval",
    "eval_poly",
    "determinant",
    "mahler_measure",
    "mahler_measure_converged",
    "mahler_jensen_oracle",
    "root_of_unity_modulus",
    "phase_modulus",
    "roots_of_unity_vector",
    "rescale",
    "degree",
    "derive_table",
]

logger = logging.getLogger(__name__)

# Smallest |J| fed to the logarithm in the Mahler integrand
MAHLER_FLOOR = 1e-300

MAHLER_MIN_POINTS = 64

NOT_CONVERGED_MSG = (
    "Mahler measure did not settle to {tol:g} after {points} nodes (last change {delta:.3g}). "
    "The polynomial probably has roots on the unit circle.",
    RuntimeWarning,
)


def eval_poly(p, z):
    """
    sum_i coeffs[i] * z^(min_exp + i)

    z may be a scalar or a numpy array. Horner on the coefficient block, then
    one power for the shift.
    """
    z = np.asarray(z, dtype=complex)
    if p.min_exp < 0 and np.any(z == 0):
        raise DomainError("cannot evaluate a polynomial with negative exponents at 0")
    value = npoly.polyval(z, np.asarray(p.coeffs, dtype=float)) * z ** p.min_exp
    if value.ndim == 0:
        return complex(value)
    return value


def degree(p):
    return len(p.coeffs) - 1


def determinant(p):
    value = int(round(abs(eval_poly(p, -1.0))))
    if value == 0:
        raise DataError("|J(-1)| rounds to 0, not the jones polynomial of a knot")
    return value


def _midpoint_mean_log(p, n_points):
    theta = 2.0 * np.pi * (np.arange(n_points) + 0.5) / n_points
    # |t^k q(t)| = |q(t)| on the unit circle, the shift can be skipped
    moduli = np.abs(npoly.polyval(np.exp(1j * theta), np.asarray(p.coeffs, dtype=float)))
    return float(np.mean(np.log(np.maximum(moduli, MAHLER_FLOOR))))


def mahler_measure(p, n_points=4096):
    """
    exp of the mean of ln|J(e^{i theta})| over the circle, by the midpoint
    rule on theta_j = 2 pi (j + 1/2) / n_points. Midpoint nodes generically
    miss unit-circle roots, where the integrand has a log singularity.
    """
    if n_points < MAHLER_MIN_POINTS:
        raise DomainError(
            "mahler_measure needs at least {} nodes, got {}".format(MAHLER_MIN_POINTS, n_points)
        )
    return math.exp(_midpoint_mean_log(p, n_points))


def mahler_measure_converged(p, tol=1e-9, start=MAHLER_MIN_POINTS, max_points=1 << 16):
    points = max(int(start), MAHLER_MIN_POINTS)
    previous = mahler_measure(p, points)
    delta = float("inf")
    while points < max_points:
        points *= 2
        current = mahler_measure(p, points)
        delta = abs(current - previous)
        if delta < tol:
            return current
        previous = current
    message, category = NOT_CONVERGED_MSG
    warnings.warn(message.format(tol=tol, points=points, delta=delta), category)
    return previous


def mahler_jensen_oracle(roots, leading):
    """ |leading| * prod max(1, |root|), Jensen's formula """
    measure = abs(leading)
    for root in roots:
        measure *= max(1.0, abs(root))
    return float(measure)


def root_of_unity_modulus(p, k, n):
    if n <= 0 or not 0 < k < n:
        raise DomainError("root of unity needs 0 < k < n, got k={}, n={}".format(k, n))
    return phase_modulus(p, 2.0 * math.pi * k / n)


def phase_modulus(p, phase):
    """ |J(e^{i phase})| """
    return abs(eval_poly(p, complex(math.cos(phase), math.sin(phase))))


def roots_of_unity_vector(p, n):
    """
    |J(e^{2 pi i k / n})| for k = 1 .. n // 2

    The moduli for k and n - k coincide for real coefficients, so the other
    half of the circle carries no extra information.
    """
    if n < 2:
        raise DomainError("need at least 2 roots of unity, got n={}".format(n))
    k = np.arange(1, n // 2 + 1)
    return np.abs(eval_poly(p, np.exp(2j * np.pi * k / n)))


def rescale(value, jones_degree):
    """ ln(value) / ln(deg J) """
    if not value > 0:
        raise DomainError("rescale needs a positive value, got {!r}".format(value))
    if jones_degree < 2:
        raise DomainError(
            "rescale needs a jones degree of at least 2, got {}".format(jones_degree)
        )
    return math.log(value) / math.log(jones_degree)


#### ------------ Invariant kinds ------------- ####


@dataclass(frozen=True)
class Determinant:
    label = "det"

    def __call__(self, p):
        return float(determinant(p))


@dataclass(frozen=True)
class MahlerMeasure:
    n_points: int = 4096
    tolerance: Optional[float] = None

    label = "mahler"

    def __call__(self, p):
        if self.tolerance is not None:
            return mahler_measure_converged(p, tol=self.tolerance, start=self.n_points)
        return mahler_measure(p, self.n_points)


@dataclass(frozen=True)
class RootOfUnityEval:
    k: int = 3
    n: int = 5

    label = "zeta"

    def __post_init__(self):
        if self.n <= 0 or not 0 < self.k < self.n:
            raise DomainError(
                "root of unity needs 0 < k < n, got k={}, n={}".format(self.k, self.n)
            )

    def __call__(self, p):
        return root_of_unity_modulus(p, self.k, self.n)


def kinds_from_settings(settings=None):
    settings = settings or DerivedSettings()
    return (
        Determinant(),
        MahlerMeasure(settings.mahler_points, settings.mahler_tolerance),
        RootOfUnityEval(settings.zeta_k, settings.zeta_n),
    )


def rescaled(kind, p):
    return rescale(kind(p), degree(p))


def derive_table(dataset, settings=None):
    """
    One dict per record: degree, raw and rescaled determinant, Mahler measure
    and root-of-unity modulus. Rescaled values are None where the rescaling is
    undefined (degree < 2 or a vanishing modulus).
    """
    kinds = kinds_from_settings(settings)
    rows = []
    for record in dataset:
        row = {
            "name": record.name,
            "alternating": bool(record.alternating),
            "degree": degree(record.jones),
        }
        for kind in kinds:
            try:
                value = kind(record.jones)
            except DataError as e:
                logger.warning("%s: %s", record.name, e)
                value = None
            row[kind.label] = value
            try:
                row[kind.label + "_rescaled"] = (
                    None if value is None else rescale(value, row["degree"])
                )
            except DomainError:
                row[kind.label + "_rescaled"] = None
        rows.append(row)
    return rows
