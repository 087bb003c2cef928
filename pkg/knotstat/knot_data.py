import logging
import warnings

import numpy as np

from .exceptions import DataError, MissingDataError
from .interfaces import interface_for
from .models import HyperbolicInvariants, KnotClass, LaurentPoly1


__all__ = [
    "parse_dataset",
    "serialize_dataset",
    "filter_class",
    "vectorize_jones",
    "unvectorize_jones",
    "vectorize_khovanov",
    "check_khovanov_alternating",
    "summarize",
]

logger = logging.getLogger(__name__)


KHOVANOV_DIAGONAL_MSG = (
    """
    {count} alternating record(s) have khovanov data that does not sit on a single
    diagonal reproducing the jones coefficients: {names}

    The records are kept. Check the export for a grading mix-up or a mislabelled
    alternating flag.
""",
    RuntimeWarning,
)


#### ------------ Ingestion ------------- ####


def parse_dataset(path, format=None):
    """
    Reads a dataset file through the matching interface (csv or json, picked
    from the extension when ``format`` is None) and runs the khovanov
    diagonal sanity check on alternating records.
    """
    dataset = interface_for(path, format).fetch(path)
    suspicious = [
        record.name
        for record in dataset
        if record.alternating
        and record.khovanov is not None
        and not check_khovanov_alternating(record)
    ]
    if suspicious:
        message, category = KHOVANOV_DIAGONAL_MSG
        warnings.warn(
            message.format(count=len(suspicious), names=", ".join(suspicious[:20])),
            category,
        )
    logger.info("loaded %d records from %s", len(dataset), dataset.provenance)
    return dataset


def serialize_dataset(dataset, path, format=None):
    interface_for(path, format).store(path, dataset)


def filter_class(dataset, knot_class):
    if knot_class is KnotClass.ALL:
        return dataset
    return dataset.with_records(r for r in dataset if knot_class.admits(r))


#### ------------ Vectorization ------------- ####


def vectorize_jones(dataset, window=None):
    """
    Zero padded coefficient matrix

    Returns (matrix, (lo, hi)). Column k of row r holds the coefficient of
    t^(lo + k) in record r's jones polynomial. The window is the union of all
    exponent ranges unless one is passed in, in which case every polynomial
    has to fit inside it.
    """
    if len(dataset) == 0:
        raise MissingDataError("cannot vectorize an empty dataset")
    if window is None:
        lo = min(record.jones.min_exp for record in dataset)
        hi = max(record.jones.max_exp for record in dataset)
    else:
        lo, hi = int(window[0]), int(window[1])
        outside = [
            record.name
            for record in dataset
            if record.jones.min_exp < lo or record.jones.max_exp > hi
        ]
        if outside:
            raise DataError(
                "jones exponents of {} fall outside the window [{}, {}]".format(
                    ", ".join(outside[:10]), lo, hi
                )
            )
    matrix = np.zeros((len(dataset), hi - lo + 1), dtype=float)
    for r, record in enumerate(dataset):
        start = record.jones.min_exp - lo
        matrix[r, start:start + len(record.jones.coeffs)] = record.jones.coeffs
    return matrix, (lo, hi)


def unvectorize_jones(row, window):
    coeffs = [int(round(value)) for value in row]
    return LaurentPoly1.from_coeffs(window[0], coeffs)


def vectorize_khovanov(dataset, grid=None):
    """
    Row-major (i outer, j inner) flattening over the bounding box of all
    (i, j) exponents. Returns (matrix, (i_min, i_max, j_min, j_max)).
    """
    if len(dataset) == 0:
        raise MissingDataError("cannot vectorize an empty dataset")
    lacking = [record.name for record in dataset if record.khovanov is None]
    if lacking:
        raise MissingDataError(
            "khovanov data missing for {} record(s): {}".format(
                len(lacking), ", ".join(lacking[:10])
            )
        )
    if grid is None:
        boxes = [record.khovanov.bounds for record in dataset if record.khovanov.bounds]
        if not boxes:
            raise MissingDataError("every khovanov polynomial in the dataset is empty")
        grid = (
            min(b[0] for b in boxes),
            max(b[1] for b in boxes),
            min(b[2] for b in boxes),
            max(b[3] for b in boxes),
        )
    i_min, i_max, j_min, j_max = (int(g) for g in grid)
    width_j = j_max - j_min + 1
    matrix = np.zeros((len(dataset), (i_max - i_min + 1) * width_j), dtype=float)
    for r, record in enumerate(dataset):
        for i, j, c in record.khovanov.terms:
            if not (i_min <= i <= i_max and j_min <= j <= j_max):
                raise DataError(
                    "{}: khovanov term ({}, {}) outside grid {}".format(
                        record.name, i, j, (i_min, i_max, j_min, j_max)
                    )
                )
            matrix[r, (i - i_min) * width_j + (j - j_min)] = c
    return matrix, (i_min, i_max, j_min, j_max)


#### ------------ Sanity checks ------------- ####


def check_khovanov_alternating(record):
    """
    True iff every khovanov term lies on one diagonal j - 2i = const and the
    coefficients along it, ordered by i, reproduce the jones coefficients.

    The diagonal offset is read off the data. Overall sign, the alternating
    sign (-1)^i and the direction of the i grading are all accepted, since
    published grading conventions differ in exactly these.
    """
    if record.khovanov is None:
        raise MissingDataError("{}: no khovanov data".format(record.name))
    terms = record.khovanov.sorted_terms()
    if not terms:
        return False
    if len({j - 2 * i for i, j, _ in terms}) != 1:
        return False
    i_min, i_max = terms[0][0], terms[-1][0]
    diagonal = np.zeros(i_max - i_min + 1, dtype=np.int64)
    for i, _, c in terms:
        diagonal[i - i_min] = c
    jones = np.asarray(record.jones.coeffs, dtype=np.int64)
    if diagonal.shape != jones.shape:
        return False
    alternate = (-1) ** np.arange(len(diagonal))
    for candidate in (diagonal, diagonal[::-1]):
        for signed in (candidate, -candidate, alternate * candidate, -alternate * candidate):
            if np.array_equal(signed, jones):
                return True
    return False


def summarize(dataset):
    by_class = {
        knot_class.value: len(filter_class(dataset, knot_class)) for knot_class in KnotClass
    }
    coverage = {
        name: sum(1 for r in dataset if r.hyperbolic.get(name) is not None)
        for name in HyperbolicInvariants.field_names()
    }
    with_khovanov = [r for r in dataset if r.khovanov is not None]
    failing = [
        r.name
        for r in with_khovanov
        if r.alternating and not check_khovanov_alternating(r)
    ]
    return {
        "records": len(dataset),
        "classes": by_class,
        "targets": coverage,
        "khovanov": len(with_khovanov),
        "khovanov_diagonal_failures": failing,
        "provenance": dataset.provenance,
    }
