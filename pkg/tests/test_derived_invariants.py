import math
import warnings

import numpy as np
import pytest
from numpy.polynomial import polynomial as npoly

from knotstat.config import DerivedSettings
from knotstat.derived_invariants import (
    MahlerMeasure,
    RootOfUnityEval,
    degree,
    derive_table,
    determinant,
    eval_poly,
    mahler_jensen_oracle,
    mahler_measure,
    mahler_measure_converged,
    phase_modulus,
    rescale,
    root_of_unity_modulus,
    roots_of_unity_vector,
)
from knotstat.exceptions import DataError, DomainError
from knotstat.models import LaurentPoly1
from .common import MICRO_KNOTS, make_record, micro_dataset, poly


@pytest.mark.parametrize("name", sorted(MICRO_KNOTS))
def test_determinant_of_micro_knots(name):
    jones, det, _ = MICRO_KNOTS[name]
    assert determinant(poly(jones)) == det


@pytest.mark.parametrize("name", sorted(MICRO_KNOTS))
def test_jones_at_one(name):
    assert eval_poly(poly(MICRO_KNOTS[name][0]), 1.0) == pytest.approx(1.0)


def test_eval_poly():
    p = poly("-1;2 0 3")  # 2/t + 3t
    assert eval_poly(p, 2.0) == pytest.approx(7.0)
    assert eval_poly(p, 1j) == pytest.approx(-2j + 3j)
    values = eval_poly(p, np.array([1.0, -1.0]))
    assert values.shape == (2,)
    with pytest.raises(DomainError):
        eval_poly(p, 0)
    assert eval_poly(poly("0;5 1"), 0) == 5


def test_determinant_zero_rejected():
    with pytest.raises(DataError):
        determinant(poly("0;1 1"))


def test_degree():
    assert degree(poly("-2;1 -1 1 -1 1")) == 4
    assert degree(LaurentPoly1.monomial(7)) == 0


def _from_roots(factors):
    """ prod (a t - b), returned as (coeffs ascending, roots, leading) """
    coeffs = np.array([1.0])
    for a, b in factors:
        coeffs = npoly.polymul(coeffs, [-b, a])
    leading = float(np.prod([a for a, _ in factors]))
    return [int(round(c)) for c in coeffs], [b / a for a, b in factors], leading


def test_mahler_simple_cases():
    assert mahler_measure(poly("0;-2 1")) == pytest.approx(2.0, abs=1e-12)
    assert mahler_measure(LaurentPoly1.monomial(5)) == pytest.approx(1.0, abs=1e-12)
    assert mahler_measure(LaurentPoly1.monomial(-3, 4)) == pytest.approx(4.0, abs=1e-12)


def test_mahler_matches_jensen():
    rng = np.random.default_rng(7)
    pairs = [(a, b) for a in (1, 2, 3) for b in (-3, -2, -1, 1, 2, 3) if abs(a) != abs(b)]
    for _ in range(50):
        size = int(rng.integers(1, 9))
        factors = [pairs[i] for i in rng.integers(0, len(pairs), size=size)]
        coeffs, roots, leading = _from_roots(factors)
        p = LaurentPoly1.from_coeffs(int(rng.integers(-4, 4)), coeffs)
        expected = mahler_jensen_oracle(roots, leading)
        assert mahler_measure(p) == pytest.approx(expected, rel=1e-10)


def test_mahler_needs_nodes():
    with pytest.raises(DomainError):
        mahler_measure(poly("0;-2 1"), n_points=8)


def test_mahler_converged():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert mahler_measure_converged(poly("0;-2 1"), tol=1e-9) == pytest.approx(2.0)
    # root at -1 sits on the circle
    with pytest.warns(RuntimeWarning):
        mahler_measure_converged(poly("0;1 1"), tol=1e-12, max_points=1024)


def test_root_of_unity_modulus():
    p = poly(MICRO_KNOTS["4_1"][0])
    assert root_of_unity_modulus(p, 1, 2) == pytest.approx(5.0)
    assert root_of_unity_modulus(p, 2, 5) == pytest.approx(root_of_unity_modulus(p, 3, 5))
    assert phase_modulus(p, math.pi) == pytest.approx(5.0)
    for k, n in [(0, 5), (5, 5), (1, 0)]:
        with pytest.raises(DomainError):
            root_of_unity_modulus(p, k, n)


def test_roots_of_unity_vector():
    p = poly(MICRO_KNOTS["6_1"][0])
    vector = roots_of_unity_vector(p, 8)
    assert vector.shape == (4,)
    assert vector[-1] == pytest.approx(9.0)
    assert vector[1] == pytest.approx(root_of_unity_modulus(p, 2, 8))
    with pytest.raises(DomainError):
        roots_of_unity_vector(p, 1)


def test_rescale():
    assert rescale(9.0, 3) == pytest.approx(2.0)
    assert rescale(1.0, 5) == 0.0
    for value, jones_degree in [(0.0, 4), (-1.0, 4), (3.0, 1), (3.0, 0)]:
        with pytest.raises(DomainError):
            rescale(value, jones_degree)


def test_kinds():
    p = poly(MICRO_KNOTS["5_2"][0])
    assert RootOfUnityEval(3, 5)(p) == pytest.approx(root_of_unity_modulus(p, 3, 5))
    assert MahlerMeasure(1024)(p) == pytest.approx(mahler_measure(p, 1024))
    with pytest.raises(DomainError):
        RootOfUnityEval(5, 5)


def test_derive_table():
    rows = derive_table(micro_dataset(), DerivedSettings(mahler_points=1024))
    by_name = {row["name"]: row for row in rows}
    assert by_name["6_3"]["det"] == 13
    assert by_name["6_3"]["degree"] == 6
    assert by_name["6_3"]["det_rescaled"] == pytest.approx(math.log(13) / math.log(6))
    assert by_name["8_20"]["alternating"] is False
    assert all(row["mahler"] >= 1.0 - 1e-9 for row in rows)


def test_derive_table_degree_one():
    ds = micro_dataset().with_records([micro_dataset()[0], make_record("lin", "0;2 1")])
    row = derive_table(ds)[1]
    assert row["det"] == 1
    assert row["det_rescaled"] is None
    assert row["mahler"] == pytest.approx(2.0)
