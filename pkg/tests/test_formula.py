import math

import numpy as np
import pytest

from knotstat.derived_invariants import phase_modulus
from knotstat.exceptions import DomainError, MissingDataError
from knotstat.experiments import REFERENCE_FORMULA, TargetInvariant, distill_formula, golden_section, phase_sweep
from knotstat.experiments.formula import REFERENCE_PHASE
from knotstat.models import Dataset

from .common import determinant_dataset, make_record, random_dataset


def formula_dataset(a, b, c, phase=REFERENCE_PHASE, n=60, seed=1):
    """ vol = a log(|J(e^{i phase})| + b) - c exactly """
    return Dataset(
        [
            make_record(
                record.name,
                record.jones,
                vol=a * math.log(phase_modulus(record.jones, phase) + b) - c,
            )
            for record in random_dataset(n, seed=seed)
        ]
    )


def test_golden_section_on_a_parabola():
    x, value, trajectory = golden_section(lambda t: (t - 2.5) ** 2 + 1.0, 0.0, 10.0, tol=1e-8)
    assert x == pytest.approx(2.5, abs=1e-6)
    assert value == pytest.approx(1.0)
    values = [v for _, v in trajectory]
    assert values == sorted(values, reverse=True)
    assert trajectory[-1] == (x, value)


def test_golden_section_empty_interval():
    with pytest.raises(DomainError):
        golden_section(abs, 1.0, 1.0)


def test_recovers_the_constants():
    fit = distill_formula(formula_dataset(3.0, 2.0, 1.0))
    assert fit.a == pytest.approx(3.0, abs=1e-3)
    assert fit.b == pytest.approx(2.0, abs=1e-3)
    assert fit.c == pytest.approx(1.0, abs=1e-3)
    assert fit.mape < 0.01
    assert fit.mape <= fit.reference_mape
    assert fit.n == 60
    assert fit.phase == REFERENCE_PHASE


def test_trajectory_never_increases():
    fit = distill_formula(formula_dataset(2.0, 5.0, 0.5))
    values = [v for _, v in fit.trajectory]
    assert len(values) > 1
    assert all(later <= earlier for earlier, later in zip(values, values[1:]))
    assert fit.to_dict()["iterations"] == len(fit.trajectory)


def test_prediction_matches_targets():
    ds = formula_dataset(3.0, 2.0, 1.0)
    fit = distill_formula(ds)
    moduli = [phase_modulus(r.jones, REFERENCE_PHASE) for r in ds]
    assert np.allclose(fit.predict(moduli), [r.hyperbolic.vol for r in ds], rtol=1e-4)


def test_recovers_the_reference_constants():
    fit = distill_formula(formula_dataset(*REFERENCE_FORMULA))
    a, b, c = REFERENCE_FORMULA
    assert (fit.a, fit.b, fit.c) == (
        pytest.approx(a, abs=1e-3),
        pytest.approx(b, abs=1e-3),
        pytest.approx(c, abs=1e-3),
    )
    assert fit.mape < 0.01
    assert fit.reference_mape == pytest.approx(0.0, abs=1e-9)


def test_never_worse_than_the_reference_constants():
    records = list(formula_dataset(*REFERENCE_FORMULA))
    outlier = records[0]
    records[0] = make_record(outlier.name, outlier.jones, vol=100.0)
    ds = Dataset(records)

    fit = distill_formula(ds)
    assert fit.objective == "mape"
    assert fit.mape <= fit.reference_mape
    assert fit.to_dict()["objective"] == "mape"
    moduli = [phase_modulus(r.jones, REFERENCE_PHASE) for r in ds]
    refit_mape = 100.0 * np.mean(np.abs(fit.predict(moduli) / [r.hyperbolic.vol for r in ds] - 1.0))
    assert fit.mape == pytest.approx(refit_mape)


def test_least_squares_kept_when_it_wins():
    assert distill_formula(formula_dataset(3.0, 2.0, 1.0)).objective == "mse"


def test_phase_pi_is_the_determinant():
    # |J(-1)| = k + 2 for 1 - k t + t^2
    ds = determinant_dataset(30)
    ds = Dataset(
        [make_record(r.name, r.jones, vol=2.0 * math.log(k + 4.0) - 0.5) for k, r in enumerate(ds, start=1)]
    )
    fit = distill_formula(ds, phase=math.pi)
    assert fit.b == pytest.approx(2.0, abs=1e-3)
    assert fit.a == pytest.approx(2.0, abs=1e-3)


def test_skips_missing_targets():
    records = list(formula_dataset(3.0, 2.0, 1.0, n=10)) + [make_record("bare", "0;1 -3 1")]
    fit = distill_formula(Dataset(records))
    assert fit.n == 10


def test_distill_errors():
    with pytest.raises(MissingDataError):
        distill_formula(formula_dataset(3.0, 2.0, 1.0, n=2))
    # mu_x is 0.0 on every fifth record
    with pytest.raises(DomainError, match="positive"):
        distill_formula(random_dataset(20), target=TargetInvariant.MU_X)
    # one jones polynomial for every record, so log(|J| + b) is constant
    same = Dataset([make_record("s{}".format(i), "0;1 -3 1", vol=1.0 + i) for i in range(5)])
    with pytest.raises(DomainError, match="non-constant"):
        distill_formula(same)


def test_phase_sweep_ranks_the_determinant_first():
    scores = phase_sweep(determinant_dataset(30), [(1, 4), (1, 2), (1, 3)])
    assert (scores[0].k, scores[0].n) == (1, 2)
    assert scores[0].pearson == pytest.approx(1.0)
    assert scores[0].pearson >= scores[1].pearson >= scores[2].pearson
    assert scores[0].to_dict()["n_used"] == 30


def test_phase_sweep_symmetry():
    ds = random_dataset(40, seed=5)
    by_phase = {(s.k, s.n): s.pearson for s in phase_sweep(ds, [(1, 5), (4, 5), (2, 7), (5, 7), (1, 3), (2, 6)])}
    assert by_phase[(1, 5)] == pytest.approx(by_phase[(4, 5)])
    assert by_phase[(2, 7)] == pytest.approx(by_phase[(5, 7)])
    assert by_phase[(1, 3)] == pytest.approx(by_phase[(2, 6)])


def test_phase_sweep_drops_and_undefined():
    records = list(determinant_dataset(10)) + [make_record("short", "0;1 1", vol=3.0)]
    (score,) = phase_sweep(Dataset(records), [(1, 4)])
    assert score.dropped == 1
    assert score.n_used == 10

    flat = determinant_dataset(10, slope=0.0, intercept=3.0)
    (score,) = phase_sweep(flat, [(1, 4)])
    assert score.pearson is None


@pytest.mark.parametrize("phases", [[], [(0, 4)], [(4, 4)], [(1, 0)]])
def test_phase_sweep_rejects(phases):
    with pytest.raises(DomainError):
        phase_sweep(determinant_dataset(5), phases)
