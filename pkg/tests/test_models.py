import pytest

from knotstat.exceptions import DataError, DuplicateNameError
from knotstat.models import Dataset, HyperbolicInvariants, KnotClass, LaurentPoly1, LaurentPoly2
from .common import make_record, micro_dataset


def test_laurent_poly_is_trimmed():
    p = LaurentPoly1.from_coeffs(-3, [0, 0, 1, -1, 0])
    assert p.min_exp == -1
    assert p.coeffs == (1, -1)
    assert p.max_exp == 0
    assert p.coefficient(-1) == 1
    assert p.coefficient(5) == 0


@pytest.mark.parametrize("coeffs", [(0, 1), (1, 0), ()])
def test_untrimmed_poly_rejected(coeffs):
    with pytest.raises(DataError):
        LaurentPoly1(min_exp=0, coeffs=coeffs)


def test_zero_poly_has_no_canonical_form():
    with pytest.raises(DataError):
        LaurentPoly1.from_coeffs(0, [0, 0])


def test_khovanov_terms():
    kh = LaurentPoly2.from_triples([(0, 1, 1), (2, 5, -1), (-1, -3, 2)])
    assert kh.bounds == (-1, 2, -3, 5)
    assert kh.sorted_terms()[0] == (-1, -3, 2)
    assert len(kh) == 3
    assert LaurentPoly2().bounds is None


@pytest.mark.parametrize(
    "triples", [[(0, 0, 1), (0, 0, 2)], [(0, 0, 1), (0, 0, 1)], [(1, 1, 0)]]
)
def test_khovanov_rejects_duplicates_and_zeros(triples):
    with pytest.raises(DataError):
        LaurentPoly2.from_triples(triples)


def test_chern_simons_is_reduced():
    h = HyperbolicInvariants(chern_simons=0.75)
    assert h.chern_simons == pytest.approx(0.25)
    assert HyperbolicInvariants(chern_simons=-0.1).chern_simons == pytest.approx(0.4)


@pytest.mark.parametrize("field", ["vol", "meridian_length", "cusp_volume"])
def test_positive_fields(field):
    with pytest.raises(DataError):
        HyperbolicInvariants(**{field: 0.0})


def test_non_finite_rejected():
    with pytest.raises(DataError):
        HyperbolicInvariants(mu_x=float("nan"))


def test_dataset_names_unique():
    record = make_record("4_1", "-2;1 -1 1 -1 1", vol=2.0)
    with pytest.raises(DuplicateNameError):
        Dataset([record, record])


def test_dataset_sequence():
    ds = micro_dataset()
    assert len(ds) == 7
    assert "6_2" in ds
    assert ds.by_name("6_2").hyperbolic.vol == pytest.approx(4.4008325161)
    head = ds[:3]
    assert isinstance(head, Dataset)
    assert head.names == ["4_1", "5_2", "6_1"]
    assert head.provenance == ds.provenance
    assert ds.with_records(ds) == ds


def test_knot_class_admits():
    alt = make_record("a", "0;1 1", alternating=True)
    non = make_record("n", "0;1 1", alternating=False)
    assert KnotClass.ALL.admits(alt) and KnotClass.ALL.admits(non)
    assert KnotClass.ALTERNATING.admits(alt) and not KnotClass.ALTERNATING.admits(non)
    assert KnotClass.NON_ALTERNATING.admits(non) and not KnotClass.NON_ALTERNATING.admits(alt)
