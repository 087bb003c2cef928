import math
import os

import numpy as np

from knotstat.models import Dataset, HyperbolicInvariants, KnotRecord, LaurentPoly1, LaurentPoly2


FIXTURE = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "knotstat", "data", "knots_micro.csv"
)

# name -> (jones "min_exp;coeffs", determinant, volume)
MICRO_KNOTS = {
    "4_1": ("-2;1 -1 1 -1 1", 5, 2.0298832128),
    "5_2": ("1;1 -1 2 -1 1 -1", 7, 2.8281220883),
    "6_1": ("-4;1 -1 1 -2 2 -1 1", 9, 3.1639632288),
    "6_2": ("-1;1 -1 2 -2 2 -2 1", 11, 4.4008325161),
    "6_3": ("-3;-1 2 -2 3 -2 2 -1", 13, 5.6930210913),
    "7_2": ("1;1 -1 2 -2 2 -1 1 -1", 11, 3.3317442316),
    "8_20": ("-5;-1 1 -1 2 -1 2 -1", 9, 4.1249032518),
}


def poly(text):
    head, _, body = text.partition(";")
    return LaurentPoly1.from_coeffs(int(head), [int(c) for c in body.split()])


def make_record(name, jones, alternating=True, crossings=None, khovanov=None, **hyperbolic):
    if isinstance(jones, str):
        jones = poly(jones)
    if khovanov is not None and not isinstance(khovanov, LaurentPoly2):
        khovanov = LaurentPoly2.from_triples(khovanov)
    return KnotRecord(
        name=name,
        crossing_number=crossings if crossings is not None else len(jones.coeffs),
        alternating=alternating,
        jones=jones,
        khovanov=khovanov,
        hyperbolic=HyperbolicInvariants(**hyperbolic),
    )


def micro_dataset():
    return Dataset(
        [
            make_record(name, jones, alternating=(name != "8_20"), vol=vol)
            for name, (jones, _, vol) in MICRO_KNOTS.items()
        ],
        provenance="test:micro",
    )


def determinant_dataset(n=40, slope=2.0, intercept=1.0, alternating=lambda k: k % 2 == 0, **targets):
    """
    Records with jones 1 - k t + t^2 (determinant k + 2, degree 2), so the
    rescaled determinant is log2(k + 2). vol = slope * log2(k + 2) + intercept.
    Extra targets are callables of k.
    """
    records = []
    for k in range(1, n + 1):
        x = math.log(k + 2) / math.log(2)
        hyperbolic = {name: f(k) for name, f in targets.items()}
        hyperbolic.setdefault("vol", slope * x + intercept)
        records.append(
            make_record(
                "k{}".format(k),
                LaurentPoly1.from_coeffs(0, [1, -k, 1]),
                alternating=alternating(k),
                **hyperbolic
            )
        )
    return Dataset(records, provenance="test:determinant")


def khovanov_diagonal(jones, offset=0, sign=1):
    """ Single diagonal j = 2 i + offset carrying the jones coefficients """
    return LaurentPoly2.from_triples(
        (i, 2 * i + offset, sign * c) for i, c in enumerate(jones.coeffs, start=jones.min_exp) if c != 0
    )


def random_dataset(n=60, seed=0, with_khovanov=False):
    """ Random jones polynomials with J(1) unconstrained, vol from a fixed smooth map """
    rng = np.random.default_rng(seed)
    records = []
    for r in range(n):
        length = int(rng.integers(4, 9))
        coeffs = [int(c) for c in rng.integers(-3, 4, size=length)]
        coeffs[0] = coeffs[0] or 1
        coeffs[-1] = coeffs[-1] or -1
        jones = LaurentPoly1.from_coeffs(int(rng.integers(-4, 2)), coeffs)
        vol = 1.0 + 0.1 * sum(abs(c) for c in coeffs) + 0.01 * r
        records.append(
            make_record(
                "r{}".format(r),
                jones,
                alternating=bool(r % 3),
                khovanov=khovanov_diagonal(jones) if with_khovanov else None,
                vol=vol,
                mu_x=0.0 if r % 5 == 0 else 0.1 * (r % 7) + 0.05,
            )
        )
    return Dataset(records, provenance="test:random")
