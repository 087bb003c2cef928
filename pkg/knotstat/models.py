import enum
from collections import abc
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional, Tuple

from .exceptions import DataError, DuplicateNameError


__all__ = [
    "LaurentPoly1",
    "LaurentPoly2",
    "HyperbolicInvariants",
    "KnotRecord",
    "Dataset",
    "KnotClass",
    "CHERN_SIMONS_PERIOD",
]


CHERN_SIMONS_PERIOD = 0.5


class KnotClass(enum.Enum):
    ALL = "all"
    ALTERNATING = "alt"
    NON_ALTERNATING = "nonalt"

    def admits(self, record):
        if self is KnotClass.ALL:
            return True
        return bool(record.alternating) == (self is KnotClass.ALTERNATING)


@dataclass(frozen=True)
class LaurentPoly1:
    """
    One-variable integer Laurent polynomial

        coeffs[i] is the coefficient of t^(min_exp + i)

    Always kept in canonical trimmed form: first and last coefficients are
    non-zero. Use ``from_coeffs`` to trim raw input.
    """

    min_exp: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if not coeffs:
            raise DataError("Laurent polynomial needs at least one coefficient")
        if coeffs[0] == 0 or coeffs[-1] == 0:
            raise DataError(
                "Laurent polynomial is not trimmed: {!r}".format(list(coeffs))
            )
        object.__setattr__(self, "min_exp", int(self.min_exp))
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coeffs(cls, min_exp, coeffs):
        coeffs = [int(c) for c in coeffs]
        nonzero = [i for i, c in enumerate(coeffs) if c != 0]
        if not nonzero:
            raise DataError("zero polynomial has no canonical form")
        first, last = nonzero[0], nonzero[-1]
        return cls(min_exp=min_exp + first, coeffs=tuple(coeffs[first:last + 1]))

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls(min_exp=exp, coeffs=(coeff,))

    @property
    def max_exp(self):
        return self.min_exp + len(self.coeffs) - 1

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coefficient(self, exp):
        k = exp - self.min_exp
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __str__(self):
        terms = [
            "{}t^{}".format(c, self.min_exp + i)
            for i, c in enumerate(self.coeffs)
            if c != 0
        ]
        return " + ".join(terms)


@dataclass(frozen=True)
class LaurentPoly2:
    """ Sparse two-variable integer Laurent polynomial, a set of (i, j, c) terms """

    terms: FrozenSet[Tuple[int, int, int]] = frozenset()

    def __post_init__(self):
        terms = frozenset((int(i), int(j), int(c)) for i, j, c in self.terms)
        seen = set()
        for i, j, c in terms:
            if c == 0:
                raise DataError("zero coefficient stored at ({}, {})".format(i, j))
            if (i, j) in seen:
                raise DataError("duplicate exponent pair ({}, {})".format(i, j))
            seen.add((i, j))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_triples(cls, triples: Iterable[Tuple[int, int, int]]):
        # Reject duplicates before the frozenset collapses identical triples
        triples = list(triples)
        pairs = [(i, j) for i, j, _ in triples]
        if len(set(pairs)) != len(pairs):
            raise DataError("duplicate exponent pair in khovanov terms")
        return cls(terms=frozenset(triples))

    @property
    def bounds(self):
        """ (i_min, i_max, j_min, j_max), None for the empty polynomial """
        if not self.terms:
            return None
        i_values = [i for i, _, _ in self.terms]
        j_values = [j for _, j, _ in self.terms]
        return min(i_values), max(i_values), min(j_values), max(j_values)

    def sorted_terms(self):
        return sorted(self.terms)

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class HyperbolicInvariants:
    """
    Hyperbolic targets, each optional

    chern_simons is stored as its representative in [0, 1/2). The longitude
    translation is not stored: with the orientation convention lambda_y = 0
    it is determined by longitude_length.
    """

    vol: Optional[float] = None
    longitude_length: Optional[float] = None
    meridian_length: Optional[float] = None
    mu_x: Optional[float] = None
    mu_y: Optional[float] = None
    cusp_volume: Optional[float] = None
    chern_simons: Optional[float] = None

    _positive = ("vol", "longitude_length", "meridian_length", "cusp_volume")

    def __post_init__(self):
        for name in self.field_names():
            value = getattr(self, name)
            if value is None:
                continue
            value = float(value)
            if value != value or value in (float("inf"), float("-inf")):
                raise DataError("{} must be finite, got {!r}".format(name, value))
            if name in self._positive and value <= 0:
                raise DataError("{} must be positive, got {!r}".format(name, value))
            if name == "chern_simons":
                value = value % CHERN_SIMONS_PERIOD
            object.__setattr__(self, name, value)

    @staticmethod
    def field_names():
        return (
            "vol",
            "longitude_length",
            "meridian_length",
            "mu_x",
            "mu_y",
            "cusp_volume",
            "chern_simons",
        )

    def get(self, name):
        return getattr(self, name)


@dataclass(frozen=True)
class KnotRecord:
    name: str
    crossing_number: int
    alternating: bool
    jones: LaurentPoly1
    khovanov: Optional[LaurentPoly2] = None
    hyperbolic: HyperbolicInvariants = field(default_factory=HyperbolicInvariants)

    def __post_init__(self):
        if not self.name:
            raise DataError("knot record needs a name")
        if int(self.crossing_number) <= 0:
            raise DataError(
                "{}: crossing number must be positive, got {!r}".format(
                    self.name, self.crossing_number
                )
            )


class Dataset(abc.Sequence):
    """
    Ordered, immutable collection of knot records with unique names

    Arguments:

        records (iterable of KnotRecord)

        provenance (str):

            Free form description of where the records came from
            (interfaces put the file path and its sha256 digest here)
    """

    def __init__(self, records=(), provenance=""):
        self._records = tuple(records)
        self.provenance = provenance
        self._index = {}
        duplicates = []
        for position, record in enumerate(self._records):
            if record.name in self._index:
                duplicates.append((position + 1, "duplicate name {!r}".format(record.name)))
            self._index[record.name] = position
        if duplicates:
            raise DuplicateNameError("record names must be unique", rows=duplicates)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return self.with_records(self._records[key])
        return self._records[key]

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __contains__(self, item):
        if isinstance(item, str):
            return item in self._index
        return item in self._records

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self._records == other._records

    def __hash__(self):
        return hash(self._records)

    def __repr__(self):
        return "Dataset({} records, provenance={!r})".format(
            len(self._records), self.provenance
        )

    @property
    def records(self):
        return self._records

    @property
    def names(self):
        return [record.name for record in self._records]

    def by_name(self, name):
        return self._records[self._index[name]]

    def with_records(self, records):
        return Dataset(records, provenance=self.provenance)
