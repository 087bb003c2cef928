from .models import (  # noqa: F401  imported but unused
    Dataset,
    HyperbolicInvariants,
    KnotClass,
    KnotRecord,
    LaurentPoly1,
    LaurentPoly2,
)

from .exceptions import DataError, KnotstatError, NumericError  # noqa: F401  imported but unused

from .knot_data import parse_dataset, serialize_dataset  # noqa: F401  imported but unused

from .interfaces import CsvInterface, JsonInterface  # noqa: F401  imported but unused
