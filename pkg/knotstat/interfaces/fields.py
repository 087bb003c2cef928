import math

from cryptography.hazmat.backends import default_backend
from cryptography.hazmat.primitives import hashes

from ..exceptions import DataError
from ..models import HyperbolicInvariants, KnotRecord, LaurentPoly1, LaurentPoly2


COLUMNS = (
    "name",
    "crossings",
    "alternating",
    "jones",
    "vol",
    "longitude_length",
    "meridian_length",
    "mu_x",
    "mu_y",
    "cusp_volume",
    "chern_simons",
    "khovanov",
)

REQUIRED_COLUMNS = ("name", "crossings", "alternating", "jones")

NUMERIC_COLUMNS = HyperbolicInvariants.field_names()


def file_digest(path):
    digest = hashes.Hash(hashes.SHA256(), backend=default_backend())
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.finalize().hex()


def provenance_for(fmt, path):
    return "{}:{} sha256:{}".format(fmt, path, file_digest(path))


def is_blank(value):
    if value is None:
        return True
    if isinstance(value, float) and math.isnan(value):
        return True
    return isinstance(value, str) and value.strip() == ""


def parse_int(value, what):
    if isinstance(value, bool):
        raise DataError("{} must be an integer, got {!r}".format(what, value))
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    try:
        return int(str(value).strip())
    except ValueError:
        raise DataError("{} must be an integer, got {!r}".format(what, value))


def parse_bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text == "true":
        return True
    if text == "false":
        return False
    raise DataError("alternating must be true or false, got {!r}".format(value))


def parse_float(value, what):
    if is_blank(value):
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        raise DataError("{} must be a real number, got {!r}".format(what, value))


#### ------------ Text grammar (CSV) ------------- ####


def parse_jones_text(text):
    """ "min_exp;c0 c1 ... ck" """
    if is_blank(text):
        raise DataError("jones polynomial is required")
    head, sep, body = str(text).partition(";")
    if not sep:
        raise DataError("jones must look like 'min_exp;c0 c1 ...', got {!r}".format(text))
    min_exp = parse_int(head, "jones min_exp")
    coeffs = [parse_int(c, "jones coefficient") for c in body.split()]
    if not coeffs:
        raise DataError("jones has no coefficients")
    return LaurentPoly1.from_coeffs(min_exp, coeffs)


def format_jones_text(poly):
    return "{};{}".format(poly.min_exp, " ".join(str(c) for c in poly.coeffs))


def parse_khovanov_text(text):
    """ "i,j,c;i,j,c;..." with the empty string meaning absent """
    if is_blank(text):
        return None
    triples = []
    for chunk in str(text).split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split(",")
        if len(parts) != 3:
            raise DataError("khovanov term must be 'i,j,c', got {!r}".format(chunk))
        triples.append(tuple(parse_int(p, "khovanov entry") for p in parts))
    return LaurentPoly2.from_triples(triples)


def format_khovanov_text(poly):
    if poly is None:
        return ""
    return ";".join("{},{},{}".format(i, j, c) for i, j, c in poly.sorted_terms())


#### ------------ Structured grammar (JSON) ------------- ####


def parse_jones_object(obj):
    if not isinstance(obj, dict) or "min_exp" not in obj or "coeffs" not in obj:
        raise DataError("jones must be an object with min_exp and coeffs")
    coeffs = [parse_int(c, "jones coefficient") for c in obj["coeffs"]]
    if not coeffs:
        raise DataError("jones has no coefficients")
    return LaurentPoly1.from_coeffs(parse_int(obj["min_exp"], "jones min_exp"), coeffs)


def format_jones_object(poly):
    return {"min_exp": poly.min_exp, "coeffs": list(poly.coeffs)}


def parse_khovanov_object(obj):
    if obj is None:
        return None
    if not isinstance(obj, list):
        raise DataError("khovanov must be a list of {i, j, c} objects")
    triples = []
    for term in obj:
        try:
            triples.append(
                (
                    parse_int(term["i"], "khovanov i"),
                    parse_int(term["j"], "khovanov j"),
                    parse_int(term["c"], "khovanov c"),
                )
            )
        except (KeyError, TypeError):
            raise DataError("khovanov term must have i, j and c, got {!r}".format(term))
    return LaurentPoly2.from_triples(triples)


def format_khovanov_object(poly):
    if poly is None:
        return None
    return [{"i": i, "j": j, "c": c} for i, j, c in poly.sorted_terms()]


#### ------------ Records ------------- ####


def build_record(fields, jones, khovanov):
    name = fields.get("name")
    if is_blank(name):
        raise DataError("name is required")
    hyperbolic = HyperbolicInvariants(
        **{column: parse_float(fields.get(column), column) for column in NUMERIC_COLUMNS}
    )
    return KnotRecord(
        name=str(name).strip(),
        crossing_number=parse_int(fields.get("crossings"), "crossings"),
        alternating=parse_bool(fields.get("alternating")),
        jones=jones,
        khovanov=khovanov,
        hyperbolic=hyperbolic,
    )


def check_unique(names_with_rows):
    """ names_with_rows: iterable of (row_number, name); returns the offending rows """
    first_seen = {}
    duplicates = []
    for row, name in names_with_rows:
        if name in first_seen:
            duplicates.append(
                (row, "duplicate name {!r} (first seen on row {})".format(name, first_seen[name]))
            )
        else:
            first_seen[name] = row
    return duplicates
