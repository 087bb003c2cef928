import ujson

from ..exceptions import DataError, DatasetNotFound, DuplicateNameError, SchemaError
from ..models import Dataset
from . import fields


__all__ = ("JsonInterface",)


class JsonInterface:
    """
        encoder & decoder:

            e.g. json, ujson, simplejson etc..
            Default ujson

        An array of objects with the CSV field names. Polynomials are
        {"min_exp": int, "coeffs": [int]} and [{"i": int, "j": int, "c": int}],
        absent invariants are null or missing.
    """

    format = "json"

    def __init__(self, encoder=ujson.dumps, decoder=ujson.loads, encoding="utf-8"):
        self.encoder = encoder
        self.decoder = decoder
        self.encoding = encoding

    def fetch(self, path):
        try:
            with open(path, "r", encoding=self.encoding) as f:
                text = f.read()
        except FileNotFoundError:
            raise DatasetNotFound("dataset file not found: {}".format(path))
        try:
            items = self.decoder(text)
        except ValueError as e:
            raise SchemaError("{}: not valid JSON ({})".format(path, e))
        if not isinstance(items, list):
            raise SchemaError("{}: top level must be an array of knot objects".format(path))

        records, errors = [], []
        for position, item in enumerate(items):
            row_number = position + 1
            if not isinstance(item, dict):
                errors.append((row_number, "entry is not an object"))
                continue
            missing = [c for c in fields.REQUIRED_COLUMNS if c not in item]
            if missing:
                errors.append((row_number, "missing field(s): {}".format(", ".join(missing))))
                continue
            try:
                jones = fields.parse_jones_object(item["jones"])
                khovanov = fields.parse_khovanov_object(item.get("khovanov"))
                records.append((row_number, fields.build_record(item, jones, khovanov)))
            except DataError as e:
                errors.append((row_number, str(e)))
        if errors:
            raise SchemaError("{}: malformed entries".format(path), rows=errors)

        duplicates = fields.check_unique((row, rec.name) for row, rec in records)
        if duplicates:
            raise DuplicateNameError("{}: duplicate knot names".format(path), rows=duplicates)

        return Dataset(
            (rec for _, rec in records),
            provenance=fields.provenance_for(self.format, path),
        )

    def store(self, path, dataset):
        items = [self._encode(record) for record in dataset]
        with open(path, "w", encoding=self.encoding) as f:
            f.write(self.encoder(items))

    @staticmethod
    def _encode(record):
        item = {
            "name": record.name,
            "crossings": record.crossing_number,
            "alternating": bool(record.alternating),
            "jones": fields.format_jones_object(record.jones),
            "khovanov": fields.format_khovanov_object(record.khovanov),
        }
        for column in fields.NUMERIC_COLUMNS:
            value = record.hyperbolic.get(column)
            item[column] = None if value is None else float(value)
        return item
