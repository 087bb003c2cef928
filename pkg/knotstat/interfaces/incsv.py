import pandas as pd

from ..exceptions import DataError, DatasetNotFound, DuplicateNameError, SchemaError
from ..models import Dataset
from . import fields


__all__ = ("CsvInterface",)


class CsvInterface:
    """
        UTF-8 CSV with a header row

            name,crossings,alternating,jones,vol,longitude_length,meridian_length,
            mu_x,mu_y,cusp_volume,chern_simons,khovanov

        jones: "min_exp;c0 c1 ... ck"
        khovanov: "i,j,c;i,j,c;..." (quoted, it contains commas), empty = absent
        empty numeric field = absent invariant

        Only name, crossings, alternating and jones are required columns.
    """

    format = "csv"

    def __init__(self, reader=pd.read_csv, encoding="utf-8"):
        self.reader = reader
        self.encoding = encoding

    def fetch(self, path):
        try:
            frame = self.reader(
                path, dtype=str, keep_default_na=False, encoding=self.encoding
            )
        except FileNotFoundError:
            raise DatasetNotFound("dataset file not found: {}".format(path))
        except pd.errors.EmptyDataError:
            raise SchemaError("{}: file is empty, a header row is required".format(path))
        except pd.errors.ParserError as e:
            raise SchemaError("{}: not a valid CSV file ({})".format(path, e))

        missing = [c for c in fields.REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise SchemaError(
                "{}: missing required column(s): {}".format(path, ", ".join(missing))
            )

        records, errors = [], []
        for position, row in enumerate(frame.to_dict(orient="records")):
            # Line 1 is the header
            row_number = position + 2
            try:
                jones = fields.parse_jones_text(row.get("jones"))
                khovanov = fields.parse_khovanov_text(row.get("khovanov"))
                records.append((row_number, fields.build_record(row, jones, khovanov)))
            except DataError as e:
                errors.append((row_number, str(e)))
        if errors:
            raise SchemaError("{}: malformed rows".format(path), rows=errors)

        duplicates = fields.check_unique((row, rec.name) for row, rec in records)
        if duplicates:
            raise DuplicateNameError("{}: duplicate knot names".format(path), rows=duplicates)

        return Dataset(
            (rec for _, rec in records),
            provenance=fields.provenance_for(self.format, path),
        )

    def store(self, path, dataset):
        rows = [self._encode(record) for record in dataset]
        frame = pd.DataFrame(rows, columns=list(fields.COLUMNS))
        frame.to_csv(path, index=False, encoding=self.encoding)

    @staticmethod
    def _encode(record):
        row = {
            "name": record.name,
            "crossings": str(record.crossing_number),
            "alternating": "true" if record.alternating else "false",
            "jones": fields.format_jones_text(record.jones),
            "khovanov": fields.format_khovanov_text(record.khovanov),
        }
        for column in fields.NUMERIC_COLUMNS:
            value = record.hyperbolic.get(column)
            # repr keeps all 17 significant digits
            row[column] = "" if value is None else repr(float(value))
        return row
