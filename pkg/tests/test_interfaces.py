import re

import pytest
import ujson

from knotstat.exceptions import DataError, DatasetNotFound, DuplicateNameError, SchemaError
from knotstat.interfaces import CsvInterface, JsonInterface, interface_for
from knotstat.interfaces import fields
from knotstat.knot_data import parse_dataset, serialize_dataset
from .common import FIXTURE, MICRO_KNOTS, khovanov_diagonal, make_record, micro_dataset

HEADER = ",".join(fields.COLUMNS) + "\n"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_fixture_loads():
    ds = CsvInterface().fetch(FIXTURE)
    assert len(ds) == 8
    for name, (jones, _, vol) in MICRO_KNOTS.items():
        record = ds.by_name(name)
        assert fields.format_jones_text(record.jones) == jones
        assert record.hyperbolic.vol == pytest.approx(vol)
    assert ds.by_name("3_1").hyperbolic.vol is None
    assert ds.by_name("8_20").alternating is False
    assert re.match(r"^csv:.+ sha256:[0-9a-f]{64}$", ds.provenance)


def test_provenance_tracks_content(tmp_path):
    first = write(tmp_path, "a.csv", HEADER + "4_1,4,true,-2;1 -1 1 -1 1,,,,,,,,\n")
    second = write(tmp_path, "b.csv", HEADER + "4_1,4,true,-2;1 -1 1 -1 1,2.0,,,,,,,\n")
    digest = fields.file_digest(first)
    assert len(digest) == 64
    assert digest == fields.file_digest(first)
    assert digest != fields.file_digest(second)


def test_malformed_rows_are_collected(tmp_path):
    path = write(
        tmp_path,
        "bad.csv",
        HEADER
        + "4_1,4,true,-2;1 -1 1 -1 1,2.03,,,,,,,\n"
        + "x,4,maybe,0;1,,,,,,,,\n"
        + "y,4,true,0;1,-1.0,,,,,,,\n",
    )
    with pytest.raises(SchemaError) as e:
        CsvInterface().fetch(path)
    assert [row for row, _ in e.value.rows] == [3, 4]
    assert "row 3" in str(e.value)


def test_missing_required_column(tmp_path):
    path = write(tmp_path, "cols.csv", "name,crossings,jones\n4_1,4,-2;1 -1 1 -1 1\n")
    with pytest.raises(SchemaError):
        CsvInterface().fetch(path)


def test_duplicate_names(tmp_path):
    row = "4_1,4,true,-2;1 -1 1 -1 1,,,,,,,,\n"
    path = write(tmp_path, "dup.csv", HEADER + row + row)
    with pytest.raises(DuplicateNameError) as e:
        CsvInterface().fetch(path)
    assert e.value.rows[0][0] == 3


def test_missing_file(tmp_path):
    with pytest.raises(DatasetNotFound):
        CsvInterface().fetch(str(tmp_path / "nope.csv"))
    with pytest.raises(DataError):
        JsonInterface().fetch(str(tmp_path / "nope.json"))


def test_khovanov_text_grammar():
    kh = fields.parse_khovanov_text("0,1,1;2,5,-3")
    assert kh.sorted_terms() == [(0, 1, 1), (2, 5, -3)]
    assert fields.format_khovanov_text(kh) == "0,1,1;2,5,-3"
    assert fields.parse_khovanov_text("") is None
    with pytest.raises(DataError):
        fields.parse_khovanov_text("0,1")


@pytest.mark.parametrize("text", ["", "1 2 3", "a;1", "0;"])
def test_bad_jones_text(text):
    with pytest.raises(DataError):
        fields.parse_jones_text(text)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_serialize_then_parse(tmp_path, fmt):
    jones = micro_dataset().by_name("6_2").jones
    ds = micro_dataset().with_records(
        list(micro_dataset())
        + [
            make_record(
                "kh",
                jones,
                khovanov=khovanov_diagonal(jones, offset=1),
                vol=1.0 / 3.0,
                mu_x=0.0,
                chern_simons=0.123456789012345,
            )
        ]
    )
    path = str(tmp_path / "ds.{}".format(fmt))
    serialize_dataset(ds, path)
    back = parse_dataset(path)
    assert back == ds
    assert back.by_name("kh").hyperbolic.vol == 1.0 / 3.0


def test_json_shape(tmp_path):
    path = write(tmp_path, "obj.json", ujson.dumps({"name": "4_1"}))
    with pytest.raises(SchemaError):
        JsonInterface().fetch(path)

    entries = [
        {"name": "4_1", "crossings": 4, "alternating": True, "jones": {"min_exp": -2, "coeffs": [1, -1, 1, -1, 1]}},
        {"name": "5_2", "crossings": 5, "alternating": True},
    ]
    path = write(tmp_path, "rows.json", ujson.dumps(entries))
    with pytest.raises(SchemaError) as e:
        JsonInterface().fetch(path)
    assert [row for row, _ in e.value.rows] == [2]


def test_interface_for():
    assert isinstance(interface_for("a.CSV"), CsvInterface)
    assert isinstance(interface_for("a.json"), JsonInterface)
    assert isinstance(interface_for("a.txt", "json"), JsonInterface)
    with pytest.raises(DataError):
        interface_for("a.xlsx")
