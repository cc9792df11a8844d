import io
import json

from zeromode.errors import InvariantViolationError
from zeromode.report import Report, Table, format_cell, report_schema


def make_table() -> Table:
    table = Table("example", metadata={"R": "1.0"})
    table.add("first", x=1, y=0.25)
    table.add("second", x=2, flag=True)
    return table


def test_columns_in_order_of_appearance() -> None:
    assert make_table().columns == ["quantity", "x", "y", "flag"]


def test_format_cell() -> None:
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(0.1) == "0.1"
    assert format_cell(1e-20) == "1e-20"
    assert format_cell(3) == "3"
    assert format_cell("stenzel") == "stenzel"


def test_csv() -> None:
    stream = io.StringIO()
    make_table().write(stream, "csv")
    assert stream.getvalue() == (
        "# R: 1.0\n"
        "quantity,x,y,flag\n"
        "first,1,0.25,\n"
        "second,2,,true\n"
    )


def test_json() -> None:
    stream = io.StringIO()
    make_table().write(stream, "json")
    report = Report.model_validate_json(stream.getvalue())
    assert report.command == "example"
    assert report.columns == ["quantity", "x", "y", "flag"]
    assert report.rows[1] == {"quantity": "second", "x": 2, "flag": True}
    assert report.metadata == {"R": "1.0"}


def test_schema() -> None:
    schema = json.loads(report_schema())
    assert set(schema["properties"]) == {"command", "columns", "rows", "metadata"}
    assert set(schema["required"]) == {"command", "columns", "rows"}


def test_tag() -> None:
    table = Table("example")
    table.add("delta-level-2", r=1.0)
    table.add("other", r=2.0)
    table.tag({"delta-level": "(3.16)", "delta": "(3.7)"})
    assert table.columns == ["quantity", "equation", "r"]
    assert [row["equation"] for row in table.rows] == ["(3.16)", None]


def test_extend() -> None:
    table = make_table()
    part = Table("example", metadata={"flags": "open-question"})
    part.add("third", x=3)
    part.violation = InvariantViolationError("broken", {"x": 3.0})
    table.extend(part)
    assert [row["quantity"] for row in table.rows] == ["first", "second", "third"]
    assert table.metadata == {"R": "1.0", "flags": "open-question"}
    assert table.violation is part.violation
