import csv
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import TextIO

from pydantic import BaseModel

from .config import OutputFormat
from .errors import InvariantViolationError

type Cell = float | int | str | bool | None


class Report(BaseModel):
    command: str
    columns: list[str]
    rows: list[dict[str, Cell]]
    metadata: dict[str, str] = {}


@dataclass
class Table:
    command: str
    metadata: dict[str, str] = field(default_factory=dict)
    rows: list[dict[str, Cell]] = field(default_factory=list)
    # raised after the table is written
    violation: InvariantViolationError | None = None

    def add(self, quantity: str, /, **values: Cell) -> None:
        self.rows.append({"quantity": quantity, **values})

    def extend(self, other: "Table") -> None:
        self.rows.extend(other.rows)
        self.metadata.update(other.metadata)
        if self.violation is None:
            self.violation = other.violation

    def tag(self, equations: Mapping[str, str]) -> None:
        """Put an `equation` column next to `quantity`, empty where no tag is known."""
        self.rows = [
            {"quantity": row["quantity"], "equation": find_tag(equations, row["quantity"]), **row}
            for row in self.rows
        ]

    @property
    def columns(self) -> list[str]:
        columns: dict[str, None] = {}
        for row in self.rows:
            columns.update(dict.fromkeys(row))
        return list(columns)

    def to_report(self) -> Report:
        return Report(
            command=self.command,
            columns=self.columns,
            rows=self.rows,
            metadata=self.metadata,
        )

    def write(self, stream: TextIO, format: OutputFormat) -> None:
        match format:
            case "csv":
                write_csv(self, stream)
            case "json":
                stream.write(self.to_report().model_dump_json(indent=2))
                stream.write("\n")


def find_tag(equations: Mapping[str, str], quantity: Cell) -> str | None:
    # labels like delta-level-2 carry their parameters after the tagged prefix
    name = str(quantity)
    while name:
        if name in equations:
            return equations[name]
        name = name.rpartition("-")[0]
    return None


def format_cell(value: Cell) -> str:
    match value:
        case None:
            return ""
        case bool():
            return "true" if value else "false"
        case float():
            return repr(value)
        case _:
            return str(value)


def write_csv(table: Table, stream: TextIO) -> None:
    for key, value in table.metadata.items():
        stream.write(f"# {key}: {value}\n")

    columns = table.columns
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in table.rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])


def report_schema() -> str:
    return json.dumps(Report.model_json_schema(), indent=2, sort_keys=True)
