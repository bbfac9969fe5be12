import json
import math
from pathlib import Path

from pydantic import BaseModel

from anharmonic_cli.utils.export import (
    format_cell,
    render_csv,
    render_json_lines,
    write_records,
)


class Params(BaseModel):
    a0: float
    b3: float


class Row(BaseModel):
    dimension: float
    energy: float | None
    params: Params | None = None


def test_format_cell() -> None:
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(math.nan) == ""
    assert format_cell(1.0529) == "1.0529"
    assert format_cell(1 / 3) == "0.333333333333"
    assert format_cell((0.5, 1.25)) == "0.5;1.25"
    assert format_cell("0,1") == "0,1"


def test_render_csv_flattens_nested_records() -> None:
    rows = [Row(dimension=1, energy=1.5, params=Params(a0=1.0, b3=2.0))]

    content = render_csv(rows)

    assert content == "dimension,energy,params.a0,params.b3\r\n1,1.5,1,2\r\n"


def test_render_csv_uses_the_given_columns() -> None:
    rows = [Row(dimension=2, energy=None), {"dimension": 3.0, "energy": 0.25}]

    content = render_csv(rows, ["dimension", "energy", "params.a0"])

    assert content.splitlines() == [
        "dimension,energy,params.a0",
        "2,,",
        "3,0.25,",
    ]


def test_json_lines_replace_non_finite_values() -> None:
    content = render_json_lines([{"energy": math.inf, "values": [1.0, math.nan]}])

    assert json.loads(content) == {"energy": None, "values": [1.0, None]}


def test_write_records_creates_parent_directories(tmp_path: Path) -> None:
    path = tmp_path / "out" / "records.json"

    write_records(path, [Row(dimension=1, energy=2.0)], "json")

    assert json.loads(path.read_text()) == {
        "dimension": 1.0,
        "energy": 2.0,
        "params": None,
    }
