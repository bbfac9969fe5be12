import csv
import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from anharmonic_cli.cli import app
from anharmonic_cli.spectrum import RESULT_COLUMNS

runner = CliRunner()


def test_series_c0_prints_exact_rationals() -> None:
    result = runner.invoke(app, ["series", "c0", "--order", "3", "--json"])

    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)["data"]
    assert data["kind"] == "c0"
    assert data["lines"] == ["1\t1/2", "2\t-1/8", "3\t1/16"]


def test_series_writes_lines_to_file(tmp_path: Path) -> None:
    out = tmp_path / "series" / "c0.tsv"

    result = runner.invoke(
        app, ["series", "c0", "--order", "2", "--out", str(out), "--json"]
    )

    assert result.exit_code == 0, result.output
    assert out.read_text(encoding="utf-8") == "1\t1/2\n2\t-1/8\n"
    assert json.loads(result.stdout)["data"]["out"] == str(out)


def test_series_rejects_energy_dependent_large_v_terms() -> None:
    result = runner.invoke(app, ["series", "rb-large", "--order", "8", "--json"])

    assert result.exit_code == 1
    error = json.loads(result.stdout)["error"]
    assert error["code"] == "invalid_input"
    assert "energy independent" in error["message"]


def test_series_strong_needs_energies() -> None:
    result = runner.invoke(app, ["series", "strong", "--n", "1", "--json"])

    assert result.exit_code == 1
    assert json.loads(result.stdout)["error"]["code"] == "invalid_input"


def test_series_unknown_kind() -> None:
    result = runner.invoke(app, ["series", "unknown"])

    assert result.exit_code == 2


def test_solve_reports_invalid_state_as_record() -> None:
    result = runner.invoke(
        app, ["solve", "--D", "1", "--g", "0.1", "--state", "0,1", "--json"]
    )

    assert result.exit_code == 2
    data = json.loads(result.stdout)["data"]
    assert data["failures"] == 1
    [record] = data["records"]
    assert record["state"] == "0,1"
    assert record["e_var"] is None
    assert record["error"].startswith("invalid_input:")
    assert "timings" not in record


def test_solve_writes_records_and_timings(tmp_path: Path) -> None:
    out = tmp_path / "results.csv"

    result = runner.invoke(
        app,
        [
            "solve",
            "--D",
            "1",
            "--g",
            "0.1",
            "--g",
            "1.0",
            "--state",
            "0,2",
            "--out",
            str(out),
            "--json",
        ],
    )

    assert result.exit_code == 2
    with out.open(newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))

    assert tuple(rows[0]) == RESULT_COLUMNS
    assert [row[1] for row in rows[1:]] == ["0.1", "1"]
    assert (tmp_path / "results.timings.csv").exists()


def test_solve_wavefunction_export_needs_verify(tmp_path: Path) -> None:
    result = runner.invoke(
        app,
        [
            "solve",
            "--D",
            "3",
            "--g",
            "1",
            "--wavefunction-out",
            str(tmp_path / "psi.csv"),
            "--json",
        ],
    )

    assert result.exit_code == 1
    assert json.loads(result.stdout) == {
        "error": {
            "code": "invalid_input",
            "message": "The wavefunction export compares against the mesh.",
            "hint": "Add --verify.",
        }
    }
    assert not (tmp_path / "psi.csv").exists()


def test_solve_rejects_malformed_state() -> None:
    result = runner.invoke(app, ["solve", "--D", "3", "--g", "1", "--state", "bad"])

    assert result.exit_code == 2


def test_solve_rejects_negative_coupling() -> None:
    result = runner.invoke(app, ["solve", "--D", "3", "--g", "-1"])

    assert result.exit_code == 2


@pytest.mark.parametrize(
    "content",
    ["{", "[1, 2]", '{"mesh_size": 400}', '{"unknown": true}'],
)
def test_bad_config_file_exits_with_config_error(
    tmp_path: Path, content: str
) -> None:
    config = tmp_path / "settings.json"
    config.write_text(content)

    result = runner.invoke(
        app,
        ["solve", "--D", "3", "--g", "1", "--config", str(config), "--json"],
    )

    assert result.exit_code == 1
    error = json.loads(result.stdout)["error"]
    assert error["code"] == "config_error"
    assert str(config) in error["message"]


def test_missing_config_file_is_a_usage_error(tmp_path: Path) -> None:
    result = runner.invoke(
        app,
        ["solve", "--D", "3", "--g", "1", "--config", str(tmp_path / "missing.json")],
    )

    assert result.exit_code == 2


def test_table_rejects_unknown_name() -> None:
    result = runner.invoke(app, ["table", "IX"])

    assert result.exit_code == 2


def test_table_without_matching_cells(tmp_path: Path) -> None:
    out = tmp_path / "cells.csv"

    result = runner.invoke(
        app, ["table", "IV", "--D", "1", "--out", str(out), "--json"]
    )

    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)["data"]
    assert data["table"] == "IV"
    assert data["cells"] == []
    assert data["mismatches"] == 0
    assert data["errors"] == 0


def test_strong_rejects_order_out_of_range() -> None:
    result = runner.invoke(app, ["strong", "--D", "1", "--order", "99"])

    assert result.exit_code == 2


@pytest.mark.slow
def test_table_v_partial_sums() -> None:
    result = runner.invoke(app, ["table", "V", "--D", "1", "--json"])

    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)["data"]
    assert data["errors"] == 0
    assert data["mismatches"] == 0
    quantities = [cell["quantity"] for cell in data["cells"]]
    assert quantities[0] == "partial_sum_0"
    assert quantities[-1] == "closed_form"


@pytest.mark.slow
def test_table_i_single_cell(tmp_path: Path) -> None:
    out = tmp_path / "table_i.json"

    result = runner.invoke(
        app,
        [
            "table",
            "I",
            "--D",
            "1",
            "--g",
            "0.1",
            "--out",
            str(out),
            "--format",
            "json",
            "--json",
        ],
    )

    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)["data"]
    assert data["errors"] == 0

    cells = {cell["quantity"]: cell for cell in data["cells"]}
    assert cells["e_var"]["status"] == "ok"
    assert cells["e_var"]["dimension"] == 1
    assert cells["e_var"]["coupling"] == 0.1

    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(data["cells"])
    assert json.loads(lines[0])["table"] == "I"


@pytest.mark.slow
def test_strong_order_zero(tmp_path: Path) -> None:
    out = tmp_path / "strong.jsonl"

    result = runner.invoke(
        app, ["strong", "--D", "1", "--order", "0", "--out", str(out), "--json"]
    )

    assert result.exit_code == 0, result.output
    [record] = json.loads(result.stdout)["data"]["records"]
    assert record["expansion"]["dimension"] == 1
    assert record["implied_epsilon2"] == []
    assert len(out.read_text(encoding="utf-8").splitlines()) == 1


def test_series_accepts_fractional_dimensions() -> None:
    result = runner.invoke(
        app,
        ["series", "rb-small", "--D", "0.25", "--g", "0", "--order", "2", "--json"],
    )

    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)["data"]
    assert data["dimension"] == 0.25
    assert data["lines"] == ["1\t1/1"]


@pytest.mark.parametrize(
    "args",
    [
        ["series", "rb-small", "--D", "0"],
        ["solve", "--D", "-1", "--g", "1"],
        ["table", "I", "--D", "0"],
    ],
)
def test_non_positive_dimensions_are_usage_errors(args: list[str]) -> None:
    result = runner.invoke(app, args)

    assert result.exit_code == 2
