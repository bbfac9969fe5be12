import json
import subprocess
import sys
from collections.abc import Callable, Iterator
from inspect import signature
from types import FunctionType
from typing import Any

import pytest
import typer
from pydantic import BaseModel
from typer.testing import CliRunner

from anharmonic_cli.cli import app
from anharmonic_cli.utils import cli as cli_utils
from anharmonic_cli.utils.cli import (
    AnharmonicStyle,
    AnharmonicToolkit,
    format_number,
    get_rich_toolkit,
)
from anharmonic_cli.utils.execution import JsonOutputOption

runner = CliRunner()


def _get_command_name(callback: FunctionType, configured_name: str | None) -> str:
    if configured_name is not None:
        return configured_name

    return callback.__name__.replace("_", "-")


def _iter_cli_commands(typer_app: typer.Typer) -> Iterator[tuple[str, FunctionType]]:
    for command_info in typer_app.registered_commands:
        assert isinstance(command_info.callback, FunctionType)
        callback = command_info.callback

        yield _get_command_name(callback, command_info.name), callback


def _has_json_output_option(callback: Callable[..., Any]) -> bool:
    return any(
        parameter.annotation == JsonOutputOption
        for parameter in signature(callback).parameters.values()
    )


class EnergyOutput(BaseModel):
    energy: float


def test_shows_help() -> None:
    result = runner.invoke(app, ["--help"])

    assert result.exit_code == 0
    assert "Usage:" in result.output
    for command in ("solve", "table", "series", "strong", "fit"):
        assert command in result.output


def test_shows_help_without_args() -> None:
    result = runner.invoke(app, [])

    assert result.exit_code == 2
    assert "Usage:" in result.output


def test_script() -> None:
    result = subprocess.run(
        [sys.executable, "-m", "coverage", "run", "-m", "anharmonic_cli", "--help"],
        capture_output=True,
        encoding="utf-8",
    )
    assert "Usage" in result.stdout


def test_version() -> None:
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0, result.output
    assert "Anharmonic CLI version:" in result.output


@pytest.mark.parametrize(
    ("command_path", "callback"),
    [
        pytest.param(command_path, callback, id=command_path)
        for command_path, callback in _iter_cli_commands(app)
    ],
)
def test_cli_commands_include_json_output_option(
    command_path: str, callback: Callable[..., Any]
) -> None:
    assert _has_json_output_option(callback), (
        f"{command_path} is missing JsonOutputOption"
    )


def test_uses_anharmonic_style() -> None:
    toolkit = get_rich_toolkit()
    assert isinstance(toolkit, AnharmonicToolkit)
    assert isinstance(toolkit.style, AnharmonicStyle)
    assert toolkit.mode == "human"


def test_strip_rich_markup_preserves_empty_hint() -> None:
    assert cli_utils._strip_rich_markup(None) is None
    assert cli_utils._strip_rich_markup("[blue]--verify[/]") == "--verify"


def test_format_number() -> None:
    assert format_number(None) == "[dim]n/a[/]"
    assert format_number(1.0529531, 4) == "1.053"


def test_toolkit_success_prints_json_envelope() -> None:
    test_app = typer.Typer()

    @test_app.command()
    def command(json_output: JsonOutputOption = False) -> None:
        with get_rich_toolkit(minimal=True, json_output=json_output) as toolkit:
            toolkit.success(EnergyOutput(energy=1.5), hint="add --verify")

    result = runner.invoke(test_app, env={"ANHARMONIC_JSON": "1"})

    assert result.exit_code == 0
    assert json.loads(result.stdout) == {
        "data": {"energy": 1.5},
        "hint": "add --verify",
    }


def test_toolkit_fail_prints_json_error_and_exits() -> None:
    test_app = typer.Typer()

    @test_app.command()
    def command(json_output: JsonOutputOption = False) -> None:
        with get_rich_toolkit(minimal=True, json_output=json_output) as toolkit:
            toolkit.fail(
                "not_converged",
                "No [bold]plateau[/bold] in the scale scan.",
                hint="Raise [blue]--mesh-N[/].",
                exit_code=2,
            )

    result = runner.invoke(test_app, env={"ANHARMONIC_JSON": "1"})

    assert result.exit_code == 2
    assert json.loads(result.stdout) == {
        "error": {
            "code": "not_converged",
            "message": "No plateau in the scale scan.",
            "hint": "Raise --mesh-N.",
        }
    }
