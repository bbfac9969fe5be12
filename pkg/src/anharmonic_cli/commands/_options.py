from enum import Enum
from pathlib import Path
from typing import Annotated, Any, NoReturn

import typer

from anharmonic_cli.config import ConfigError, Settings
from anharmonic_cli.core import StateLabel
from anharmonic_cli.utils.cli import AnharmonicToolkit
from anharmonic_cli.utils.errors import (
    CONFIG_ERROR_EXIT_CODE,
    NUMERICAL_FAILURE_EXIT_CODE,
    AnharmonicError,
    InvalidInputError,
)


class MeshKindChoice(str, Enum):
    laguerre = "laguerre"
    laguerre_regularized = "laguerre_regularized"
    hermite = "hermite"


class FormatChoice(str, Enum):
    csv = "csv"
    json = "json"


def choice_value(choice: Enum | None) -> str | None:
    return None if choice is None else str(choice.value)


def _parse_states(values: list[str] | None) -> list[str] | None:
    for value in values or []:
        try:
            StateLabel.parse(value)
        except InvalidInputError as e:
            raise typer.BadParameter(e.message) from e

    return values


def positive_dimension(value: float) -> float:
    if value <= 0:
        raise typer.BadParameter("D must be positive")

    return value


def _positive_dimensions(values: list[float] | None) -> list[float] | None:
    for value in values or []:
        positive_dimension(value)

    return values


DimensionsOption = Annotated[
    list[float],
    typer.Option(
        "--D", help="Space dimension D > 0 (repeatable).", callback=_positive_dimensions
    ),
]
OptionalDimensionsOption = Annotated[
    list[float] | None,
    typer.Option(
        "--D", help="Only these dimensions (repeatable).", callback=_positive_dimensions
    ),
]
ConfigOption = Annotated[
    Path | None,
    typer.Option(
        "--config",
        help="JSON settings file; explicit flags take precedence.",
        exists=True,
        dir_okay=False,
    ),
]
OutputPathOption = Annotated[
    Path | None,
    typer.Option("--out", help="Write the records to this file."),
]
FormatOption = Annotated[
    FormatChoice | None,
    typer.Option("--format", help="File format for --out: csv or json lines."),
]
MeshSizeOption = Annotated[
    int | None,
    typer.Option("--mesh-N", help="Number of mesh points (5 to 50).", min=5, max=50),
]
MeshKindOption = Annotated[
    MeshKindChoice | None,
    typer.Option("--mesh-kind", help="Lagrange mesh used for verification."),
]
StatesOption = Annotated[
    list[str] | None,
    typer.Option(
        "--state",
        help="State as 'n_r,l' (repeatable). For D = 1 use 'n,0'.",
        callback=_parse_states,
    ),
]


def resolve_settings(
    toolkit: AnharmonicToolkit, config: Path | None, **overrides: Any
) -> Settings:
    try:
        return Settings.resolve(config, **overrides)
    except ConfigError as e:
        toolkit.fail(
            e.code,
            e.message,
            hint="Check the keys and types in the [blue]--config[/] file.",
            exit_code=CONFIG_ERROR_EXIT_CODE,
        )


def fail_numerical(toolkit: AnharmonicToolkit, error: AnharmonicError) -> NoReturn:
    toolkit.fail(
        error.code,
        error.message,
        hint="Run with [blue]ANHARMONIC_DEBUG=1[/] to see the solver log.",
        exit_code=NUMERICAL_FAILURE_EXIT_CODE,
    )


def parse_states(values: list[str] | None) -> list[StateLabel]:
    return [StateLabel.parse(value) for value in values or ["0,0"]]
