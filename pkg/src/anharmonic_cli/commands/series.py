import logging
from enum import Enum
from typing import Annotated, Any

import typer
from pydantic import BaseModel
from rich_toolkit import RichToolkit

from anharmonic_cli.commands._options import (
    OutputPathOption,
    fail_numerical,
    positive_dimension,
)
from anharmonic_cli.core import PotentialSpec
from anharmonic_cli.nonlinearization import weak_coupling_energies
from anharmonic_cli.series import (
    c_recurrences,
    correction_expansions,
    gb_strong_corrections,
    gb_weak_corrections,
    rb_large_v_series,
    rb_small_v_series,
    semiclassical_phases,
    strong_small_u_series,
)
from anharmonic_cli.series.riccati import Regime
from anharmonic_cli.utils.cli import get_rich_toolkit
from anharmonic_cli.utils.errors import AnharmonicError, InvalidInputError
from anharmonic_cli.utils.execution import JsonOutputOption

logger = logging.getLogger(__name__)


class SeriesKind(str, Enum):
    z = "z"
    c0 = "c0"
    c2 = "c2"
    rb_small = "rb-small"
    rb_large = "rb-large"
    strong = "strong"
    strong_small_u = "strong-small-u"
    y_small = "y-small"
    y_large = "y-large"
    phases = "phases"


class SeriesOutput(BaseModel):
    kind: str
    dimension: float
    lines: list[str]
    out: str | None = None


def _render_series_output(data: SeriesOutput, toolkit: RichToolkit) -> None:
    toolkit.print_title(f"series {data.kind}")
    toolkit.print_line()

    for line in data.lines:
        toolkit.print(line.replace("\t", "  "), bullet=False)

    if data.out:
        toolkit.print_line()
        toolkit.print(f"Series written to [blue]{data.out}[/]")


def _weak_energies(dimension: float, count: int) -> list[float]:
    """eps_0 ... eps_(count-1) of the cubic weak-coupling expansion."""
    if count <= 1:
        return [dimension][:count]

    return [dimension, *weak_coupling_energies(dimension, count - 1)]


def _require(energies: list[float] | None, count: int, kind: str) -> list[float]:
    if energies is None or len(energies) < count:
        raise InvalidInputError(
            f"The {kind} series needs {count} energies, pass them with --energy"
        )

    return energies


def series_lines(
    kind: SeriesKind,
    dimension: float,
    coupling: float,
    n: int,
    order: int,
    energies: list[float] | None,
    radius: float = 1.0,
) -> list[str]:
    spec = PotentialSpec.cubic(dimension, coupling)

    if kind is SeriesKind.phases:
        phases = semiclassical_phases(spec, n, radius, energies=energies)
        return [f"G{k}\t{value!r}" for k, value in enumerate(phases.values)]

    if kind is SeriesKind.z:
        # the Taylor jets of Z_n do not depend on g
        table = gb_weak_corrections(
            PotentialSpec.cubic(dimension, 1.0),
            energies or _weak_energies(dimension, max(n - 1, 1)),
            n,
            order=order + 3 * n + 2,
        )
        return table.taylor(n).truncate(order + 1).to_lines()

    if kind is SeriesKind.c0:
        return [f"{k}\t{c}" for k, c in enumerate(c_recurrences(order).c0, start=1)]

    if kind is SeriesKind.c2:
        return [f"{k}\t{c}" for k, c in enumerate(c_recurrences(order).c2, start=1)]

    if kind is SeriesKind.rb_small:
        energy = energies[0] if energies else dimension
        return rb_small_v_series(spec, energy, order).to_lines()

    if kind is SeriesKind.rb_large:
        return rb_large_v_series(spec, order).to_lines()

    if kind is SeriesKind.strong:
        values = _require(energies, n + 1, kind.value)
        table = gb_strong_corrections(spec, values, n)
        return table.strong[n].to_lines()

    if kind is SeriesKind.strong_small_u:
        values = _require(energies, 1, kind.value)
        return strong_small_u_series(spec, values[0], coupling, order).to_lines()

    regime: Regime = "small_v" if kind is SeriesKind.y_small else "large_v"
    eps1, eps2, eps3 = (
        _require(energies, 3, kind.value)[:3]
        if energies
        else weak_coupling_energies(dimension, 3)
    )
    expansions = correction_expansions(dimension, eps1, eps2, eps3, regime)

    return [
        f"{name}\t{line}"
        for name, expansion in expansions.items()
        for line in expansion.to_lines()
    ]


def series(
    kind: Annotated[SeriesKind, typer.Argument(help="Which series to export.")],
    dimension: Annotated[
        float,
        typer.Option(
            "--D", help="Space dimension D > 0.", callback=positive_dimension
        ),
    ] = 1.0,
    coupling: Annotated[
        float,
        typer.Option(
            "--g", help="Coupling g, or lambda~ for the strong small-u series.", min=0
        ),
    ] = 1.0,
    n: Annotated[
        int, typer.Option("--n", "--Z", help="Correction index n.", min=0, max=12)
    ] = 0,
    order: Annotated[
        int, typer.Option("--order", help="Number of terms or truncation order.", min=1)
    ] = 8,
    energies: Annotated[
        list[float] | None,
        typer.Option(
            "--energy",
            help="Energies feeding the recurrences, lowest first (repeatable).",
        ),
    ] = None,
    radius: Annotated[
        float,
        typer.Option("--r", help="Radius at which the phases G_0 ... G_n are evaluated."),
    ] = 1.0,
    out: OutputPathOption = None,
    json_output: JsonOutputOption = False,
) -> Any:
    """
    Print exact or floating-point series coefficients, one [bold]power<TAB>value[/bold] per line.
    """
    with get_rich_toolkit(json_output=json_output) as toolkit:
        try:
            lines = series_lines(
                kind, dimension, coupling, n, order, energies, radius
            )
        except InvalidInputError as e:
            toolkit.fail(e.code, e.message, exit_code=1)
        except AnharmonicError as e:
            fail_numerical(toolkit, e)

        if out:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")

        result = SeriesOutput(
            kind=kind.value,
            dimension=dimension,
            lines=lines,
            out=str(out) if out else None,
        )
        toolkit.success(result, render_output=_render_series_output)
