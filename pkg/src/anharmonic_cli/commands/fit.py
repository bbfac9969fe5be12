import logging
from typing import Annotated, Any

import typer
from pydantic import BaseModel
from rich_toolkit import RichToolkit

from anharmonic_cli.commands._options import (
    ConfigOption,
    DimensionsOption,
    FormatOption,
    MeshKindOption,
    MeshSizeOption,
    OutputPathOption,
    choice_value,
    fail_numerical,
    resolve_settings,
)
from anharmonic_cli.core import EffectiveState
from anharmonic_cli.mesh import solve_state
from anharmonic_cli.strongcoupling import (
    FIT_POINTS,
    InterpolationFit,
    fit_interpolation,
    interpolation_samples,
    pure_cubic,
    range_error,
)
from anharmonic_cli.utils.cli import format_number, get_results_table, get_rich_toolkit
from anharmonic_cli.utils.errors import AnharmonicError
from anharmonic_cli.utils.execution import JsonOutputOption
from anharmonic_cli.utils.export import write_records

logger = logging.getLogger(__name__)

FIT_COLUMNS = ("dimension", "a", "b", "max_relative_error", "range_error")


class FitOutput(BaseModel):
    fits: list[InterpolationFit]
    out: str | None = None


def _render_fit_output(data: FitOutput, toolkit: RichToolkit) -> None:
    toolkit.print_title("interpolation")
    toolkit.print_line()
    toolkit.print("E(g) = D (1 + a g + b^5 g^2)^(1/5)", bullet=False)
    toolkit.print_line()

    rows = [
        (
            f"{fit.dimension:g}",
            format_number(fit.a, 4),
            format_number(fit.b, 4),
            f"{100 * fit.max_relative_error:.2f}%",
            "-" if fit.range_error is None else f"{100 * fit.range_error:.2f}%",
        )
        for fit in data.fits
    ]
    toolkit.print(
        get_results_table(("D", "a", "b", "max error", "on [0.01, 100]"), rows),
        bullet=False,
    )

    if data.out:
        toolkit.print_line()
        toolkit.print(f"Fit written to [blue]{data.out}[/]")


def fit(
    dimensions: DimensionsOption,
    points: Annotated[
        int,
        typer.Option(
            "--points", help="Equally spaced couplings in (0, 6].", min=FIT_POINTS
        ),
    ] = FIT_POINTS,
    mesh_size: MeshSizeOption = None,
    mesh_kind: MeshKindOption = None,
    out: OutputPathOption = None,
    output_format: FormatOption = None,
    config: ConfigOption = None,
    json_output: JsonOutputOption = False,
) -> Any:
    """
    Fit [bold]E(g) = D (1 + a g + b^5 g^2)^(1/5)[/bold] to mesh energies with b = eps~_0 / D.
    """
    with get_rich_toolkit(json_output=json_output) as toolkit:
        settings = resolve_settings(
            toolkit,
            config,
            mesh_size=mesh_size,
            mesh_kind=choice_value(mesh_kind),
            output_format=choice_value(output_format),
        )

        fits: list[InterpolationFit] = []

        with toolkit.progress(title="Sampling and fitting", transient=True):
            try:
                for d in dimensions:
                    ground = EffectiveState(
                        dimension=d, radial_nodes=0, angular_momentum=0
                    )
                    epsilon0, _, _ = solve_state(
                        pure_cubic(d), ground, settings.mesh_size, settings.mesh_kind
                    )
                    couplings, energies = interpolation_samples(
                        d, count=points, settings=settings
                    )
                    sampled = fit_interpolation(d, couplings, energies, epsilon0)
                    fits.append(
                        sampled.model_copy(
                            update={"range_error": range_error(sampled, settings=settings)}
                        )
                    )
            except AnharmonicError as e:
                fail_numerical(toolkit, e)

        if out:
            write_records(out, fits, settings.output_format, FIT_COLUMNS)

        result = FitOutput(fits=fits, out=str(out) if out else None)
        toolkit.success(result, render_output=_render_fit_output)
