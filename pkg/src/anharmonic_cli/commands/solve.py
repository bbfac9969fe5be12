import logging
from pathlib import Path
from typing import Annotated, Any

import numpy as np
import typer
from pydantic import BaseModel
from rich_toolkit import RichToolkit

from anharmonic_cli.approximant import zero_order
from anharmonic_cli.commands._options import (
    ConfigOption,
    DimensionsOption,
    FormatOption,
    MeshKindOption,
    MeshSizeOption,
    OutputPathOption,
    StatesOption,
    choice_value,
    parse_states,
    resolve_settings,
)
from anharmonic_cli.mesh import state_index
from anharmonic_cli.nonlinearization import normalized_wavefunction
from anharmonic_cli.spectrum import RESULT_COLUMNS, SpectralResult, StateRun, sweep
from anharmonic_cli.utils.cli import format_number, get_results_table, get_rich_toolkit
from anharmonic_cli.utils.errors import NUMERICAL_FAILURE_EXIT_CODE
from anharmonic_cli.utils.execution import JsonOutputOption
from anharmonic_cli.utils.export import write_records

logger = logging.getLogger(__name__)


class SolveOutput(BaseModel):
    records: list[SpectralResult]
    failures: int
    out: str | None = None


def _render_solve_output(data: SolveOutput, toolkit: RichToolkit) -> None:
    toolkit.print_title("spectrum")
    toolkit.print_line()

    rows = [
        (
            f"{record.dimension:g}",
            f"{record.coupling:g}",
            record.state,
            format_number(record.e_var),
            format_number(record.e2, 3),
            format_number(record.e_corrected),
            format_number(record.e_mesh),
            ", ".join(f"{node:.9f}" for node in record.nodes) or "-",
            f"[error]{record.error}[/]" if record.error else "",
        )
        for record in data.records
    ]
    toolkit.print(
        get_results_table(
            ("D", "g", "state", "E_var", "E_2", "E_var + E_2", "E_mesh", "nodes", ""),
            rows,
        ),
        bullet=False,
    )

    if data.out:
        toolkit.print_line()
        toolkit.print(f"Records written to [blue]{data.out}[/]")


def _timings_path(out: Path) -> Path:
    return out.with_name(f"{out.stem}.timings.csv")


def _timing_rows(runs: list[StateRun]) -> list[dict[str, Any]]:
    return [
        {
            "dimension": run.result.dimension,
            "coupling": run.result.coupling,
            "state": run.result.state,
            **run.result.timings,
        }
        for run in runs
    ]


def _correction_rows(runs: list[StateRun]) -> list[dict[str, Any]]:
    rows: list[dict[str, Any]] = []

    for run in runs:
        if run.corrections is None:
            continue

        corrections = run.corrections
        ratio = corrections.ratio()

        for i, r in enumerate(corrections.r):
            row: dict[str, Any] = {
                "dimension": run.result.dimension,
                "coupling": run.result.coupling,
                "state": run.result.state,
                "r": float(r),
                "y0": float(corrections.y0[i]),
            }
            for n, y in enumerate(corrections.corrections, start=1):
                row[f"y{n}"] = float(y[i])
            row["ratio"] = float(ratio[i]) if np.isfinite(ratio[i]) else None
            rows.append(row)

    return rows


def _wavefunction_rows(runs: list[StateRun]) -> list[dict[str, Any]]:
    rows: list[dict[str, Any]] = []

    for run in runs:
        if run.mesh is None or run.variational is None or run.effective is None:
            continue

        record = run.result
        effective = run.effective
        index = state_index(run.mesh.basis.kind, effective)
        mesh_values = run.mesh.wavefunctions[:, index]

        trial = None
        if effective.is_nodeless:
            trial = normalized_wavefunction(zero_order(run.variational.params), run.mesh.r)

        for i, r in enumerate(run.mesh.r):
            rows.append(
                {
                    "dimension": record.dimension,
                    "coupling": record.coupling,
                    "state": record.state,
                    "r": float(r),
                    "psi_mesh": float(mesh_values[i]),
                    "psi_trial": None if trial is None else float(trial[i]),
                }
            )

    return rows


def solve(
    dimensions: DimensionsOption,
    couplings: Annotated[
        list[float],
        typer.Option("--g", help="Coupling g >= 0 (repeatable, solved in order).", min=0),
    ],
    states: StatesOption = None,
    orders: Annotated[
        int | None,
        typer.Option("--orders", help="Highest correction order (2 to 8).", min=1, max=8),
    ] = None,
    verify: Annotated[
        bool,
        typer.Option("--verify", help="Check every record against the Lagrange mesh."),
    ] = False,
    mesh_size: MeshSizeOption = None,
    mesh_kind: MeshKindOption = None,
    out: OutputPathOption = None,
    output_format: FormatOption = None,
    config: ConfigOption = None,
    jobs: Annotated[
        int | None,
        typer.Option("--jobs", help="Parallel (D, state) chains.", min=1),
    ] = None,
    corrections_out: Annotated[
        Path | None,
        typer.Option("--corrections-out", help="CSV of y_0 ... y_N on the radial grid."),
    ] = None,
    wavefunction_out: Annotated[
        Path | None,
        typer.Option(
            "--wavefunction-out",
            help="CSV of the trial and mesh wavefunctions (needs --verify).",
        ),
    ] = None,
    json_output: JsonOutputOption = False,
) -> Any:
    """
    Solve states of the cubic oscillator [bold]V = r^2 + g r^3[/bold].

    Each record holds the variational energy, its corrections and, with
    [blue]--verify[/], the Lagrange-mesh energy.
    """
    with get_rich_toolkit(json_output=json_output) as toolkit:
        settings = resolve_settings(
            toolkit,
            config,
            pt_order=orders,
            mesh_size=mesh_size,
            mesh_kind=choice_value(mesh_kind),
            output_format=choice_value(output_format),
            jobs=jobs,
        )

        if wavefunction_out and not verify:
            toolkit.fail(
                "invalid_input",
                "The wavefunction export compares against the mesh.",
                hint="Add [blue]--verify[/].",
                exit_code=1,
            )

        with toolkit.progress(title="Solving states", transient=True):
            runs = sweep(
                dimensions,
                couplings,
                parse_states(states),
                verify=verify,
                settings=settings,
            )

        records = [run.result for run in runs]
        failures = sum(record.failed for record in records)

        if out:
            write_records(out, records, settings.output_format, RESULT_COLUMNS)
            write_records(_timings_path(out), _timing_rows(runs), "csv")

        if corrections_out:
            write_records(corrections_out, _correction_rows(runs), "csv")

        if wavefunction_out:
            write_records(wavefunction_out, _wavefunction_rows(runs), "csv")

        result = SolveOutput(
            records=records, failures=failures, out=str(out) if out else None
        )
        toolkit.success(result, render_output=_render_solve_output)

    if failures:
        logger.debug("%s of %s records failed", failures, len(records))
        raise typer.Exit(NUMERICAL_FAILURE_EXIT_CODE)
