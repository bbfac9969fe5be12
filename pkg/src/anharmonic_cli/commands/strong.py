import logging
from typing import Annotated, Any

import typer
from pydantic import BaseModel
from rich_toolkit import RichToolkit

from anharmonic_cli.commands._options import (
    ConfigOption,
    DimensionsOption,
    MeshKindOption,
    MeshSizeOption,
    OutputPathOption,
    choice_value,
    fail_numerical,
    resolve_settings,
)
from anharmonic_cli.strongcoupling import (
    MAX_SIMPLE_ORDER,
    StrongExpansion,
    implied_epsilon2,
    strong_expansion,
)
from anharmonic_cli.utils.cli import format_number, get_details_table, get_rich_toolkit
from anharmonic_cli.utils.errors import AnharmonicError
from anharmonic_cli.utils.execution import JsonOutputOption
from anharmonic_cli.utils.export import render_json_lines

logger = logging.getLogger(__name__)

STABILITY_COUPLINGS = (10.0, 50.0, 100.0)


class StrongRecord(BaseModel):
    expansion: StrongExpansion
    implied_epsilon2: tuple[float, ...] = ()
    stability_couplings: tuple[float, ...] = ()


class StrongOutput(BaseModel):
    records: list[StrongRecord]
    out: str | None = None


def _render_strong_output(data: StrongOutput, toolkit: RichToolkit) -> None:
    toolkit.print_title("strong coupling")

    for record in data.records:
        expansion = record.expansion
        rows = [
            ("eps~_0 (variational)", format_number(expansion.leading.variational, 12)),
            ("eps~_0 correction", format_number(expansion.leading.correction, 3)),
            ("eps~_0", format_number(expansion.epsilon0, 12)),
            ("eps~_0 (mesh)", format_number(expansion.epsilon0_mesh, 12)),
            ("<w^2> simple trial", format_number(expansion.subleading.crude, 6)),
            (
                "eps~_1 simple trial",
                format_number(expansion.subleading.simple_corrected, 6),
            ),
            ("eps~_1 (first order)", format_number(expansion.subleading.first, 12)),
            ("eps~_1 correction", format_number(expansion.subleading.correction, 3)),
            ("eps~_1", format_number(expansion.epsilon1, 12)),
            (
                "simple-trial partial sums",
                ", ".join(f"{value:.9f}" for value in expansion.simple.partial_sums),
            ),
        ]

        if record.implied_epsilon2:
            rows.append(
                (
                    "implied eps~_2",
                    ", ".join(
                        f"g={g:g}: {value:.6g}"
                        for g, value in zip(
                            record.stability_couplings, record.implied_epsilon2
                        )
                    ),
                )
            )

        toolkit.print_line()
        toolkit.print(f"[bold]D = {expansion.dimension:g}[/bold]")
        toolkit.print(get_details_table(rows), bullet=False)

    if data.out:
        toolkit.print_line()
        toolkit.print(f"Coefficients written to [blue]{data.out}[/]")


def strong(
    dimensions: DimensionsOption,
    order: Annotated[
        int,
        typer.Option(
            "--order",
            help="Corrections about the simple trial function.",
            min=0,
            max=MAX_SIMPLE_ORDER,
        ),
    ] = MAX_SIMPLE_ORDER,
    verify: Annotated[
        bool,
        typer.Option(
            "--verify",
            help="Add the mesh value of eps~_0 and the implied eps~_2 at g = 10, 50, 100.",
        ),
    ] = False,
    mesh_size: MeshSizeOption = None,
    mesh_kind: MeshKindOption = None,
    out: OutputPathOption = None,
    config: ConfigOption = None,
    json_output: JsonOutputOption = False,
) -> Any:
    """
    Strong-coupling coefficients of [bold]E = g^(2/5) (eps~_0 + eps~_1 g^(-4/5) + ...)[/bold].
    """
    with get_rich_toolkit(json_output=json_output) as toolkit:
        settings = resolve_settings(
            toolkit,
            config,
            mesh_size=mesh_size,
            mesh_kind=choice_value(mesh_kind),
        )

        records: list[StrongRecord] = []

        with toolkit.progress(title="Computing coefficients", transient=True):
            try:
                for d in dimensions:
                    expansion = strong_expansion(
                        d, order=order, verify=verify, settings=settings
                    )
                    record = StrongRecord(expansion=expansion)

                    if verify:
                        record = StrongRecord(
                            expansion=expansion,
                            implied_epsilon2=implied_epsilon2(
                                d,
                                STABILITY_COUPLINGS,
                                expansion.epsilon0,
                                expansion.epsilon1,
                                settings=settings,
                            ),
                            stability_couplings=STABILITY_COUPLINGS,
                        )

                    records.append(record)
            except AnharmonicError as e:
                fail_numerical(toolkit, e)

        if out:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(render_json_lines(records), encoding="utf-8")

        result = StrongOutput(records=records, out=str(out) if out else None)
        toolkit.success(result, render_output=_render_strong_output)
