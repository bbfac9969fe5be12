from typing import Annotated

import typer
from rich import print

from . import __version__
from .commands.fit import fit
from .commands.series import series
from .commands.solve import solve
from .commands.strong import strong
from .commands.table import table
from .logging import setup_logging

setup_logging()

app = typer.Typer(
    rich_markup_mode="rich",
    help="Spectra of the [bold]D-dimensional radial cubic[/bold] oscillator.",
    no_args_is_help=True,
)


def version_callback(value: bool) -> None:
    if value:
        print(f"Anharmonic CLI version: [green]{__version__}[/green]")
        raise typer.Exit()


@app.callback()
def anharmonic_main(
    version: Annotated[
        bool,
        typer.Option(
            "--version",
            callback=version_callback,
            is_eager=True,
            help="Show the version and exit.",
        ),
    ] = False,
) -> None: ...


# anharmonic [command]
app.command()(solve)
app.command()(table)
app.command()(series)
app.command()(strong)
app.command()(fit)


def main() -> None:
    app()
