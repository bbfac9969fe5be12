import logging
from collections.abc import Callable, Iterable
from typing import Any, Literal, NoReturn, TypeVar, cast

import typer
from pydantic import BaseModel
from rich.console import RenderableType
from rich.padding import Padding
from rich.table import Table
from rich.text import Text
from rich_toolkit import RichToolkit, RichToolkitTheme
from rich_toolkit.container import Container
from rich_toolkit.element import Element
from rich_toolkit.progress import Progress
from rich_toolkit.styles import BaseStyle, MinimalStyle

from anharmonic_cli.utils.errors import ErrorCode

logger = logging.getLogger(__name__)

OutputT = TypeVar("OutputT", bound=BaseModel)
OutputRenderer = Callable[[OutputT, "AnharmonicToolkit"], None]

ERROR_BULLET = " [bold][error]✗[/][/]"


def _strip_rich_markup(value: str | None) -> str | None:
    if value is None:
        return None

    return Text.from_markup(value).plain


class AnharmonicStyle(BaseStyle):
    """Title chip on top, everything else indented behind a bullet column."""

    content_padding = 1
    emoji_column_width = 3

    animation_emojis = ["◐", "◓", "◑", "◒"]

    def render_element(
        self,
        element: Any,
        is_active: bool = False,
        done: bool = False,
        parent: Element | None = None,
        **kwargs: Any,
    ) -> RenderableType:
        rendered = super().render_element(
            element=element, is_active=is_active, done=done, parent=parent, **kwargs
        )

        if isinstance(parent, (Progress, Container)):
            return rendered

        metadata = kwargs
        if isinstance(element, Element) and element.metadata:
            metadata = {**element.metadata, **metadata}

        if metadata.get("title", False):
            return Padding(
                Text(f" {element} ", style="tag.title"),
                (0, 0, 0, self.content_padding),
                expand=False,
            )

        if isinstance(element, Progress):
            emoji = self._progress_emoji(element, done)
        else:
            emoji = metadata.get("emoji", "")

        prefix = Text(" " * self.content_padding)
        if emoji:
            prefix.append_text(Text.from_markup(emoji))
        prefix.pad_right(self.content_padding + self.emoji_column_width - prefix.cell_len)

        grid = Table.grid(pad_edge=False)
        grid.add_column(width=prefix.cell_len, no_wrap=True)
        grid.add_column()
        grid.add_row(prefix, rendered)

        return grid

    def _progress_emoji(self, element: Progress, done: bool) -> str:
        if element.is_error:
            return ERROR_BULLET

        if done:
            return cast(str, element.metadata.get("done_emoji", "✔"))

        return self.animation_emojis[
            self.animation_counter % len(self.animation_emojis)
        ]


class AnharmonicToolkit(RichToolkit):
    mode: Literal["human", "json"]

    def print_error(self, message: str) -> None:
        self.print(f"[bold][error]error:[/][/] {message}", emoji=ERROR_BULLET)

    def print_hint(self, message: str) -> None:
        self.print(f"[dim]hint: {message}[/]")

    def success(
        self,
        data: OutputT,
        *,
        warnings: list[dict[str, Any]] | None = None,
        hint: str | None = None,
        render_output: OutputRenderer[OutputT] | None = None,
    ) -> None:
        if self.mode != "json":
            self.output(data, render_output=cast(Any, render_output))
            return

        output: dict[str, Any] = {"data": data}

        if warnings:
            output["warnings"] = warnings

        if hint is not None:
            output["hint"] = hint

        self.output(output)

    def fail(
        self,
        code: ErrorCode,
        message: str,
        *,
        hint: str | None = None,
        exit_code: int = 1,
    ) -> NoReturn:
        if self.mode == "json":
            self.output(
                {
                    "error": {
                        "code": code,
                        "message": _strip_rich_markup(message),
                        "hint": _strip_rich_markup(hint),
                    }
                }
            )
        else:
            self.print_error(message)

            if hint:
                self.print_line()
                self.print_hint(hint)

        raise typer.Exit(exit_code)


def get_details_table(rows: Iterable[tuple[str, RenderableType]]) -> Table:
    """Label/value grid with dimmed labels."""
    table = Table.grid(padding=(0, 2), pad_edge=False)
    table.add_column(style="dim", no_wrap=True)
    table.add_column(overflow="fold")

    for label, value in rows:
        table.add_row(label, value)

    return table


def get_results_table(
    columns: Iterable[str], rows: Iterable[Iterable[RenderableType]]
) -> Table:
    table = Table(box=None, pad_edge=False, header_style="bold")

    for column in columns:
        table.add_column(column, justify="right", no_wrap=True)

    for row in rows:
        table.add_row(*row)

    return table


def format_number(value: float | None, digits: int = 10) -> str:
    if value is None:
        return "[dim]n/a[/]"

    return f"{value:.{digits}g}"


def get_rich_toolkit(
    minimal: bool = False,
    *,
    json_output: bool | None = None,
) -> AnharmonicToolkit:
    style: BaseStyle = MinimalStyle() if minimal else AnharmonicStyle()

    theme = RichToolkitTheme(
        style=style,
        theme={
            "tag.title": "#ffffff on #3b4cc0",
            "placeholder": "grey62",
            "text": "white",
            "selected": "#3b4cc0",
            "result": "grey85",
            "progress": "on #3b4cc0",
            "error": "red",
            "cancelled": "indian_red italic",
        },
    )

    mode: Literal["human", "json"] = "json" if json_output else "human"

    return AnharmonicToolkit(theme=theme, mode=mode)
