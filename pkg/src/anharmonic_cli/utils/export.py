import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from anharmonic_cli.config import OutputFormat

SIGNIFICANT_DIGITS = 12


def format_cell(value: Any) -> str:
    if value is None:
        return ""

    if isinstance(value, bool):
        return "true" if value else "false"

    if isinstance(value, float):
        if not math.isfinite(value):
            return ""
        return f"{value:.{SIGNIFICANT_DIGITS}g}"

    if isinstance(value, (list, tuple)):
        return ";".join(format_cell(item) for item in value)

    return str(value)


def _flatten(record: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}

    for key, value in record.items():
        name = f"{prefix}{key}"

        if isinstance(value, Mapping):
            flat.update(_flatten(value, prefix=f"{name}."))
        else:
            flat[name] = value

    return flat


def _as_dict(record: BaseModel | Mapping[str, Any]) -> dict[str, Any]:
    if isinstance(record, BaseModel):
        return record.model_dump(mode="python")

    return dict(record)


def render_csv(
    records: Iterable[BaseModel | Mapping[str, Any]],
    columns: Sequence[str] | None = None,
) -> str:
    rows = [_flatten(_as_dict(record)) for record in records]

    if columns is None:
        seen: dict[str, None] = {}
        for row in rows:
            seen.update(dict.fromkeys(row))
        columns = list(seen)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(columns)

    for row in rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])

    return buffer.getvalue()


def _finite(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None

    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}

    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]

    return value


def render_json_lines(records: Iterable[BaseModel | Mapping[str, Any]]) -> str:
    lines = [
        json.dumps(_finite(_as_dict(record)), allow_nan=False, sort_keys=False)
        for record in records
    ]

    return "".join(f"{line}\n" for line in lines)


def write_records(
    path: Path,
    records: Sequence[BaseModel | Mapping[str, Any]],
    output_format: OutputFormat,
    columns: Sequence[str] | None = None,
) -> None:
    if output_format == "json":
        content = render_json_lines(records)
    else:
        content = render_csv(records, columns)

    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8", newline="")
