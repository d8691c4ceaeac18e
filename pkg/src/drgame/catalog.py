"""Reading and writing task catalog files."""

from __future__ import annotations

import csv
import io
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .domain import Task, TimeGrid, validate_task
from .exceptions import CatalogFormatError, ValidationError

COLUMNS = (
    "id",
    "power_kw",
    "earliest_start_h",
    "latest_finish_h",
    "duration_h",
    "preferred_start_h",
    "preferred_finish_h",
)
_REQUIRED = COLUMNS[:5]


def _number(row: dict, key: str, line: int) -> float | None:
    raw = (row.get(key) or "").strip()
    if not raw:
        return None
    try:
        value = float(raw)
    except ValueError:
        raise CatalogFormatError(f"line {line}: {key}={raw!r} is not a number") from None
    if key != "power_kw" and not 0 <= value <= 24:
        raise CatalogFormatError(f"line {line}: {key}={value} outside [0, 24]")
    return value


def parse_catalog(text: str, grid: TimeGrid = TimeGrid(), validate: bool = True) -> list[Task]:
    """Parse delimiter-separated catalog text into tasks.

    The delimiter is sniffed among comma, semicolon and tab. Blank preferred
    columns leave the task without a preferred window.
    """
    try:
        dialect = csv.Sniffer().sniff(text.splitlines()[0] if text.strip() else ",", delimiters=",;\t")
    except csv.Error:
        dialect = csv.excel
    reader = csv.DictReader(io.StringIO(text), dialect=dialect, skipinitialspace=True)
    header = [h.strip() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    missing = [c for c in _REQUIRED if c not in header]
    if missing:
        raise CatalogFormatError(f"catalog is missing columns: {', '.join(missing)}")

    tasks = []
    seen = set()
    for line, row in enumerate(reader, start=2):
        if not any((v or "").strip() for v in row.values() if isinstance(v, str)):
            continue
        task_id = (row["id"] or "").strip()
        if not task_id:
            raise CatalogFormatError(f"line {line}: empty id")
        if task_id in seen:
            raise CatalogFormatError(f"line {line}: duplicate id {task_id!r}")
        seen.add(task_id)
        values = {k: _number(row, k, line) for k in COLUMNS[1:]}
        for key in _REQUIRED[1:]:
            if values[key] is None:
                raise CatalogFormatError(f"line {line}: {key} is required")
        if (values["preferred_start_h"] is None) != (values["preferred_finish_h"] is None):
            raise CatalogFormatError(f"line {line}: give both preferred columns or neither")
        try:
            task = Task.from_hours(task_id, grid=grid, **values)
            if validate:
                validate_task(task, grid)
        except ValidationError as exc:
            raise type(exc)(f"line {line}: {exc}") from None
        tasks.append(task)
    return tasks


def read_catalog(path: str | Path | None = None, grid: TimeGrid = TimeGrid(), validate: bool = True) -> list[Task]:
    """Load a catalog file; ``None`` loads the bundled appliance catalog."""
    if path is None:
        text = resources.files("drgame.data").joinpath("catalog_table1.csv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_catalog(text, grid, validate)


def catalog_errors(path: str | Path | None, grid: TimeGrid = TimeGrid()) -> list[str]:
    """Every validation problem in a catalog, one message per offending row."""
    try:
        tasks = read_catalog(path, grid, validate=False)
    except (ValidationError, OSError, UnicodeDecodeError) as exc:
        return [str(exc)]
    errors = []
    for task in tasks:
        try:
            validate_task(task, grid)
        except ValidationError as exc:
            errors.append(f"{type(exc).__name__}: {exc}")
    if not tasks:
        errors.append("EmptyCatalog: catalog has no tasks")
    return errors


def format_catalog(tasks: Iterable[Task], grid: TimeGrid = TimeGrid()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    h = grid.slot_hours

    def fmt(x):
        return "" if x is None else f"{x * h:g}"

    for t in tasks:
        writer.writerow([
            t.id,
            f"{t.power_kw:g}",
            fmt(t.earliest_start_slot),
            fmt(t.latest_finish_slot),
            fmt(t.duration_slots),
            fmt(t.preferred_start_slot),
            fmt(t.preferred_finish_slot),
        ])
    return buf.getvalue()


def write_catalog(tasks: Sequence[Task], path: str | Path, grid: TimeGrid = TimeGrid()) -> None:
    Path(path).write_text(format_catalog(tasks, grid), encoding="utf-8")
