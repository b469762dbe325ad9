import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence, Union

import rich
from rich.table import Table
from rich.console import JustifyMethod

from kexchange.enums import ConsoleFormat


class Align(enum.Enum):
    left: JustifyMethod = "left"
    center: JustifyMethod = "center"
    right: JustifyMethod = "right"


@dataclass
class Column:
    Align = Align

    title: str
    path: Union[str, Callable[[Any], Any]]
    align: Align = Align.left


def _resolve(obj, path) -> Any:
    if callable(path):
        return path(obj)
    for item in path.split("."):
        obj = getattr(obj, item)
    return obj


def _plain(value) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, enum.Enum):
        return value.value
    return value


def _cell(value) -> str:
    if isinstance(value, bool):
        return ":white_check_mark:" if value else ":cross_mark:"
    if value is None:
        return "-"
    if isinstance(value, (set, frozenset)):
        return "{" + ", ".join(str(v) for v in sorted(value)) + "}"
    return f"{_plain(value)}"


class RichTableMixin:
    HEADERS: list[Column] = []

    @classmethod
    def get_rich_table(cls, header_style="bold magenta") -> Table:
        table = Table(show_header=True, header_style=header_style)
        for column in cls.HEADERS:
            table.add_column(header=column.title, justify=column.align.value)
        return table

    def to_rich_row(self) -> list:
        return [_cell(_resolve(self, column.path)) for column in self.HEADERS]

    def to_record(self) -> dict:
        return {
            column.title: _plain(_resolve(self, column.path))
            for column in self.HEADERS
        }


def print_rows(rows: Sequence[RichTableMixin], fmt: ConsoleFormat, cls=None):
    """Print rows as a rich table or as a JSON list, following ``fmt``."""
    cls = cls or (type(rows[0]) if rows else None)
    if fmt == ConsoleFormat.json:
        rich.print_json(data=[row.to_record() for row in rows])
        return
    if cls is None:
        return
    table = cls.get_rich_table()
    for row in rows:
        table.add_row(*row.to_rich_row())
    rich.print(table)
