"""Checked-in data tables transcribed from the published tables.

Every row carries a ``citation`` column.  Cells the source leaves
undetermined are simply absent.
"""

import csv
from functools import lru_cache
from importlib import resources

SUITES = ("table1", "table2", "qpoly", "appendix-n3", "appendix-n5n6n7", "jh-series", "sources")


@lru_cache(maxsize=None)
def _load(name: str) -> tuple:
    with resources.files(__name__).joinpath(f"{name}.csv").open(newline="") as fh:
        return tuple(csv.DictReader(fh))


def load(name: str) -> list[dict]:
    """Rows of ``fixtures/<name>.csv`` as dicts of strings."""
    if name not in SUITES:
        raise KeyError(f"unknown fixture table {name!r}")
    return [dict(r) for r in _load(name)]


def parse_cell(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split())


def cite(key: str) -> str:
    """Citation string for a closed-form prediction or check."""
    for row in _load("sources"):
        if row["key"] == key:
            return row["citation"]
    raise KeyError(f"no citation recorded for {key!r}")
