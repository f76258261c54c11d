"""Default-history ingestion, serialization and bundled datasets.

The interchange format is a strict three-column CSV::

    year,pool_size,defaults
    2003,125,0
    ...

Extra columns are rejected rather than ignored so a silently reordered file
cannot be misread as valid data.
"""

from dataclasses import dataclass

from .errors import ParseError, UnknownDatasetError, ValidationError
from .multi_period import DefaultTimeSeries

__all__ = [
    "DatasetRecord",
    "CSV_HEADER",
    "parse_csv",
    "serialize_csv",
    "builtin_dataset",
    "builtin_names",
]

CSV_HEADER = "year,pool_size,defaults"


@dataclass(frozen=True)
class DatasetRecord:
    """A named default history with provenance."""

    name: str
    description: str
    series: DefaultTimeSeries
    source: str


def parse_csv(content: str) -> DefaultTimeSeries:
    """Parse and validate a default history from CSV text.

    Raises :class:`ParseError` (with the offending line number) on malformed
    structure and :class:`ValidationError` when a row violates a model
    invariant (defaults >= pool size, negative counts, gap or duplicate
    years).
    """
    lines = content.lstrip("﻿").splitlines()
    stripped = [(i + 1, line.strip()) for i, line in enumerate(lines)]
    rows = [(no, line) for no, line in stripped if line]
    if not rows:
        raise ParseError("empty input, expected a header row")
    header_no, header = rows[0]
    if [c.strip() for c in header.split(",")] != CSV_HEADER.split(","):
        raise ParseError(f"expected header {CSV_HEADER!r}, got {header!r}", header_no)
    if len(rows) == 1:
        raise ParseError("no data rows after the header", header_no)

    parsed = []
    for no, line in rows[1:]:
        fields = [c.strip() for c in line.split(",")]
        if len(fields) != 3:
            raise ParseError(f"expected 3 comma-separated values, got {len(fields)}", no)
        try:
            year, n_t, k_t = (int(f) for f in fields)
        except ValueError:
            raise ParseError(f"non-integer value in {line!r}", no) from None
        parsed.append((year, n_t, k_t))
    try:
        return DefaultTimeSeries(rows=tuple(parsed))
    except ValidationError:
        raise


def serialize_csv(series: DefaultTimeSeries) -> str:
    """Inverse of :func:`parse_csv` on valid series."""
    lines = [CSV_HEADER]
    lines.extend(f"{year},{n_t},{k_t}" for year, n_t, k_t in series.rows)
    return "\n".join(lines) + "\n"


_FICTITIOUS = DatasetRecord(
    name="fictitious",
    description="Fictitious default data",
    series=DefaultTimeSeries(rows=(
        (2003, 125, 0),
        (2004, 125, 0),
        (2005, 125, 0),
        (2006, 125, 0),
        (2007, 125, 0),
        (2008, 125, 0),
        (2009, 125, 0),
        (2010, 125, 1),
    )),
    source="Synthetic benchmark history: eight years of 125 obligors with a "
           "single default in the final year.",
)

_MOODYS = DatasetRecord(
    name="moodys_investment_grade",
    description="Moody's Investment Grade",
    series=DefaultTimeSeries(rows=(
        (1990, 1492, 0),
        (1991, 1543, 1),
        (1992, 1624, 0),
        (1993, 1731, 0),
        (1994, 1888, 0),
        (1995, 2012, 0),
        (1996, 2209, 0),
        (1997, 2412, 0),
        (1998, 2593, 1),
        (1999, 2742, 1),
        (2000, 2908, 4),
        (2001, 2994, 4),
        (2002, 3128, 14),
        (2003, 3015, 0),
        (2004, 2977, 0),
        (2005, 3025, 2),
        (2006, 3082, 0),
        (2007, 3108, 0),
        (2008, 3133, 14),
        (2009, 3048, 11),
        (2010, 2966, 2),
    )),
    source="Entities rated investment grade (Aaa, Aa, A, Baa) by Moody's at "
           "the start of each year and defaults among them by year end; "
           "Moody's (2011), Corporate Default and Recovery Rates 1920-2010, "
           "Exhibits 17 and 42.",
)

_BUILTINS = {record.name: record for record in (_FICTITIOUS, _MOODYS)}


def builtin_names() -> tuple[str, ...]:
    return tuple(_BUILTINS)


def builtin_dataset(name: str) -> DatasetRecord:
    """Look up a bundled dataset by name."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise UnknownDatasetError(
            f"unknown dataset {name!r}; available: {', '.join(_BUILTINS)}") from None
