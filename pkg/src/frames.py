#!/usr/bin/env python3
"""
s3lite Data Frames
Table loading, type-7 quantiles, summary tables and the bundled model fixtures
"""

from __future__ import annotations

import logging
import math
import os
from collections import Counter
from pathlib import Path

import numpy as np
import pandas as pd

from display import LINE_WIDTH, format_non_finite, format_numbers, require_columns
from errors import RuntimeFailure, TableError
from values import Kind, Value, character, get_class, numeric, record, set_class

logger = logging.getLogger(__name__)

STAT_LABELS = ("Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max.")
SUMMARY_DIGITS = 4
# a string column shows at most this many cells before folding into (Other)
MAX_LEVEL_ROWS = 6
NA_TOKENS = {"", "NA"}

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def data_dir() -> Path:
    return Path(os.environ.get("S3L_DATA_DIR") or DATA_DIR)


# -- statistics ----------------------------------------------------------------

def quantile_type7(v, p: float) -> float:
    """Linear interpolation between order statistics at h = (n-1)p"""
    xs = np.asarray(v, dtype=float)
    if xs.size == 0:
        raise RuntimeFailure("quantile of an empty vector")
    if not 0.0 <= p <= 1.0:
        raise RuntimeFailure("probabilities must lie in [0, 1]")
    if np.isnan(xs).any():
        raise RuntimeFailure("missing values and NaN's not allowed")
    xs = np.sort(xs)
    h = (xs.size - 1) * p
    lo = math.floor(h)
    frac = h - lo
    low = float(xs[lo])
    # exact order statistic when no interpolation is needed
    if frac == 0 or xs[lo + 1] == low:
        return low
    return (1 - frac) * low + frac * float(xs[lo + 1])


def six_numbers(v) -> list:
    xs = np.asarray(v, dtype=float)
    if xs.size == 0:
        raise RuntimeFailure("summary of an empty vector")
    low, q1, med, q3, high = (quantile_type7(xs, p) for p in (0.0, 0.25, 0.5, 0.75, 1.0))
    return [low, q1, med, float(xs.mean()), q3, high]


def summarize_vector(v: Value) -> Value:
    """Six named statistics for numbers, otherwise Length/Class/Mode"""
    if v.kind in (Kind.NUMERIC, Kind.LOGICAL):
        stats = numeric(six_numbers(v.payload))
        named = stats.with_attr("names", character(STAT_LABELS))
        return set_class(named, ["summaryDefault"])
    described = character([str(len(v)), get_class(v)[0], v.kind.value])
    described = described.with_attr("names", character(["Length", "Class", "Mode"]))
    return set_class(described, ["summaryDefault"])


def format_column_stats(stats) -> list:
    """Four significant digits relative to the largest magnitude in the column"""
    finite = [abs(x) for x in stats if math.isfinite(x)]
    largest = max(finite, default=0.0)
    magnitude = math.floor(math.log10(largest)) if largest > 0 else 0
    decimals = max(0, SUMMARY_DIGITS - 1 - magnitude)
    cells = [f"{x:.{decimals}f}" if math.isfinite(x) else format_non_finite(x) for x in stats]
    width = max(len(c) for c in cells)
    return [c.rjust(width) for c in cells]


def _label_cells(labels, values) -> list:
    width = max(len(label) for label in labels)
    return [f"{label.ljust(width)}:{value}  " for label, value in zip(labels, values)]


def _numeric_cells(column) -> list:
    return _label_cells(STAT_LABELS, format_column_stats(six_numbers(column)))


def _string_cells(column) -> list:
    counts = Counter(column)
    levels = sorted(counts)
    if len(levels) > MAX_LEVEL_ROWS:
        frequent = sorted(levels, key=lambda lv: (-counts[lv], lv))[:MAX_LEVEL_ROWS - 1]
        kept = sorted(frequent)
        other = sum(counts[lv] for lv in levels if lv not in frequent)
        labels, tallies = kept + ["(Other)"], [counts[lv] for lv in kept] + [other]
    else:
        labels, tallies = levels, [counts[lv] for lv in levels]
    width = max(len(str(n)) for n in tallies)
    return _label_cells(labels, [str(n).rjust(width) for n in tallies])


def summarize_frame(df: Value) -> Value:
    """Summary table of a data frame: a record of cell columns with class `table`"""
    names = require_columns(df, "data frame")
    if not names or not len(df.field(names[0])):
        raise RuntimeFailure("cannot summarize an empty data frame")

    columns = []
    for name in names:
        column = df.field(name)
        if column.kind is Kind.NUMERIC:
            columns.append((name, _numeric_cells(column.payload)))
        else:
            columns.append((name, _string_cells([str(x) for x in column.payload])))

    height = max(len(cells) for _, cells in columns)
    padded = [(name, cells + [""] * (height - len(cells))) for name, cells in columns]
    return set_class(record([(name, character(cells)) for name, cells in padded]), ["table"])


# -- table printing --------------------------------------------------------------

def _header(name: str, cells) -> str:
    # centred over the colon of the first cell
    label_width = cells[0].index(':') if cells and ':' in cells[0] else 0
    pad = max(0, math.floor(label_width - len(name) / 2))
    return ' ' * pad + name


def format_table(table: Value) -> str:
    """Column blocks that wrap before reaching the console width"""
    names = require_columns(table, "table")
    if any(table.field(name).kind is not Kind.CHARACTER for name in names):
        raise RuntimeFailure("invalid table: cells must be character strings")
    blocks = []
    for name in names:
        cells = list(table.field(name).payload)
        header = _header(name, cells)
        width = max([len(header)] + [len(c) for c in cells])
        blocks.append([header.ljust(width)] + [c.ljust(width) for c in cells])

    out = []
    start = 0
    while start < len(blocks):
        used = 0
        stop = start
        while stop < len(blocks) and (stop == start or used + 1 + len(blocks[stop][0]) < LINE_WIDTH):
            used += 1 + len(blocks[stop][0])
            stop += 1
        for row in range(len(blocks[start])):
            out.append(''.join(' ' + block[row] for block in blocks[start:stop]))
        start = stop
    return '\n'.join(out) + '\n'


def format_summary_default(v: Value) -> str:
    """Named statistics at four significant digits, unquoted"""
    names_attr = v.attr("names")
    if not v.is_vector or names_attr is None or len(names_attr) != len(v) or not len(v):
        raise RuntimeFailure("invalid summaryDefault: expected a nonempty named vector")
    names = [str(n) for n in names_attr.payload]
    if v.kind is Kind.NUMERIC:
        items = format_numbers(v.payload, SUMMARY_DIGITS)
    else:
        items = [str(x) for x in v.payload]
    width = max(max(len(s) for s in items), max(len(n) for n in names))
    per_line = max(1, LINE_WIDTH // (width + 1))
    lines = []
    for start in range(0, len(items), per_line):
        lines.append(''.join(f"{n:>{width}} " for n in names[start:start + per_line]))
        lines.append(''.join(f"{s:>{width}} " for s in items[start:start + per_line]))
    return '\n'.join(lines) + '\n'


# -- loading -------------------------------------------------------------------------

def _check_shape(path: Path) -> None:
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines or not lines[0].strip():
        raise TableError(f"{path.name}: empty file")
    expected = len(lines[0].split('\t'))
    rows = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = len(line.split('\t'))
        if fields != expected:
            raise TableError(f"{path.name}: line {lineno} has {fields} fields, expected {expected}")
        rows += 1
    if rows == 0:
        raise TableError(f"{path.name}: no data rows")


def load_table(path) -> Value:
    """
    Read a tab-separated file with a header line into a data frame.

    Columns whose every cell parses as a number become numeric; the rest stay
    strings. NA tokens are rejected since inputs are complete by construction.
    """
    path = Path(path)
    _check_shape(path)
    frame = pd.read_csv(path, sep='\t', dtype=str, keep_default_na=False, skip_blank_lines=True)

    columns = []
    for name in frame.columns:
        cells = frame[name]
        missing = cells.isin(NA_TOKENS)
        if missing.any():
            lineno = int(np.argmax(missing.to_numpy())) + 2
            raise TableError(f"{path.name}: missing value in column '{name}' at line {lineno}")
        parsed = pd.to_numeric(cells, errors="coerce")
        if parsed.notna().all():
            columns.append((name, numeric(parsed.tolist())))
        else:
            columns.append((name, character(cells.tolist())))

    logger.info("loaded %s: %d rows x %d columns", path.name, len(frame), len(columns))
    df = record(columns, [("row_count", numeric([len(frame)]))])
    return set_class(df, ["data_frame"])


# -- fixtures ------------------------------------------------------------------------

GBM_RESIDUALS = (0.5, -0.5)
RF_OBSERVED = (1.0, 2.0, 3.0)
RF_PREDICTED = (1.0, 1.0, 1.0)


def make_fixtures(directory=None) -> Value:
    """
    Stand-ins for fitted models, one per class the rss methods handle.

    The rpart residuals are shipped data; the gbm and randomForest fixtures
    are small hand-chosen vectors. randomForest deliberately has no
    `residuals` field.
    """
    directory = Path(directory) if directory is not None else data_dir()
    residuals = load_table(directory / "rpart_residuals.tsv").field("residual")
    if residuals is None or residuals.kind is not Kind.NUMERIC:
        raise TableError("rpart_residuals.tsv must have a numeric 'residual' column")

    rpart = set_class(record([("residuals", residuals)]), ["rpart"])
    gbm = set_class(record([("residuals", numeric(GBM_RESIDUALS))]), ["gbm"])
    forest = set_class(record([
        ("y", numeric(RF_OBSERVED)),
        ("predicted", numeric(RF_PREDICTED)),
    ]), ["randomForest"])
    return record([("rpart", rpart), ("gbm", gbm), ("randomForest", forest)])
