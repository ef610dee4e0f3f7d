#!/usr/bin/env python3
"""
s3lite Display
Formats runtime values the way the interactive console shows them
"""

import math

from parser import FunctionDef, format_string_literal, pretty_print
from errors import RuntimeFailure
from values import Kind, Value

LINE_WIDTH = 80
DIGITS = 7


def _decompose(x, digits):
    """Significant digits needed (at most `digits`) and decimal exponent of |x|"""
    if x == 0:
        return 1, 0
    mantissa, exponent = f"{abs(x):.{digits - 1}e}".split('e')
    significant = mantissa.replace('.', '').rstrip('0') or '0'
    return len(significant), int(exponent)


def format_numbers(xs, digits=DIGITS):
    """
    Format a numeric vector with one shared layout.

    Fixed notation uses the largest number of decimals any element needs;
    scientific notation wins only when it is strictly narrower.
    """
    finite = [x for x in xs if math.isfinite(x)]
    if not finite:
        return [format_non_finite(x) for x in xs]

    parts = [_decompose(x, digits) for x in finite]
    negative = any(x < 0 for x in finite)
    decimals = max(max(0, sig - 1 - exp) for sig, exp in parts)
    int_width = max(max(1, exp + 1) for _, exp in parts)
    fixed_width = negative + int_width + (decimals + 1 if decimals else 0)

    max_sig = max(sig for sig, _ in parts)
    exp_width = 5 if any(abs(exp) >= 100 for _, exp in parts) else 4
    sci_width = negative + (max_sig + 1 if max_sig > 1 else 1) + exp_width

    out = []
    for x in xs:
        if not math.isfinite(x):
            out.append(format_non_finite(x))
        elif fixed_width <= sci_width:
            out.append(f"{x:.{decimals}f}")
        else:
            out.append(f"{x:.{max_sig - 1}e}")
    return [s if s != '-0' else '0' for s in out]


def format_non_finite(x):
    if math.isnan(x):
        return 'NaN'
    return 'Inf' if x > 0 else '-Inf'


def format_number(x, digits=DIGITS):
    return format_numbers([x], digits)[0]


def format_plain(x):
    """Element as text, the way paste() and %in% see it"""
    if isinstance(x, bool):
        return 'TRUE' if x else 'FALSE'
    if isinstance(x, float):
        return format_number(x, 15)
    return str(x)


def format_elements(v: Value):
    """Element strings of a vector plus whether they right-align"""
    if v.kind is Kind.NUMERIC:
        return format_numbers(v.payload), True
    if v.kind is Kind.LOGICAL:
        return [format_plain(x) for x in v.payload], True
    return [format_string_literal(x) for x in v.payload], False


def format_vector(v: Value) -> str:
    if not v.payload:
        return f"{v.kind.value}(0)\n"
    names = v.attr('names')
    if names is not None and len(names) == len(v):
        return format_named(v, names.payload)

    items, right = format_elements(v)
    width = max(len(s) for s in items)
    label_width = len(f"[{len(items)}]")
    per_line = max(1, (LINE_WIDTH - label_width) // (width + 1))

    lines = []
    for start in range(0, len(items), per_line):
        chunk = items[start:start + per_line]
        cells = [s.rjust(width) if right else s.ljust(width) for s in chunk]
        label = f"[{start + 1}]".rjust(label_width)
        lines.append((label + ' ' + ' '.join(cells)).rstrip())
    return '\n'.join(lines) + '\n'


def format_named(v: Value, names) -> str:
    """Column layout: a row of names above a row of values, both right-aligned"""
    items, _ = format_elements(v)
    width = max(max(len(s) for s in items), max(len(n) for n in names))
    per_line = max(1, LINE_WIDTH // (width + 1))
    lines = []
    for start in range(0, len(items), per_line):
        lines.append(''.join(f"{n:>{width}} " for n in names[start:start + per_line]))
        lines.append(''.join(f"{s:>{width}} " for s in items[start:start + per_line]))
    return '\n'.join(lines) + '\n'


def format_attributes(v: Value, skip=('names',)) -> str:
    out = []
    for name, value in v.attributes:
        if name in skip:
            continue
        out.append(f'attr(,"{name}")\n')
        out.append(format_value(value))
    return ''.join(out)


def format_record(v: Value, prefix='') -> str:
    if not v.payload:
        return "list()\n"
    out = []
    for name, value in v.payload:
        tag = f"{prefix}${name}"
        out.append(tag + '\n')
        if value.is_record and value.payload:
            out.append(format_record(value, tag))
        else:
            out.append(format_value(value))
            out.append('\n')
    return ''.join(out)


def format_value(v: Value) -> str:
    """Default console rendering, terminated by a newline"""
    if v.is_null:
        return "NULL\n"
    if v.is_vector:
        return format_vector(v) + format_attributes(v)
    if v.is_record:
        return format_record(v) + format_attributes(v)
    if v.kind is Kind.CLOSURE:
        fn = v.payload
        return pretty_print(FunctionDef(fn.params, fn.body)) + "\n" + format_attributes(v)
    return f'function (...) .Primitive("{v.payload.name}")\n'


def require_columns(v: Value, what: str) -> list:
    """Field names of a record whose fields are vectors of one common length"""
    if not v.is_record:
        raise RuntimeFailure(f"invalid {what}: expected a list of columns, got {v.kind.value}")
    names = v.field_names()
    lengths = set()
    for name in names:
        column = v.field(name)
        if not column.is_vector:
            raise RuntimeFailure(f"invalid {what}: column '{name}' is not a vector")
        lengths.add(len(column))
    if len(lengths) > 1:
        raise RuntimeFailure(f"invalid {what}: columns differ in length")
    return names


def format_data_frame(v: Value) -> str:
    """Rows with left-aligned row numbers and right-aligned columns"""
    names = require_columns(v, "data frame")
    columns = [v.field(name) for name in names]
    rows = len(columns[0]) if columns else 0
    if rows == 0:
        return "data frame with 0 columns and 0 rows\n" if not columns else \
            f"[1] {' '.join(names)}\n<0 rows>\n"

    rendered = []
    for name, column in zip(names, columns):
        cells = format_numbers(column.payload) if column.kind is Kind.NUMERIC \
            else [format_plain(x) for x in column.payload]
        width = max(len(name), max(len(c) for c in cells))
        rendered.append([name.rjust(width)] + [c.rjust(width) for c in cells])

    labels = [''] + [str(i + 1) for i in range(rows)]
    label_width = max(len(s) for s in labels)
    lines = []
    for r in range(rows + 1):
        line = labels[r].ljust(label_width) + ''.join(' ' + col[r] for col in rendered)
        lines.append(line)
    return '\n'.join(lines) + '\n'
