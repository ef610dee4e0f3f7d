#!/usr/bin/env python3
"""
s3lite Standard Library
Builtin functions installed into every session's global environment
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np

import frames
from dispatch import inherits_op, methods_of, resolve_method, use_method
from display import (format_data_frame, format_number, format_plain, format_value)
from errors import RuntimeFailure
from evaluator import BASE_FUNCTIONS
from values import (NULL, Kind, Value, builtin, character, get_class, logical,
                    numeric)

logger = logging.getLogger(__name__)

# name -> Python function taking (interp, args, frame)
BUILTINS = {}

ALL_EQUAL_TOLERANCE = 1.5e-8
DEFAULT_PROBS = (0.0, 0.25, 0.5, 0.75, 1.0)


def register(name):
    """Decorator adding a function to the builtin table under its language name"""
    def wrap(fn):
        BUILTINS[name] = fn
        return fn
    return wrap


def install_builtins(env) -> None:
    for name, fn in BUILTINS.items():
        value = BASE_FUNCTIONS.setdefault(name, builtin(name, fn))
        env.define(name, value)
    env.define("TRUE", logical([True]))
    env.define("FALSE", logical([False]))
    env.define("NULL", NULL)
    env.define("pi", numeric([math.pi]))


# -- argument helpers ------------------------------------------------------------

def _arg(args, index, name):
    if index >= len(args):
        raise RuntimeFailure(f'argument "{name}" is missing, with no default')
    return args[index]


def _string_arg(args, index, name) -> str:
    value = _arg(args, index, name)
    if value.kind is not Kind.CHARACTER or len(value) != 1:
        raise RuntimeFailure(f"'{name}' must be a single string")
    return value.payload[0]


def _numbers(value: Value) -> list:
    if value.is_null:
        return []
    if value.kind in (Kind.NUMERIC, Kind.LOGICAL):
        return [float(x) for x in value.payload]
    raise RuntimeFailure(f"invalid 'type' ({get_class(value)[0]}) of argument")


def _strings(value: Value) -> list:
    if value.is_null:
        return []
    if not value.is_vector:
        raise RuntimeFailure(f"cannot coerce type '{value.kind.value}' to vector of type 'character'")
    if value.kind is Kind.NUMERIC:
        return [format_number(x, 15) for x in value.payload]
    return [format_plain(x) for x in value.payload]


# -- arithmetic and vectors --------------------------------------------------------

@register("sum")
def builtin_sum(interp, args, frame):
    total = 0.0
    for value in args:
        total += math.fsum(_numbers(value))
    return numeric([total])


@register("mean")
def builtin_mean(interp, args, frame):
    value = _arg(args, 0, "x")
    if value.kind not in (Kind.NUMERIC, Kind.LOGICAL):
        interp.emit_warning("argument is not numeric or logical: returning NaN", frame)
        interp.visible = True
        return numeric([math.nan])
    xs = _numbers(value)
    return numeric([float(np.mean(xs)) if xs else math.nan])


@register("length")
def builtin_length(interp, args, frame):
    return numeric([len(_arg(args, 0, "x"))])


@register("c")
def builtin_c(interp, args, frame):
    """Concatenate vectors; the result takes the most general kind present"""
    parts = [a for a in args if not a.is_null]
    if not parts:
        return NULL
    if any(not p.is_vector for p in parts):
        raise RuntimeFailure("c() can only combine vectors")
    kinds = {p.kind for p in parts}
    if Kind.CHARACTER in kinds:
        return character([s for p in parts for s in _strings(p)])
    if Kind.NUMERIC in kinds:
        return numeric([x for p in parts for x in _numbers(p)])
    return logical([x for p in parts for x in p.payload])


@register("quantile")
def builtin_quantile(interp, args, frame):
    xs = _numbers(_arg(args, 0, "x"))
    probs = _numbers(args[1]) if len(args) > 1 else list(DEFAULT_PROBS)
    result = numeric([frames.quantile_type7(xs, p) for p in probs])
    return result.with_attr("names", character([f"{p * 100:g}%" for p in probs]))


@register("all.equal")
def builtin_all_equal(interp, args, frame):
    return logical([all_equal(_arg(args, 0, "target"), _arg(args, 1, "current"))])


def all_equal(a: Value, b: Value) -> bool:
    """Structural equality with a relative tolerance on numbers"""
    if a.kind is not b.kind:
        return False
    if not _attributes_equal(a, b):
        return False
    if a.kind is Kind.NUMERIC:
        if len(a) != len(b):
            return False
        if not a.payload:
            return True
        x = np.asarray(a.payload)
        y = np.asarray(b.payload)
        if not np.array_equal(np.isfinite(x), np.isfinite(y)):
            return False
        finite = np.isfinite(x)
        if not np.array_equal(x[~finite], y[~finite], equal_nan=True):
            return False
        if not finite.any():
            return True
        diff = np.mean(np.abs(x[finite] - y[finite]))
        scale = np.mean(np.abs(x[finite]))
        return bool((diff / scale if scale > 0 else diff) < ALL_EQUAL_TOLERANCE)
    if a.kind in (Kind.CHARACTER, Kind.LOGICAL):
        return a.payload == b.payload
    if a.is_record:
        if a.field_names() != b.field_names():
            return False
        return all(all_equal(x, y) for (_, x), (_, y) in zip(a.payload, b.payload))
    if a.is_null:
        return True
    return a.payload is b.payload


def _attributes_equal(a: Value, b: Value) -> bool:
    left = dict(a.attributes)
    right = dict(b.attributes)
    if left.keys() != right.keys():
        return False
    return all(all_equal(left[k], right[k]) for k in left)


# -- text and conditions -------------------------------------------------------------

@register("paste")
def builtin_paste(interp, args, frame):
    """Join arguments with single spaces; a multi-element argument is space-joined first"""
    pieces = [' '.join(_strings(a)) for a in args if len(a)]
    return character([' '.join(pieces)])


@register("warning")
def builtin_warning(interp, args, frame):
    message = ''.join(s for a in args for s in _strings(a))
    return interp.emit_warning(message, interp.current_frame)


@register("stop")
def builtin_stop(interp, args, frame):
    message = ''.join(s for a in args for s in _strings(a))
    enclosing = interp.current_frame
    raise RuntimeFailure(message, enclosing.render() if enclosing is not None else "")


@register("cat")
def builtin_cat(interp, args, frame):
    words = []
    for value in args:
        if value.kind is Kind.NUMERIC:
            words.extend(format_number(x) for x in value.payload)
        else:
            words.extend(_strings(value))
    interp.write(' '.join(words))
    interp.visible = False
    return NULL


@register("invisible")
def builtin_invisible(interp, args, frame):
    value = args[0] if args else NULL
    interp.visible = False
    return value


@register("return")
def builtin_return(interp, args, frame):
    return args[0] if args else NULL


# -- classes and attributes ------------------------------------------------------------

@register("class")
def builtin_class(interp, args, frame):
    return character(get_class(_arg(args, 0, "x")))


@register("inherits")
def builtin_inherits(interp, args, frame):
    value = _arg(args, 0, "x")
    what = _arg(args, 1, "what")
    if what.kind is not Kind.CHARACTER:
        raise RuntimeFailure("'what' must be a character vector")
    return logical([any(inherits_op(value, cls).payload[0] for cls in what.payload)])


@register("attr")
def builtin_attr(interp, args, frame):
    found = _arg(args, 0, "x").attr(_string_arg(args, 1, "which"))
    return found if found is not None else NULL


@register("names")
def builtin_names(interp, args, frame):
    value = _arg(args, 0, "x")
    if value.is_record:
        return character(value.field_names())
    found = value.attr("names")
    return found if found is not None else NULL


@register("is.function")
def builtin_is_function(interp, args, frame):
    return logical([_arg(args, 0, "x").is_function])


@register("is.null")
def builtin_is_null(interp, args, frame):
    return logical([_arg(args, 0, "x").is_null])


# -- dispatch ------------------------------------------------------------------------------

@register("UseMethod")
def builtin_use_method(interp, args, frame):
    generic = _string_arg(args, 0, "generic")
    receiver = args[1] if len(args) > 1 else None
    return use_method(interp, generic, interp.current_frame, receiver)


@register("methods")
def builtin_methods(interp, args, frame):
    """methods("g") or methods(g): the second form reads the generic's name from the call"""
    target = _arg(args, 0, "generic.function")
    if target.kind is Kind.CHARACTER and len(target) == 1:
        generic = target.payload[0]
    elif target.is_function:
        generic = frame.arg_sources[0]
    else:
        raise RuntimeFailure("methods() needs a generic function or its name")
    return methods_of(generic, frame.env)


@register("dispatch_trace")
def builtin_dispatch_trace(interp, args, frame):
    generic = _string_arg(args, 0, "generic")
    outcome = resolve_method(generic, get_class(_arg(args, 1, "x")), frame.env)
    return outcome.as_record()


# -- printing ------------------------------------------------------------------------------

def _print_with(formatter):
    def print_builtin(interp, args, frame):
        value = _arg(args, 0, "x")
        interp.write(formatter(value))
        interp.visible = False
        return value
    return print_builtin


register("print")(_print_with(format_value))
register("print_value")(_print_with(format_value))
register("print_table")(_print_with(frames.format_table))
register("print_frame")(_print_with(format_data_frame))
register("print_summary_default")(_print_with(frames.format_summary_default))


def auto_print(interp, value: Value, env) -> None:
    """Show a visible top-level result through whatever `print` is in scope"""
    printer = env.find("print")
    if printer is None or not isinstance(printer, Value) or not printer.is_function:
        interp.write(format_value(value))
        return
    interp.call_function(printer, (value,), "print", env)


# -- data frames and fixtures ---------------------------------------------------------------

def _resolve_data_path(interp, name: str) -> Path:
    path = Path(name)
    if path.is_absolute() or path.exists():
        return path
    return Path(interp.data_dir or frames.data_dir()) / name


@register("load_table")
def builtin_load_table(interp, args, frame):
    path = _resolve_data_path(interp, _string_arg(args, 0, "path"))
    try:
        return frames.load_table(path)
    except OSError as err:
        raise RuntimeFailure(f"cannot open file '{path}': {err.strerror}")


@register("data_file")
def builtin_data_file(interp, args, frame):
    return character([str(_resolve_data_path(interp, _string_arg(args, 0, "name")))])


@register("make_fixtures")
def builtin_make_fixtures(interp, args, frame):
    try:
        return frames.make_fixtures(interp.data_dir)
    except OSError as err:
        raise RuntimeFailure(f"cannot read fixture data: {err}")


@register("nrow")
def builtin_nrow(interp, args, frame):
    df = _arg(args, 0, "x")
    rows = df.attr("row_count")
    if rows is not None:
        return rows
    if df.is_record and df.payload:
        return numeric([len(df.payload[0][1])])
    return NULL


@register("ncol")
def builtin_ncol(interp, args, frame):
    df = _arg(args, 0, "x")
    return numeric([len(df.payload)]) if df.is_record else NULL


@register("summarize_frame")
def builtin_summarize_frame(interp, args, frame):
    return frames.summarize_frame(_arg(args, 0, "object"))


@register("summarize_vector")
def builtin_summarize_vector(interp, args, frame):
    return frames.summarize_vector(_arg(args, 0, "object"))


@register("residuals_field")
def builtin_residuals_field(interp, args, frame):
    """x$residuals when x is a record carrying it, otherwise an empty numeric vector"""
    value = _arg(args, 0, "object")
    found = value.field("residuals") if value.is_record else None
    return found if found is not None else numeric(())


@register("lm.fit")
def builtin_lm_fit(interp, args, frame):
    raise RuntimeFailure("model fitting is not available; use the bundled fixtures")
