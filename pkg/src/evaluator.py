#!/usr/bin/env python3
"""
s3lite Evaluator
Tree-walking evaluation of the mini-language: closures, calls, replacement
assignment, conditionals and warnings
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass, field
from functools import singledispatchmethod
from typing import Optional

import numpy as np

from display import format_plain
from errors import RuntimeFailure
from parser import (Assign, Binary, Block, Call, FieldAccess, FunctionDef, Ident, If,
                    NumberLit, ReplacementAssign, StringLit, Unary, pretty_print)
from values import (NULL, Environment, Kind, Value, character, closure,
                    logical, numeric, set_class, MISSING)

logger = logging.getLogger(__name__)

# name -> builtin Value; call-position lookups fall back here when the scope chain has no function
BASE_FUNCTIONS = {}


@dataclass
class CallFrame:
    """
    One function application.

    `env` is the environment the call was evaluated in; method resolution
    for UseMethod starts there. `arg_nodes` keep the call-site expressions so
    diagnostics can show `rss.default(lm.fit)`.
    """
    callee_name: str
    args: tuple
    env: Optional[Environment] = None
    pos: tuple = (0, 0)
    arg_nodes: tuple = ()
    sources: Optional[tuple] = None

    @property
    def arg_sources(self) -> tuple:
        if self.sources is None:
            self.sources = tuple(pretty_print(node) for node in self.arg_nodes)
        return self.sources

    def render(self) -> str:
        return f"{self.callee_name}({', '.join(self.arg_sources)})"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    context: Optional[str] = None

    def render(self) -> str:
        label = 'Warning' if self.severity == 'warning' else 'Error'
        if self.context:
            return f"{label} in {self.context}: {self.message}"
        return f"{label}: {self.message}"


@dataclass
class DiagnosticSink:
    """Collects warnings and errors until the session flushes them after a statement"""
    pending: list = field(default_factory=list)

    def add(self, diagnostic: Diagnostic) -> None:
        self.pending.append(diagnostic)

    def drain(self) -> list:
        drained, self.pending = self.pending, []
        return drained


class MethodTransfer(Exception):
    """Carries a dispatched method's result out of the generic's body"""

    def __init__(self, frame, value):
        super().__init__(frame.callee_name)
        self.frame = frame
        self.value = value


class Interpreter:
    """
    Evaluates AST nodes against environments.

    `visible` tracks whether the most recent result should be auto-printed:
    assignments, invisible(), print() and warning() clear it.
    """

    def __init__(self, sink=None, out=None, data_dir=None):
        self.sink = sink if sink is not None else DiagnosticSink()
        self.out = out if out is not None else sys.stdout
        self.data_dir = data_dir
        self.global_env = Environment(name="global")
        self.frames = []
        self.visible = True

    @property
    def current_frame(self) -> Optional[CallFrame]:
        return self.frames[-1] if self.frames else None

    def write(self, text: str) -> None:
        self.out.write(text)

    # -- programs -----------------------------------------------------------

    def eval_program(self, ast: Block, env: Optional[Environment] = None) -> Value:
        """Evaluate statements in order; the first runtime error aborts the rest"""
        env = env if env is not None else self.global_env
        result = NULL
        self.visible = False
        for statement in ast.statements:
            result = self.eval(statement, env)
        return result

    # -- node evaluation ------------------------------------------------------

    @singledispatchmethod
    def eval(self, node, env: Environment) -> Value:
        raise RuntimeFailure(f"cannot evaluate {type(node).__name__}")

    @eval.register
    def _(self, node: NumberLit, env):
        self.visible = True
        return numeric([node.value])

    @eval.register
    def _(self, node: StringLit, env):
        self.visible = True
        return character([node.value])

    @eval.register
    def _(self, node: Ident, env):
        value = env.lookup(node.name)
        self.visible = True
        return value

    @eval.register
    def _(self, node: Assign, env):
        value = self.eval(node.expr, env)
        env.define(node.target, value)
        self.visible = False
        return NULL

    @eval.register
    def _(self, node: ReplacementAssign, env):
        rhs = self.eval(node.rhs, env)
        self.eval_replacement(node.fn, node.target, node.extra, rhs, env)
        self.visible = False
        return NULL

    @eval.register
    def _(self, node: FieldAccess, env):
        target = self.eval(node.expr, env)
        self.visible = True
        if target.is_record:
            found = target.field(node.name)
            return found if found is not None else NULL
        if target.is_null:
            return NULL
        raise RuntimeFailure("$ operator is invalid for atomic vectors")

    @eval.register
    def _(self, node: Block, env):
        result = NULL
        self.visible = True
        for statement in node.statements:
            result = self.eval(statement, env)
        return result

    @eval.register
    def _(self, node: If, env):
        cond = self.eval(node.cond, env)
        if truth(cond):
            return self.eval(node.then, env)
        if node.orelse is not None:
            return self.eval(node.orelse, env)
        self.visible = False
        return NULL

    @eval.register
    def _(self, node: FunctionDef, env):
        self.visible = True
        return closure(node.params, node.body, env)

    @eval.register
    def _(self, node: Unary, env):
        operand = self.eval(node.operand, env)
        self.visible = True
        return numeric(-as_numbers(operand, "invalid argument to unary operator"))

    @eval.register
    def _(self, node: Binary, env):
        lhs = self.eval(node.lhs, env)
        rhs = self.eval(node.rhs, env)
        self.visible = True
        if node.op == '%in%':
            return membership(lhs, rhs)
        if node.op == ':':
            return colon_range(lhs, rhs)
        return arithmetic(node.op, lhs, rhs)

    @eval.register
    def _(self, node: Call, env):
        callee = self._resolve_callee(node.callee, env)
        # strict, left to right, each argument exactly once
        args = tuple(self.eval(arg, env) for arg in node.args)
        name = node.callee.name if isinstance(node.callee, Ident) else pretty_print(node.callee)
        frame = CallFrame(name, args, env, node.pos, node.args)
        return self.eval_call(callee, args, frame)

    def _resolve_callee(self, callee_node, env):
        if not isinstance(callee_node, Ident):
            return self.eval(callee_node, env)
        # a symbol in call position skips non-function bindings
        seen_binding = False
        for frame_env in env.chain():
            value = frame_env.bindings.get(callee_node.name)
            if value is None or value is MISSING:
                continue
            seen_binding = True
            if value.is_function:
                return value
        if callee_node.name in BASE_FUNCTIONS:
            return BASE_FUNCTIONS[callee_node.name]
        if seen_binding:
            raise RuntimeFailure("attempt to apply non-function")
        raise RuntimeFailure(f'could not find function "{callee_node.name}"')

    # -- calls ----------------------------------------------------------------

    def eval_call(self, callee: Value, args: tuple, frame: CallFrame) -> Value:
        if callee.kind is Kind.BUILTIN:
            self.visible = True
            try:
                return callee.payload.fn(self, args, frame)
            except RuntimeFailure as err:
                if err.context is None:
                    err.context = frame.render()
                raise

        if callee.kind is not Kind.CLOSURE:
            raise RuntimeFailure("attempt to apply non-function")

        fn = callee.payload
        local = Environment(parent=fn.env, name=frame.callee_name)
        # extra arguments beyond the declared parameters are accepted and ignored
        for i, param in enumerate(fn.params):
            local.define(param, args[i] if i < len(args) else MISSING)

        self.frames.append(frame)
        try:
            self.visible = True
            return self.eval(fn.body, local)
        except MethodTransfer as transfer:
            if transfer.frame is not frame:
                raise
            return transfer.value
        except RuntimeFailure as err:
            if err.context is None:
                err.context = frame.render()
            raise
        except RecursionError:
            raise RuntimeFailure("evaluation nested too deeply: infinite recursion?", frame.render())
        finally:
            self.frames.pop()

    def call_function(self, fn: Value, args: tuple, name: str, env=None, sources=None) -> Value:
        """Apply fn from Python code (auto-print, dispatch_trace helpers)"""
        frame = CallFrame(name, tuple(args), env or self.global_env, (0, 0), (), sources or ('x',) * len(args))
        return self.eval_call(fn, tuple(args), frame)

    # -- replacement ------------------------------------------------------------

    def eval_replacement(self, fn: str, target: str, extra: tuple, rhs: Value, env: Environment) -> None:
        old = env.lookup(target)
        if fn == 'class':
            new = set_class(old, rhs)
        elif fn == 'attr':
            if not extra:
                raise RuntimeFailure("attr() <- needs an attribute name")
            name = self.eval(extra[0], env)
            if name.kind is not Kind.CHARACTER or len(name) != 1:
                raise RuntimeFailure("attribute name must be a single string")
            attr_name = name.payload[0]
            new = set_class(old, rhs) if attr_name == 'class' else old.with_attr(attr_name, rhs)
        elif fn == '$':
            field_name = extra[0].value
            if old.is_null:
                old = Value(Kind.RECORD, ())
            if not old.is_record:
                raise RuntimeFailure("$<- is only valid for records")
            new = old.with_field(field_name, rhs)
        else:
            raise RuntimeFailure(f"unknown replacement function {fn}<-")
        # the rebinding lands in the innermost frame, leaving other copies untouched
        env.define(target, new)

    # -- warnings ------------------------------------------------------------------

    def emit_warning(self, message: str, frame: Optional[CallFrame] = None) -> Value:
        context = frame.render() if frame is not None else None
        logger.debug("warning raised in %s", context or "top level")
        self.sink.add(Diagnostic('warning', message, context))
        self.visible = False
        return NULL


def emit_warning(message, frame, sink) -> Value:
    """Record a warning without an interpreter at hand"""
    sink.add(Diagnostic('warning', message, frame.render() if frame is not None else None))
    return NULL


def eval_program(ast: Block, env: Environment, sink: DiagnosticSink) -> Value:
    interp = Interpreter(sink)
    return interp.eval_program(ast, env)


# -- operators -------------------------------------------------------------------

def truth(cond: Value) -> bool:
    if cond.kind not in (Kind.LOGICAL, Kind.NUMERIC):
        if cond.kind is Kind.CHARACTER and len(cond):
            raise RuntimeFailure("argument is not interpretable as logical")
        if not len(cond) or not cond.is_vector:
            raise RuntimeFailure("argument is of length zero")
    if len(cond) == 0:
        raise RuntimeFailure("argument is of length zero")
    if len(cond) > 1:
        raise RuntimeFailure("the condition has length > 1")
    first = cond.payload[0]
    if isinstance(first, float) and math.isnan(first):
        raise RuntimeFailure("missing value where TRUE/FALSE needed")
    return bool(first)


def as_numbers(v: Value, message="non-numeric argument to binary operator") -> np.ndarray:
    if v.kind is Kind.NUMERIC:
        return np.asarray(v.payload, dtype=float)
    if v.kind is Kind.LOGICAL:
        return np.asarray(v.payload, dtype=float)
    if v.is_null:
        return np.zeros(0)
    raise RuntimeFailure(message)


OPERATORS = {
    '+': np.add,
    '-': np.subtract,
    '*': np.multiply,
    '/': np.divide,
    '**': np.power,
}


def arithmetic(op: str, lhs: Value, rhs: Value) -> Value:
    """Element-wise arithmetic; only length-1 operands broadcast"""
    a = as_numbers(lhs)
    b = as_numbers(rhs)
    if len(a) == 0 or len(b) == 0:
        return numeric(())
    if len(a) != len(b) and len(a) != 1 and len(b) != 1:
        raise RuntimeFailure(f"operand lengths differ ({len(a)} vs {len(b)}) and neither is 1")
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        result = OPERATORS[op](a, b)
    return numeric(np.atleast_1d(result).tolist())


def colon_range(lhs: Value, rhs: Value) -> Value:
    a = as_numbers(lhs, "non-numeric argument to ':'")
    b = as_numbers(rhs, "non-numeric argument to ':'")
    if len(a) == 0 or len(b) == 0:
        raise RuntimeFailure("argument of length 0")
    start, stop = float(a[0]), float(b[0])
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise RuntimeFailure("NA/NaN argument")
    step = 1.0 if stop >= start else -1.0
    count = int(math.floor(abs(stop - start) + 1e-10)) + 1
    return numeric([start + step * i for i in range(count)])


def membership(lhs: Value, rhs: Value) -> Value:
    """`a %in% b`: for each element of a, whether it occurs in b"""
    if lhs.is_null:
        return logical(())
    if not lhs.is_vector or not (rhs.is_vector or rhs.is_null):
        raise RuntimeFailure("%in% needs vector operands")
    pool = rhs.payload if rhs.is_vector else ()
    if Kind.CHARACTER in (lhs.kind, rhs.kind):
        haystack = {format_plain(x) for x in pool}
        return logical([format_plain(x) in haystack for x in lhs.payload])
    haystack = {float(x) for x in pool}
    return logical([float(x) in haystack for x in lhs.payload])
