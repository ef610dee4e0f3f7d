#!/usr/bin/env python3
"""
s3lite Value Model
Runtime values with attribute lists, class vectors and lexical environments
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterator, Optional, Sequence

from errors import RuntimeFailure


class Kind(str, Enum):
    """Payload kinds a Value can carry"""
    NUMERIC = "numeric"
    CHARACTER = "character"
    LOGICAL = "logical"
    RECORD = "list"
    CLOSURE = "closure"
    BUILTIN = "builtin"
    NULL = "NULL"


VECTOR_KINDS = (Kind.NUMERIC, Kind.CHARACTER, Kind.LOGICAL)

IMPLICIT_CLASS = {
    Kind.NUMERIC: "numeric",
    Kind.CHARACTER: "character",
    Kind.LOGICAL: "logical",
    Kind.RECORD: "list",
    Kind.CLOSURE: "function",
    Kind.BUILTIN: "function",
    Kind.NULL: "NULL",
}


@dataclass(frozen=True, eq=False)
class Closure:
    """User function: parameter names, body and the environment it closes over"""
    params: tuple
    body: Any
    env: "Environment"


@dataclass(frozen=True, eq=False)
class Builtin:
    """Function implemented in Python"""
    name: str
    # called as fn(interp, args, frame)
    fn: Callable


@dataclass(frozen=True)
class Value:
    """
    Tagged runtime value.

    Values are immutable: every "mutation" (class<-, attr<-, x$f <-) builds a
    new Value, so assignment and argument passing have copy semantics while
    the underlying tuples are shared freely.
    """
    kind: Kind
    payload: Any = None
    attributes: tuple = ()

    # -- classification ---------------------------------------------------

    @property
    def is_vector(self) -> bool:
        return self.kind in VECTOR_KINDS

    @property
    def is_function(self) -> bool:
        return self.kind in (Kind.CLOSURE, Kind.BUILTIN)

    @property
    def is_null(self) -> bool:
        return self.kind is Kind.NULL

    @property
    def is_record(self) -> bool:
        return self.kind is Kind.RECORD

    def __len__(self) -> int:
        if self.is_vector or self.is_record:
            return len(self.payload)
        if self.is_null:
            return 0
        return 1

    # -- attributes -------------------------------------------------------

    def attr(self, name: str) -> Optional[Value]:
        for key, value in self.attributes:
            if key == name:
                return value
        return None

    def with_attr(self, name: str, value: Optional[Value]) -> Value:
        """Copy with attribute `name` set (or removed when value is None or NULL)"""
        kept = []
        replaced = False
        for key, old in self.attributes:
            if key == name:
                replaced = True
                if value is not None and not value.is_null:
                    kept.append((key, value))
            else:
                kept.append((key, old))
        if not replaced and value is not None and not value.is_null:
            kept.append((name, value))
        return Value(self.kind, self.payload, tuple(kept))

    # -- records ----------------------------------------------------------

    def field_names(self) -> list:
        return [name for name, _ in self.payload]

    def field(self, name: str) -> Optional[Value]:
        for key, value in self.payload:
            if key == name:
                return value
        return None

    def with_field(self, name: str, value: Value) -> Value:
        if not name:
            raise RuntimeFailure("record field names must be nonempty")
        fields = []
        replaced = False
        for key, old in self.payload:
            if key == name:
                replaced = True
                if not value.is_null:
                    fields.append((key, value))
            else:
                fields.append((key, old))
        if not replaced and not value.is_null:
            fields.append((name, value))
        return Value(Kind.RECORD, tuple(fields), self.attributes)


NULL = Value(Kind.NULL)


def numeric(values: Sequence[float] = (), attributes=()) -> Value:
    return Value(Kind.NUMERIC, tuple(float(v) for v in values), tuple(attributes))


def character(values: Sequence[str] = (), attributes=()) -> Value:
    return Value(Kind.CHARACTER, tuple(str(v) for v in values), tuple(attributes))


def logical(values: Sequence[bool] = (), attributes=()) -> Value:
    return Value(Kind.LOGICAL, tuple(bool(v) for v in values), tuple(attributes))


def record(fields, attributes=()) -> Value:
    """Build a record from (name, Value) pairs or a dict; names must be unique and nonempty"""
    pairs = list(fields.items()) if isinstance(fields, dict) else list(fields)
    seen = set()
    for name, _ in pairs:
        if not name:
            raise RuntimeFailure("record field names must be nonempty")
        if name in seen:
            raise RuntimeFailure(f"duplicate record field '{name}'")
        seen.add(name)
    return Value(Kind.RECORD, tuple(pairs), tuple(attributes))


def closure(params, body, env) -> Value:
    return Value(Kind.CLOSURE, Closure(tuple(params), body, env))


def builtin(name, fn) -> Value:
    return Value(Kind.BUILTIN, Builtin(name, fn))


# -- class vectors ----------------------------------------------------------

def get_class(v: Value) -> tuple:
    """Explicit class attribute if present, otherwise the implicit class"""
    explicit = v.attr("class")
    if explicit is not None:
        return explicit.payload
    return (IMPLICIT_CLASS[v.kind],)


def set_class(v: Value, classes) -> Value:
    """Copy of v whose class attribute is `classes` (a character Value or a sequence of str)"""
    if isinstance(classes, Value):
        if classes.is_null:
            return v.with_attr("class", None)
        if classes.kind is not Kind.CHARACTER:
            raise RuntimeFailure("class must be a character vector")
        names = classes.payload
    else:
        names = tuple(classes)
    if not names:
        raise RuntimeFailure("class vector must not be empty")
    if any(not name for name in names):
        raise RuntimeFailure("class names must be nonempty strings")
    return v.with_attr("class", character(names))


# -- environments -----------------------------------------------------------

class _Missing:
    """Placeholder bound to parameters the caller did not supply"""

    def __repr__(self):
        return "<missing>"


MISSING = _Missing()


@dataclass(eq=False)
class Environment:
    """
    Lexically scoped frame of bindings.

    Lookup walks the parent chain; define always writes the innermost frame.
    Methods are ordinary bindings named `generic.class`.
    """
    parent: Optional[Environment] = None
    name: str = "anonymous"
    bindings: dict = field(default_factory=dict)

    def find(self, name: str):
        env = self
        while env is not None:
            if name in env.bindings:
                return env.bindings[name]
            env = env.parent
        return None

    def lookup(self, name: str) -> Value:
        value = self.find(name)
        if value is None:
            raise RuntimeFailure(f"object '{name}' not found")
        if value is MISSING:
            raise RuntimeFailure(f'argument "{name}" is missing, with no default')
        return value

    def define(self, name: str, value) -> None:
        if not name:
            raise RuntimeFailure("binding names must be nonempty")
        self.bindings[name] = value

    def chain(self) -> Iterator[Environment]:
        env = self
        while env is not None:
            yield env
            env = env.parent

    def __repr__(self):
        return f"<environment {self.name}: {len(self.bindings)} bindings>"


def env_lookup(env: Environment, name: str) -> Value:
    return env.lookup(name)


def env_define(env: Environment, name: str, v: Value) -> None:
    env.define(name, v)
