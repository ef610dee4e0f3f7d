#!/usr/bin/env python3
"""
s3lite Method Dispatch
UseMethod resolution over class vectors, default fallback and method listing
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from errors import RuntimeFailure
from evaluator import CallFrame, MethodTransfer
from values import Environment, MISSING, Value, character, get_class, logical, record

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DispatchOutcome:
    """Which method a generic resolved to, and every candidate name looked at on the way"""
    generic: str
    receiver_classes: tuple
    candidates_tried: tuple
    chosen: Optional[str]

    def as_record(self) -> Value:
        return record([
            ("generic", character([self.generic])),
            ("classes", character(self.receiver_classes)),
            ("tried", character(self.candidates_tried)),
            ("chosen", character([self.chosen] if self.chosen else [])),
        ])


def _function_binding(env: Environment, name: str) -> Optional[Value]:
    """First function bound to name along the chain; other bindings are skipped"""
    for frame_env in env.chain():
        value = frame_env.bindings.get(name)
        if value is not None and value is not MISSING and value.is_function:
            return value
    return None


def resolve_method(generic: str, classes, env: Environment) -> DispatchOutcome:
    """
    Scan `generic.<class>` for each class in order, then `generic.default`.

    Candidate names are only ever built by concatenation; identifiers in the
    environment are never split on dots.
    """
    if not generic:
        raise RuntimeFailure("generic name must be nonempty")
    tried = []
    for name in [f"{generic}.{cls}" for cls in classes] + [f"{generic}.default"]:
        tried.append(name)
        if _function_binding(env, name) is not None:
            logger.debug("dispatch %s%s -> %s", generic, list(classes), name)
            return DispatchOutcome(generic, tuple(classes), tuple(tried), name)
    logger.debug("dispatch %s%s found no method", generic, list(classes))
    return DispatchOutcome(generic, tuple(classes), tuple(tried), None)


def use_method(interp, generic: str, frame: Optional[CallFrame], receiver: Optional[Value] = None):
    """
    Tail transfer from a generic's body to the resolved method.

    Never returns: the method's result travels back to the generic's call in a
    MethodTransfer, which abandons the rest of the generic's body.
    """
    if frame is None:
        raise RuntimeFailure("UseMethod called from outside a function")
    if receiver is None:
        if not frame.args:
            raise RuntimeFailure(f"UseMethod('{generic}') has no argument to dispatch on")
        receiver = frame.args[0]

    classes = get_class(receiver)
    outcome = resolve_method(generic, classes, frame.env)
    if outcome.chosen is None:
        raise RuntimeFailure(
            f"no applicable method for '{generic}' applied to an object of class \"{classes[0]}\"")

    method = _function_binding(frame.env, outcome.chosen)
    # the method sees the original arguments and the original call-site text
    method_frame = CallFrame(outcome.chosen, frame.args, frame.env, frame.pos,
                             frame.arg_nodes, frame.sources)
    value = interp.eval_call(method, frame.args, method_frame)
    raise MethodTransfer(frame, value)


def methods_of(generic: str, env: Environment) -> Value:
    prefix = f"{generic}."
    found = set()
    for frame_env in env.chain():
        for name, value in frame_env.bindings.items():
            if name.startswith(prefix) and len(name) > len(prefix) and value is not MISSING \
                    and value.is_function and _function_binding(env, name) is not None:
                found.add(name)
    return character(sorted(found))


def inherits_op(v: Value, cls: str) -> Value:
    return logical([cls in get_class(v)])
