#!/usr/bin/env python3
"""
s3lite Command Line
Runs a script, a single expression, or an interactive prompt
"""

from __future__ import annotations

import argparse
import logging
import sys

from errors import LexError, ParseError, S3LiteError
from parser import parse_source
from session import Session, SessionConfig, configure_logging

logger = logging.getLogger(__name__)

PROMPT = "s3l> "
CONTINUATION = "+ "

EXIT_OK = 0
EXIT_IO = 3


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s3lite",
        description="Interpreter for a small R-like language with S3 method dispatch")
    parser.add_argument("file", nargs="?", help="script to run (.s3l)")
    parser.add_argument("-e", dest="expr", metavar="EXPR", help="evaluate EXPR and exit")
    parser.add_argument("--no-prelude", action="store_true",
                        help="start without the standard generics, methods and fixtures")
    parser.add_argument("--color", choices=("never", "auto"), default="auto",
                        help="color diagnostics when stderr is a terminal (default: auto)")
    return parser


def config_from_args(args) -> SessionConfig:
    if args.file and args.expr is not None:
        raise ValueError("give either a script file or -e, not both")
    if args.expr is not None:
        mode, target = "eval", args.expr
    elif args.file:
        mode, target = "run-file", args.file
    else:
        mode, target = "repl", None
    return SessionConfig(mode=mode, target=target, prelude=not args.no_prelude, color=args.color)


def run_file(session: Session, path: str) -> int:
    try:
        with open(path, encoding="utf-8") as handle:
            source = handle.read()
    except OSError as err:
        session.err.write(f"Error: cannot open file '{path}': {err.strerror}\n")
        return EXIT_IO
    return session.execute(source)


def eval_flag(session: Session, expr: str) -> int:
    return session.execute(expr)


def repl(session: Session, stdin=None) -> int:
    """Read-eval-print until end of input; errors are reported and the loop goes on"""
    stdin = stdin if stdin is not None else sys.stdin
    buffer = []
    while True:
        session.err.write(CONTINUATION if buffer else PROMPT)
        session.err.flush()
        line = stdin.readline()
        if not line:
            if buffer:
                session.execute(''.join(buffer))
            return EXIT_OK
        buffer.append(line)
        try:
            program = parse_source(''.join(buffer))
        except ParseError as err:
            if err.at_eof:
                continue
            session.report_syntax_error(err)
            buffer = []
            continue
        except LexError as err:
            session.report_syntax_error(err)
            buffer = []
            continue
        buffer = []
        session.run_program(program)


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    configure_logging()
    args = build_arg_parser().parse_args(argv)
    err = stderr if stderr is not None else sys.stderr
    try:
        config = config_from_args(args)
    except ValueError as exc:
        err.write(f"s3lite: {exc}\n")
        return 2

    try:
        session = Session(config, out=stdout, err=stderr)
    except OSError as exc:
        err.write(f"Error: cannot load prelude: {exc}\n")
        return EXIT_IO
    except S3LiteError as exc:
        err.write(f"Error in prelude: {exc}\n")
        return exc.exit_code

    if config.mode == "run-file":
        return run_file(session, config.target)
    if config.mode == "eval":
        return eval_flag(session, config.target)
    return repl(session, stdin)


if __name__ == "__main__":
    sys.exit(main())
