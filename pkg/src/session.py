#!/usr/bin/env python3
"""
s3lite Session
Prelude loading and statement-at-a-time execution shared by the CLI and the playground
"""

from __future__ import annotations

import io
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from errors import LexError, ParseError, RuntimeFailure
from evaluator import Diagnostic, DiagnosticSink, Interpreter
from frames import DATA_DIR
from parser import Block, parse_source
from stdlib import auto_print, install_builtins

load_dotenv()

logger = logging.getLogger(__name__)

MODES = ("run-file", "eval", "repl")
COLORS = ("auto", "never")

PRELUDE_PATH = DATA_DIR / "prelude.s3l"

ANSI = {'error': '\033[31m', 'warning': '\033[33m'}
ANSI_RESET = '\033[0m'


def configure_logging(level=None) -> None:
    """Developer tracing on stderr; S3L_LOG_LEVEL picks the level"""
    name = (level or os.environ.get('S3L_LOG_LEVEL') or 'WARNING').upper()
    logging.basicConfig(level=getattr(logging, name, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)


@dataclass
class SessionConfig:
    """How a session starts: what to run, with or without the prelude, and how to color diagnostics"""
    mode: str = "repl"
    target: Optional[str] = None
    prelude: bool = True
    color: str = "auto"
    prelude_path: Optional[str] = None
    data_dir: Optional[str] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.color not in COLORS:
            raise ValueError(f"unknown color setting {self.color!r}")
        if self.mode != "repl" and self.target is None:
            raise ValueError(f"mode {self.mode} needs a target")

    def resolved_prelude_path(self) -> Path:
        return Path(self.prelude_path or os.environ.get('S3L_PRELUDE') or PRELUDE_PATH)

    def resolved_data_dir(self) -> Path:
        return Path(self.data_dir or os.environ.get('S3L_DATA_DIR') or DATA_DIR)


@dataclass
class EvalResult:
    stdout: str
    diagnostics: list = field(default_factory=list)
    exit_status: int = 0


class Session:
    """One interpreter and its global environment, seeded with builtins and the prelude"""

    def __init__(self, config: Optional[SessionConfig] = None, out=None, err=None):
        self.config = config or SessionConfig()
        self.out = out if out is not None else sys.stdout
        self.err = err if err is not None else sys.stderr
        self.sink = DiagnosticSink()
        self.interp = Interpreter(self.sink, self.out, data_dir=self.config.resolved_data_dir())
        install_builtins(self.interp.global_env)
        if self.config.prelude:
            self.load_prelude()

    @property
    def env(self):
        return self.interp.global_env

    def load_prelude(self) -> None:
        path = self.config.resolved_prelude_path()
        source = path.read_text(encoding="utf-8")
        program = parse_source(source)
        self.interp.eval_program(program)
        self.flush()
        logger.info("prelude %s loaded: %d statements", path, len(program.statements))

    # -- execution ------------------------------------------------------------

    def execute(self, source: str) -> int:
        """Run a whole program; returns 0, or the exit code of the first failure"""
        try:
            program = parse_source(source)
        except (LexError, ParseError) as err:
            self.report_syntax_error(err)
            return err.exit_code
        return self.run_program(program)

    def run_program(self, program: Block) -> int:
        for statement in program.statements:
            status = self.run_statement(statement)
            if status:
                return status
        return 0

    def run_statement(self, statement) -> int:
        """Evaluate one top-level statement, auto-print it if visible, then flush diagnostics"""
        status = 0
        try:
            self.interp.visible = True
            value = self.interp.eval(statement, self.env)
            if self.interp.visible:
                auto_print(self.interp, value, self.env)
        except RuntimeFailure as err:
            self.sink.add(Diagnostic('error', err.message, err.context))
            status = err.exit_code
        finally:
            self.interp.frames.clear()
        self.flush()
        return status

    def report_syntax_error(self, err) -> None:
        self.sink.add(Diagnostic('error', str(err)))
        self.flush()

    # -- output ---------------------------------------------------------------

    @property
    def use_color(self) -> bool:
        return self.config.color == "auto" and hasattr(self.err, 'isatty') and self.err.isatty()

    def flush(self) -> None:
        """Diagnostics follow the statement's own output"""
        self.out.flush()
        for diagnostic in self.sink.drain():
            line = diagnostic.render()
            if self.use_color:
                line = f"{ANSI[diagnostic.severity]}{line}{ANSI_RESET}"
            self.err.write(line + "\n")
        self.err.flush()

    def evaluate(self, source: str) -> EvalResult:
        """Run source with both streams captured, for callers that are not a terminal"""
        saved = self.out, self.err
        out, err = io.StringIO(), io.StringIO()
        self.out = self.interp.out = out
        self.err = err
        try:
            status = self.execute(source)
        finally:
            self.out, self.err = saved
            self.interp.out = self.out
        return EvalResult(out.getvalue(), err.getvalue().splitlines(), status)
