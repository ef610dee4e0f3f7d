#!/usr/bin/env python3
"""
s3lite Error Types
Lexical, syntax and runtime failures raised by the interpreter
"""


class S3LiteError(Exception):
    """Base class for every error the interpreter reports to the user"""

    exit_code = 1

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class LexError(S3LiteError):
    """Unterminated string or illegal character"""

    exit_code = 2

    def __init__(self, message, line, col):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self):
        return f"{self.line}:{self.col}: {self.message}"


class ParseError(S3LiteError):
    """Syntax error with the position of the offending token"""

    exit_code = 2

    def __init__(self, message, line, col, at_eof=False):
        super().__init__(message)
        self.line = line
        self.col = col
        # the REPL keeps reading lines while the input is merely incomplete
        self.at_eof = at_eof

    def __str__(self):
        return f"{self.line}:{self.col}: {self.message}"


class RuntimeFailure(S3LiteError):
    """Error raised while evaluating a program"""

    exit_code = 1

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context

    def __str__(self):
        return self.message


class TableError(RuntimeFailure):
    """Malformed table file handed to load_table"""
