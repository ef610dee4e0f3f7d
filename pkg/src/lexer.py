#!/usr/bin/env python3
"""
s3lite Lexer
Turns mini-language source text into a token list
"""

import math
import re
import string
from dataclasses import dataclass
from enum import Enum

from errors import LexError


class TokenKind(str, Enum):
    IDENT = "Ident"
    NUMBER = "Number"
    STRING = "String"
    ARROW = "Arrow"
    DOLLAR = "Dollar"
    LPAREN = "LParen"
    RPAREN = "RParen"
    LBRACE = "LBrace"
    RBRACE = "RBrace"
    COMMA = "Comma"
    OP = "Op"
    IN_OP = "InOp"
    IF = "If"
    ELSE = "Else"
    FUNCTION = "FunctionKw"
    NEWLINE = "Newline"
    EOF = "Eof"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    col: int


KEYWORDS = {
    'if': TokenKind.IF,
    'else': TokenKind.ELSE,
    'function': TokenKind.FUNCTION,
}

IDENT_RE = re.compile(r'[A-Za-z.][A-Za-z0-9._]*')
NUMBER_RE = re.compile(r'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?')

DIGITS = set('0123456789')
LETTERS = set(string.ascii_letters)

SINGLE_CHAR = {
    '$': TokenKind.DOLLAR,
    '(': TokenKind.LPAREN,
    ')': TokenKind.RPAREN,
    '{': TokenKind.LBRACE,
    '}': TokenKind.RBRACE,
    ',': TokenKind.COMMA,
}

ESCAPES = {'"': '"', '\\': '\\', 'n': '\n', 't': '\t'}

# inverse table used by the pretty-printer
UNESCAPES = {'"': '\\"', '\\': '\\\\', '\n': '\\n', '\t': '\\t'}


class Lexer:
    """
    Single pass scanner.

    Newlines are significant only at top level and directly inside braces;
    inside parentheses they are dropped, so a call may span several lines.
    """

    def __init__(self, source):
        self.source = source
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens = []
        self.nesting = []

    def tokenize(self):
        src = self.source
        while self.pos < len(src):
            ch = src[self.pos]

            if ch in ' \t\r':
                self._advance(1)
            elif ch == '#':
                while self.pos < len(src) and src[self.pos] != '\n':
                    self._advance(1)
            elif ch == '\n' or ch == ';':
                if not self.nesting or self.nesting[-1] == '{':
                    self._emit(TokenKind.NEWLINE, ch)
                self._advance_over(ch)
            elif ch == '"':
                self._string()
            elif ch in DIGITS or (ch == '.' and src[self.pos + 1:self.pos + 2] in DIGITS):
                self._number()
            elif ch in LETTERS or ch == '.':
                match = IDENT_RE.match(src, self.pos)
                word = match.group(0)
                self._emit(KEYWORDS.get(word, TokenKind.IDENT), word)
                self._advance(len(word))
            elif src.startswith('<-', self.pos):
                self._emit(TokenKind.ARROW, '<-')
                self._advance(2)
            elif src.startswith('%in%', self.pos):
                self._emit(TokenKind.IN_OP, '%in%')
                self._advance(4)
            elif src.startswith('**', self.pos):
                self._emit(TokenKind.OP, '**')
                self._advance(2)
            elif ch == '^':
                # both spellings lex as the one power operator
                self._emit(TokenKind.OP, '**')
                self._advance(1)
            elif ch in '+-*/:':
                self._emit(TokenKind.OP, ch)
                self._advance(1)
            elif ch in SINGLE_CHAR:
                self._track_nesting(ch)
                self._emit(SINGLE_CHAR[ch], ch)
                self._advance(1)
            else:
                raise LexError(f"illegal character {ch!r}", self.line, self.col)

        self._emit(TokenKind.EOF, '')
        return self.tokens

    def _string(self):
        start_line, start_col = self.line, self.col
        src = self.source
        i = self.pos + 1
        chars = []
        while True:
            if i >= len(src) or src[i] == '\n':
                raise LexError("unterminated string", start_line, start_col)
            ch = src[i]
            if ch == '"':
                break
            if ch == '\\':
                nxt = src[i + 1:i + 2]
                if nxt in ESCAPES:
                    chars.append(ESCAPES[nxt])
                    i += 2
                    continue
                # unknown escapes keep their backslash
            chars.append(ch)
            i += 1
        self.tokens.append(Token(TokenKind.STRING, ''.join(chars), start_line, start_col))
        self._advance(i + 1 - self.pos)

    def _number(self):
        match = NUMBER_RE.match(self.source, self.pos)
        text = match.group(0)
        if not math.isfinite(float(text)):
            raise LexError(f"numeric literal {text} is out of range", self.line, self.col)
        self._emit(TokenKind.NUMBER, text)
        self._advance(len(text))

    def _track_nesting(self, ch):
        if ch in '({':
            self.nesting.append(ch)
        elif ch in ')}' and self.nesting:
            self.nesting.pop()

    def _emit(self, kind, lexeme):
        self.tokens.append(Token(kind, lexeme, self.line, self.col))

    def _advance(self, n):
        self.pos += n
        self.col += n

    def _advance_over(self, ch):
        self.pos += 1
        if ch == '\n':
            self.line += 1
            self.col = 1
        else:
            self.col += 1


def tokenize(source):
    """Tokenize source text; the list always ends with an Eof token"""
    return Lexer(source).tokenize()
