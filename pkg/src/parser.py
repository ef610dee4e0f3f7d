#!/usr/bin/env python3
"""
s3lite Parser
Recursive-descent parser, AST node types and canonical pretty-printer
"""

from __future__ import annotations

from dataclasses import dataclass, field

from errors import ParseError
from lexer import Token, TokenKind, UNESCAPES, tokenize

# Positions never take part in structural equality.
POS = dict(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class NumberLit:
    value: float
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class StringLit:
    value: str
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class Ident:
    name: str
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class Assign:
    target: str
    expr: object
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class FieldAccess:
    expr: object
    name: str
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class Call:
    callee: object
    args: tuple
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class FunctionDef:
    params: tuple
    body: object
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class Block:
    statements: tuple
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class If:
    cond: object
    then: object
    orelse: object = None
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class Binary:
    op: str
    lhs: object
    rhs: object
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object
    pos: tuple = field(**POS)


@dataclass(frozen=True)
class ReplacementAssign:
    """`class(x) <- v`, `attr(x, "n") <- v` and `x$f <- v` (fn is "$", extra holds the field name)"""
    fn: str
    target: str
    extra: tuple
    rhs: object
    pos: tuple = field(**POS)


REPLACEMENT_FUNCTIONS = ('class', 'attr')

# Binding power of each binary operator and whether it associates to the right.
BINARY_OPS = {
    '%in%': (2, False),
    '+': (3, False),
    '-': (3, False),
    '*': (4, False),
    '/': (4, False),
    ':': (5, False),
    '**': (7, True),
}
ASSIGN_LEVEL = 1
UNARY_LEVEL = 6
POSTFIX_LEVEL = 8


class Parser:
    """Recursive descent over the token list produced by the lexer"""

    def __init__(self, tokens):
        self.tokens = tokens
        self.index = 0
        self.brace_depth = 0

    # -- token helpers ------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _check(self, kind, lexeme=None):
        tok = self.current
        return tok.kind == kind and (lexeme is None or tok.lexeme == lexeme)

    def _advance(self) -> Token:
        tok = self.current
        if tok.kind != TokenKind.EOF:
            self.index += 1
        return tok

    def _expect(self, kind, what):
        if not self._check(kind):
            self._fail(f"expected {what}")
        return self._advance()

    def _skip_newlines(self):
        while self._check(TokenKind.NEWLINE):
            self._advance()

    def _fail(self, message):
        tok = self.current
        if tok.kind == TokenKind.EOF:
            raise ParseError(f"{message}, found end of input", tok.line, tok.col, at_eof=True)
        shown = 'newline' if tok.kind == TokenKind.NEWLINE else repr(tok.lexeme)
        raise ParseError(f"{message}, found {shown}", tok.line, tok.col)

    # -- program structure --------------------------------------------------

    def parse_program(self) -> Block:
        statements = []
        self._skip_newlines()
        while not self._check(TokenKind.EOF):
            statements.append(self.parse_expr())
            if not self._check(TokenKind.EOF):
                self._expect(TokenKind.NEWLINE, "newline or ';' between statements")
            self._skip_newlines()
        return Block(tuple(statements), (1, 1))

    def parse_block(self) -> Block:
        start = self._expect(TokenKind.LBRACE, "'{'")
        self.brace_depth += 1
        statements = []
        self._skip_newlines()
        while not self._check(TokenKind.RBRACE):
            statements.append(self.parse_expr())
            if not self._check(TokenKind.RBRACE):
                self._expect(TokenKind.NEWLINE, "newline, ';' or '}'")
            self._skip_newlines()
        self._advance()
        self.brace_depth -= 1
        return Block(tuple(statements), (start.line, start.col))

    # -- expressions --------------------------------------------------------

    def parse_expr(self):
        """Assignment level: `target <- expr`, right associative"""
        lhs = self.parse_binary(ASSIGN_LEVEL + 1)
        if not self._check(TokenKind.ARROW):
            return lhs
        arrow = self._advance()
        self._skip_newlines()
        rhs = self.parse_expr()
        return self._make_assignment(lhs, rhs, arrow)

    def _make_assignment(self, lhs, rhs, arrow):
        pos = (arrow.line, arrow.col)
        if isinstance(lhs, Ident):
            return Assign(lhs.name, rhs, lhs.pos)
        if isinstance(lhs, FieldAccess) and isinstance(lhs.expr, Ident):
            return ReplacementAssign('$', lhs.expr.name, (StringLit(lhs.name),), rhs, lhs.pos)
        if isinstance(lhs, Call):
            if not isinstance(lhs.callee, Ident) or lhs.callee.name not in REPLACEMENT_FUNCTIONS:
                name = lhs.callee.name if isinstance(lhs.callee, Ident) else 'expression'
                raise ParseError(f"'{name}' is not a replacement function; "
                                 f"only class() and attr() may appear left of '<-'", *lhs.callee.pos)
            if not lhs.args or not isinstance(lhs.args[0], Ident):
                raise ParseError(f"{lhs.callee.name}() <- needs a variable as its first argument", *lhs.callee.pos)
            return ReplacementAssign(lhs.callee.name, lhs.args[0].name, lhs.args[1:], rhs, lhs.pos)
        raise ParseError("invalid assignment target", *pos)

    def parse_binary(self, min_level):
        lhs = self.parse_unary()
        while True:
            tok = self.current
            if tok.kind not in (TokenKind.OP, TokenKind.IN_OP) or tok.lexeme not in BINARY_OPS:
                return lhs
            level, right = BINARY_OPS[tok.lexeme]
            if level < min_level:
                return lhs
            self._advance()
            self._skip_newlines()
            rhs = self.parse_binary(level if right else level + 1)
            lhs = Binary(tok.lexeme, lhs, rhs, (tok.line, tok.col))

    def parse_unary(self):
        if self._check(TokenKind.OP, '-'):
            tok = self._advance()
            operand = self.parse_unary()
            return Unary('-', operand, (tok.line, tok.col))
        return self.parse_power()

    def parse_power(self):
        base = self.parse_postfix()
        if self._check(TokenKind.OP, '**'):
            tok = self._advance()
            self._skip_newlines()
            # right associative; the exponent may carry its own unary minus
            exponent = self.parse_unary()
            return Binary('**', base, exponent, (tok.line, tok.col))
        return base

    def parse_postfix(self):
        node = self.parse_primary()
        while True:
            if self._check(TokenKind.DOLLAR):
                tok = self._advance()
                name = self._expect(TokenKind.IDENT, "field name after '$'")
                node = FieldAccess(node, name.lexeme, (tok.line, tok.col))
            elif self._check(TokenKind.LPAREN):
                tok = self._advance()
                node = Call(node, self._parse_args(), (tok.line, tok.col))
            else:
                return node

    def _parse_args(self):
        args = []
        if self._check(TokenKind.RPAREN):
            self._advance()
            return tuple(args)
        while True:
            args.append(self.parse_expr())
            if self._check(TokenKind.COMMA):
                self._advance()
                continue
            self._expect(TokenKind.RPAREN, "',' or ')'")
            return tuple(args)

    def parse_primary(self):
        tok = self.current
        pos = (tok.line, tok.col)
        if tok.kind == TokenKind.NUMBER:
            self._advance()
            return NumberLit(float(tok.lexeme), pos)
        if tok.kind == TokenKind.STRING:
            self._advance()
            return StringLit(tok.lexeme, pos)
        if tok.kind == TokenKind.IDENT:
            self._advance()
            return Ident(tok.lexeme, pos)
        if tok.kind == TokenKind.LPAREN:
            self._advance()
            inner = self.parse_expr()
            self._expect(TokenKind.RPAREN, "')'")
            return inner
        if tok.kind == TokenKind.LBRACE:
            return self.parse_block()
        if tok.kind == TokenKind.IF:
            return self.parse_if()
        if tok.kind == TokenKind.FUNCTION:
            return self.parse_function()
        self._fail("expected an expression")

    def parse_if(self):
        tok = self._advance()
        self._expect(TokenKind.LPAREN, "'(' after if")
        cond = self.parse_expr()
        self._expect(TokenKind.RPAREN, "')' after condition")
        self._skip_newlines()
        then = self.parse_expr()
        orelse = None
        if self._else_follows():
            self._skip_newlines()
            self._advance()
            self._skip_newlines()
            orelse = self.parse_expr()
        return If(cond, then, orelse, (tok.line, tok.col))

    def _else_follows(self):
        if self._check(TokenKind.ELSE):
            return True
        # inside braces an else may start the next line
        if self.brace_depth == 0:
            return False
        i = self.index
        while self.tokens[i].kind == TokenKind.NEWLINE:
            i += 1
        return self.tokens[i].kind == TokenKind.ELSE

    def parse_function(self):
        tok = self._advance()
        self._expect(TokenKind.LPAREN, "'(' after function")
        params = []
        if not self._check(TokenKind.RPAREN):
            while True:
                name = self._expect(TokenKind.IDENT, "parameter name")
                if name.lexeme in params:
                    raise ParseError(f"repeated parameter '{name.lexeme}'", name.line, name.col)
                params.append(name.lexeme)
                if self._check(TokenKind.COMMA):
                    self._advance()
                    continue
                break
        self._expect(TokenKind.RPAREN, "')' after parameters")
        self._skip_newlines()
        body = self.parse_expr()
        return FunctionDef(tuple(params), body, (tok.line, tok.col))


def parse(tokens) -> Block:
    """Parse a token list into a program Block"""
    return Parser(tokens).parse_program()


def parse_source(source) -> Block:
    return parse(tokenize(source))


# -- pretty-printing -----------------------------------------------------------

INDENT = '  '


def format_number_literal(value):
    text = repr(float(value))
    if text.endswith('.0'):
        text = text[:-2]
    return text


def format_string_literal(value):
    return '"' + ''.join(UNESCAPES.get(ch, ch) for ch in value) + '"'


class PrettyPrinter:
    """Emits canonical source; parenthesises only where precedence demands it"""

    def program(self, block):
        return '\n'.join(self.expr(stmt, 0, 0) for stmt in block.statements)

    def expr(self, node, min_level, depth):
        text, level = self._render(node, depth)
        if level < min_level:
            return f'({text})'
        return text

    def _render(self, node, depth):
        if isinstance(node, NumberLit):
            return format_number_literal(node.value), POSTFIX_LEVEL + 1
        if isinstance(node, StringLit):
            return format_string_literal(node.value), POSTFIX_LEVEL + 1
        if isinstance(node, Ident):
            return node.name, POSTFIX_LEVEL + 1
        if isinstance(node, Assign):
            # the right-hand side always runs to the end of the assignment
            return f'{node.target} <- {self.expr(node.expr, 0, depth)}', ASSIGN_LEVEL
        if isinstance(node, ReplacementAssign):
            return f'{self._replacement_target(node, depth)} <- {self.expr(node.rhs, 0, depth)}', ASSIGN_LEVEL
        if isinstance(node, FieldAccess):
            return f'{self.expr(node.expr, POSTFIX_LEVEL, depth)}${node.name}', POSTFIX_LEVEL
        if isinstance(node, Call):
            args = ', '.join(self.expr(arg, 0, depth) for arg in node.args)
            return f'{self.expr(node.callee, POSTFIX_LEVEL, depth)}({args})', POSTFIX_LEVEL
        if isinstance(node, Unary):
            return f'-{self.expr(node.operand, UNARY_LEVEL, depth)}', UNARY_LEVEL
        if isinstance(node, Binary):
            level, right = BINARY_OPS[node.op]
            if node.op == '**':
                lhs = self.expr(node.lhs, POSTFIX_LEVEL, depth)
                rhs = self.expr(node.rhs, UNARY_LEVEL, depth)
            else:
                lhs = self.expr(node.lhs, level + 1 if right else level, depth)
                rhs = self.expr(node.rhs, level if right else level + 1, depth)
            if node.op == ':':
                return f'{lhs}:{rhs}', level
            return f'{lhs} {node.op} {rhs}', level
        if isinstance(node, Block):
            return self._block(node, depth), POSTFIX_LEVEL + 1
        if isinstance(node, FunctionDef):
            return f'function({", ".join(node.params)}) {self.expr(node.body, 0, depth)}', 0
        if isinstance(node, If):
            return self._if(node, depth), 0
        raise TypeError(f"cannot print {node!r}")

    def _replacement_target(self, node, depth):
        if node.fn == '$':
            return f'{node.target}${node.extra[0].value}'
        args = [node.target] + [self.expr(arg, 0, depth) for arg in node.extra]
        return f'{node.fn}({", ".join(args)})'

    def _block(self, node, depth):
        if not node.statements:
            return '{\n' + INDENT * depth + '}'
        inner = INDENT * (depth + 1)
        lines = [inner + self.expr(stmt, 0, depth + 1) for stmt in node.statements]
        return '{\n' + '\n'.join(lines) + '\n' + INDENT * depth + '}'

    def _if(self, node, depth):
        cond = self.expr(node.cond, 0, depth)
        if node.orelse is None:
            return f'if ({cond}) {self.expr(node.then, 0, depth)}'
        then = self.expr(node.then, 0, depth)
        if _ends_with_open_if(node.then):
            # an else-less inner if would capture our else
            then = f'({then})'
        return f'if ({cond}) {then} else {self.expr(node.orelse, 0, depth)}'


def _ends_with_open_if(node):
    """True when the printed node ends in an `if` without else that a trailing else would attach to"""
    while True:
        if isinstance(node, If):
            if node.orelse is None:
                return True
            node = node.orelse
        elif isinstance(node, (Assign, ReplacementAssign)):
            node = node.expr if isinstance(node, Assign) else node.rhs
        elif isinstance(node, FunctionDef):
            node = node.body
        else:
            return False


def pretty_print(ast) -> str:
    """Canonical source for an AST; a Block is printed as a program"""
    printer = PrettyPrinter()
    if isinstance(ast, Block):
        return printer.program(ast)
    return printer.expr(ast, 0, 0)
