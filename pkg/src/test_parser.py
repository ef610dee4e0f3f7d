#!/usr/bin/env python3
"""
Syntax Tests
Tokenizer, parser and the pretty-printer round trip
"""

import string

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from errors import LexError, ParseError
from lexer import KEYWORDS, TokenKind, tokenize
from parser import (Assign, Binary, Block, Call, FieldAccess, FunctionDef, Ident, If,
                    NumberLit, ReplacementAssign, StringLit, Unary, parse, parse_source,
                    pretty_print)


def kinds(source):
    return [(t.kind, t.lexeme) for t in tokenize(source)]


# -- tokenize ---------------------------------------------------------------

def test_tokenize_naive_rss_body():
    assert kinds("sum(residuals(x)**2)") == [
        (TokenKind.IDENT, "sum"), (TokenKind.LPAREN, "("),
        (TokenKind.IDENT, "residuals"), (TokenKind.LPAREN, "("),
        (TokenKind.IDENT, "x"), (TokenKind.RPAREN, ")"),
        (TokenKind.OP, "**"), (TokenKind.NUMBER, "2"),
        (TokenKind.RPAREN, ")"), (TokenKind.EOF, ""),
    ]


def test_tokenize_empty():
    assert kinds("") == [(TokenKind.EOF, "")]


def test_caret_is_power():
    assert kinds("a^2")[1] == (TokenKind.OP, "**")


def test_dotted_identifiers_are_single_tokens():
    assert kinds("rss.default")[0] == (TokenKind.IDENT, "rss.default")
    assert kinds("...")[0] == (TokenKind.IDENT, "...")


def test_comments_and_escapes():
    toks = tokenize('"a\\"b\\\\c" # trailing comment')
    assert toks[0].kind == TokenKind.STRING
    assert toks[0].lexeme == 'a"b\\c'
    assert toks[1].kind == TokenKind.EOF


def test_unterminated_string_position():
    with pytest.raises(LexError) as info:
        tokenize('"abc')
    assert (info.value.line, info.value.col) == (1, 1)


def test_illegal_character():
    with pytest.raises(LexError) as info:
        tokenize("x <- 1\ny @ 2")
    assert (info.value.line, info.value.col) == (2, 3)


def test_newlines_inside_parentheses_are_dropped():
    toks = tokenize("f(a,\n  b)\n")
    assert [t.kind for t in toks].count(TokenKind.NEWLINE) == 1


def test_commas_and_fields_keep_the_call_open():
    source = 'warning(paste("a", class(x),\n  x$y,\n  "b"))\n'
    toks = tokenize(source)
    assert [t.kind for t in toks].count(TokenKind.NEWLINE) == 1
    assert len(parse_source(source).statements) == 1


def test_multi_line_call_inside_a_function_body():
    program = parse_source('f <- function(x, ...){\n  g(1,\n    2)\n}\n')
    body = program.statements[0].expr.body
    assert body.statements == (Call(Ident("g"), (NumberLit(1.0), NumberLit(2.0))),)


# -- parse ------------------------------------------------------------------

def test_parse_generic_definition():
    program = parse(tokenize('rss <- function(x) UseMethod("rss")'))
    assert program == Block((
        Assign("rss", FunctionDef(("x",), Call(Ident("UseMethod"), (StringLit("rss"),)))),
    ))


def test_parse_field_difference():
    program = parse_source("x$y - x$predicted")
    assert program.statements[0] == Binary(
        "-", FieldAccess(Ident("x"), "y"), FieldAccess(Ident("x"), "predicted"))


def test_parse_replacement_assignment():
    program = parse_source('class(test_class) <- "myclass"\nattr(x, "note") <- "hi"')
    assert program.statements[0] == ReplacementAssign("class", "test_class", (), StringLit("myclass"))
    assert program.statements[1] == ReplacementAssign("attr", "x", (StringLit("note"),), StringLit("hi"))


def test_non_replacement_function_is_rejected():
    with pytest.raises(ParseError) as info:
        parse_source("f(x) <- 1")
    assert (info.value.line, info.value.col) == (1, 1)


def test_precedence_ladder():
    stmt = parse_source("a %in% b + c * -d:e ** f$g")
    expected = Binary("%in%", Ident("a"), Binary(
        "+", Ident("b"), Binary(
            "*", Ident("c"), Binary(
                ":", Unary("-", Ident("d")), Binary(
                    "**", Ident("e"), FieldAccess(Ident("f"), "g"))))))
    assert stmt.statements[0] == expected


def test_power_is_right_associative():
    assert parse_source("a ** b ** c").statements[0] == Binary(
        "**", Ident("a"), Binary("**", Ident("b"), Ident("c")))


def test_else_on_following_line_inside_braces():
    program = parse_source("f <- function(x) {\n  if (x) {\n    1\n  }\n  else 2\n}")
    body = program.statements[0].expr.body
    assert body.statements[0] == If(Ident("x"), Block((NumberLit(1.0),)), NumberLit(2.0))


def test_else_on_following_line_at_top_level_is_an_error():
    with pytest.raises(ParseError):
        parse_source("if (x) 1\nelse 2")


def test_semicolons_separate_statements():
    assert len(parse_source("a <- 1; b <- 2; a + b").statements) == 3


def test_incomplete_input_is_flagged():
    with pytest.raises(ParseError) as info:
        parse_source("1 +")
    assert info.value.at_eof
    with pytest.raises(ParseError) as info:
        parse_source("f <- function(x) {\n  x")
    assert info.value.at_eof


@pytest.mark.parametrize("source", ["1 +", "f(x) <- 1", "x <- )", "function(x, x) 1",
                                    "if x", "a$1", "(a", "{\n a b\n}"])
def test_parse_error_positions_are_within_source(source):
    with pytest.raises(ParseError) as info:
        parse_source(source)
    lines = source.split("\n")
    err = info.value
    assert 1 <= err.line <= len(lines)
    assert 1 <= err.col <= len(lines[err.line - 1]) + 1


# -- pretty_print -------------------------------------------------------------

def test_print_canonical_forms():
    assert pretty_print(Assign("x", NumberLit(1.0))) == "x <- 1"
    assert pretty_print(Binary("**", Ident("a"), Binary("**", Ident("b"), Ident("c")))) == "a ** b ** c"
    assert pretty_print(Binary("*", Binary("+", Ident("a"), Ident("b")), Ident("c"))) == "(a + b) * c"


def test_print_dangling_else():
    inner = If(Ident("a"), Ident("b"))
    node = If(Ident("c"), inner, Ident("d"))
    assert parse_source(pretty_print(node)).statements[0] == node


# -- round trip ----------------------------------------------------------------

names = st.text(alphabet=string.ascii_letters + "._" + string.digits, max_size=6).map(
    lambda tail: "v" + tail).filter(lambda name: name not in KEYWORDS)
numbers = st.floats(min_value=0, allow_nan=False, allow_infinity=False)
strings = st.text(alphabet=string.ascii_letters + ' "\\\n\t#%', max_size=6)

leaves = st.one_of(
    numbers.map(NumberLit),
    strings.map(StringLit),
    names.map(Ident),
)


def _compound(children):
    params = st.lists(names, max_size=3, unique=True).map(tuple)
    return st.one_of(
        st.builds(Assign, names, children),
        st.builds(FieldAccess, children, names),
        st.builds(Call, children, st.lists(children, max_size=3).map(tuple)),
        st.builds(FunctionDef, params, children),
        st.builds(Block, st.lists(children, max_size=3).map(tuple)),
        st.builds(If, children, children, st.none() | children),
        st.builds(Binary, st.sampled_from(["+", "-", "*", "/", "**", ":", "%in%"]), children, children),
        st.builds(Unary, st.just("-"), children),
        st.builds(ReplacementAssign, st.just("class"), names, st.just(()), children),
        st.builds(ReplacementAssign, st.just("attr"), names, children.map(lambda c: (c,)), children),
        st.builds(ReplacementAssign, st.just("$"), names, names.map(lambda n: (StringLit(n),)), children),
    )


expressions = st.recursive(leaves, _compound, max_leaves=12)
programs = st.lists(expressions, max_size=4).map(lambda stmts: Block(tuple(stmts)))


@settings(max_examples=500, deadline=None)
@given(programs)
def test_pretty_print_round_trips(program):
    text = pretty_print(program)
    assert parse(tokenize(text)) == program


if __name__ == "__main__":
    print("=" * 60)
    print("SYNTAX TESTS")
    print("=" * 60)
    raise SystemExit(pytest.main([__file__, "-q"]))
