#!/usr/bin/env python3
"""
Standard Library Tests
Builtins, summaries, quantiles, printing and table loading
"""

import io
import math

import pytest
from hypothesis import given
import hypothesis.strategies as st

from display import format_number, format_numbers, format_value
from errors import RuntimeFailure, TableError
from frames import (DATA_DIR, format_column_stats, format_summary_default, format_table, load_table,
                    quantile_type7, summarize_frame, summarize_vector)
from parser import parse_source
from session import Session, SessionConfig
from stdlib import all_equal
from values import NULL, builtin, character, logical, numeric, record, set_class


@pytest.fixture(scope="module")
def session():
    return Session(SessionConfig(color="never"), out=io.StringIO(), err=io.StringIO())


def evaluate(session, code):
    return session.interp.eval_program(parse_source(code))


# -- vectors and arithmetic builtins -------------------------------------------------

def test_sum(session):
    assert evaluate(session, "sum(1:10)").payload == (55.0,)
    assert evaluate(session, "sum()").payload == (0.0,)
    assert evaluate(session, "sum(c(TRUE, TRUE, FALSE))").payload == (2.0,)
    assert evaluate(session, "sum(1, 2, c(3, 4))").payload == (10.0,)
    with pytest.raises(RuntimeFailure, match="invalid 'type'"):
        evaluate(session, 'sum("a")')


def test_mean_of_strings_warns(session):
    session.sink.drain()
    value = evaluate(session, 'mean("a")')
    assert math.isnan(value.payload[0])
    assert [d.severity for d in session.sink.drain()] == ["warning"]


def test_c_takes_the_most_general_kind(session):
    assert evaluate(session, 'c(1, "a")').payload == ("1", "a")
    assert evaluate(session, "c(TRUE, 2)").payload == (1.0, 2.0)
    assert evaluate(session, "c()") is NULL


def test_length(session):
    assert evaluate(session, "length(NULL)").payload == (0.0,)
    assert evaluate(session, "length(1:7)").payload == (7.0,)


def test_paste(session):
    assert evaluate(session, 'paste("a", c("b", "c"))').payload == ("a b c",)
    assert evaluate(session, "paste(1.5, TRUE)").payload == ("1.5 TRUE",)
    assert evaluate(session, 'paste("x", NULL, "y")').payload == ("x y",)


def test_inherits_builtin(session):
    assert evaluate(session, 'inherits(fit.rpart, "rpart")').payload == (True,)
    assert evaluate(session, 'inherits(fit.rpart, c("gbm", "rpart"))').payload == (True,)
    assert evaluate(session, 'inherits(fit.lm, "rpart")').payload == (False,)


# -- residuals ------------------------------------------------------------------------

def test_residuals_dispatch(session):
    assert evaluate(session, "residuals(fit.gbm)").payload == (0.5, -0.5)
    assert len(evaluate(session, "residuals(fit.rpart)")) == 150
    assert evaluate(session, "residuals(fit.rf)").payload == ()


def test_fixture_rss_matches_an_independent_fold(session):
    with open(DATA_DIR / "rpart_residuals.tsv", encoding="utf-8") as handle:
        rows = handle.read().split("\n")[1:]
    expected = 0.0
    for row in rows:
        if row:
            expected += float(row) ** 2
    assert evaluate(session, "rss(fit.rpart)").payload[0] == pytest.approx(expected, rel=1e-12)


def test_naive_rss_misses_the_forest(session):
    evaluate(session, "naive_rss <- function(x) sum(residuals(x)**2)")
    assert evaluate(session, "naive_rss(fit.rf)").payload == (0.0,)
    assert evaluate(session, "rss(fit.rf)").payload == (5.0,)


# -- quantiles and summaries -------------------------------------------------------------

def test_quantile_examples():
    assert quantile_type7([1, 2, 3, 4], 0.5) == 2.5
    assert quantile_type7([7], 0.3) == 7
    with pytest.raises(RuntimeFailure):
        quantile_type7([], 0.5)
    with pytest.raises(RuntimeFailure):
        quantile_type7([1, 2], 1.5)


samples = st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=30)
unbounded_samples = st.lists(st.floats(allow_nan=False), min_size=1, max_size=30)
probabilities = st.floats(min_value=0, max_value=1)


@given(unbounded_samples)
def test_quantile_extremes(xs):
    assert quantile_type7(xs, 0.0) == min(xs)
    assert quantile_type7(xs, 1.0) == max(xs)


@given(samples, probabilities, probabilities)
def test_quantile_is_monotone(xs, p, q):
    low, high = sorted((p, q))
    assert quantile_type7(xs, low) <= quantile_type7(xs, high) + 1e-9


def test_quantiles_with_infinities():
    xs = [1.0, 2.0, math.inf]
    assert quantile_type7(xs, 0.75) == math.inf
    assert quantile_type7([-math.inf, 1.0], 0.5) == -math.inf
    assert quantile_type7([-math.inf, 1.0], 0.0) == -math.inf
    with pytest.raises(RuntimeFailure, match="NaN"):
        quantile_type7([1.0, math.nan], 0.5)


def test_quantile_builtin_names(session):
    value = evaluate(session, "quantile(c(1, 2, 3, 4))")
    assert value.attr("names").payload == ("0%", "25%", "50%", "75%", "100%")
    assert value.payload == (1.0, 1.75, 2.5, 3.25, 4.0)


def test_iris_sepal_length_summary(session):
    stats = summarize_vector(evaluate(session, "iris$Sepal.Length"))
    assert stats.payload == pytest.approx((4.3, 5.1, 5.8, 5.843333, 6.4, 7.9), abs=1e-6)
    assert stats.attr("class").payload == ("summaryDefault",)
    assert format_summary_default(stats) == (
        "   Min. 1st Qu.  Median    Mean 3rd Qu.    Max. \n"
        "  4.300   5.100   5.800   5.843   6.400   7.900 \n")


def test_summary_of_strings_describes_the_vector():
    stats = summarize_vector(character(["a", "b"]))
    assert stats.payload == ("2", "character", "character")
    assert stats.attr("names").payload == ("Length", "Class", "Mode")


def test_species_counts(session):
    table = summarize_frame(evaluate(session, "iris"))
    assert table.field("Species").payload[:3] == (
        "setosa    :50  ", "versicolor:50  ", "virginica :50  ")
    assert table.field("Species").payload[3:] == ("", "", "")
    assert table.field("Sepal.Width").payload[3] == "Mean   :3.057  "


def test_constant_column_statistics():
    assert format_column_stats([5.0] * 6) == ["5.000"] * 6


def test_infinite_column_summary_uses_r_spellings():
    df = set_class(record([("x", numeric([1.0, 2.0, math.inf]))]), ["data_frame"])
    assert summarize_frame(df).field("x").payload == (
        "Min.   :1.000  ", "1st Qu.:1.500  ", "Median :2.000  ",
        "Mean   :  Inf  ", "3rd Qu.:  Inf  ", "Max.   :  Inf  ")
    assert format_column_stats([-math.inf, 0.0, math.nan]) == [" -Inf", "0.000", "  NaN"]


@pytest.mark.parametrize("frame, message", [
    (numeric([1.0]), "expected a list of columns"),
    (record([("a", numeric([1.0, 2.0])), ("b", numeric([3.0]))]), "columns differ in length"),
    (record([("a", record([]))]), "column 'a' is not a vector"),
])
def test_malformed_frames_are_runtime_errors(frame, message):
    with pytest.raises(RuntimeFailure, match=message):
        summarize_frame(set_class(frame, ["data_frame"]))
    with pytest.raises(RuntimeFailure, match="invalid table"):
        format_table(set_class(frame, ["table"]))


def test_many_levels_fold_into_other():
    letters = list("aaabbbcccdddeeefg")
    df = set_class(record([("v", character(letters))]), ["data_frame"])
    cells = summarize_frame(df).field("v").payload
    assert cells[-1].startswith("(Other)")
    assert len(cells) == 6


def test_summary_generic_matches_method(session):
    assert evaluate(session, "all.equal(summary(iris), summary.data_frame(iris))").payload == (True,)


# -- all.equal ------------------------------------------------------------------------------

def test_all_equal_examples():
    assert all_equal(numeric([1.0]), numeric([1.0 + 1e-10]))
    assert not all_equal(numeric([1.0]), numeric([1.1]))
    assert not all_equal(numeric([1.0]), character(["1"]))
    assert not all_equal(numeric([1.0, 2.0]), numeric([1.0]))
    assert not all_equal(set_class(numeric([1.0]), ["a"]), numeric([1.0]))
    assert all_equal(NULL, NULL)
    assert all_equal(logical([True]), logical([True]))


@given(st.lists(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False), max_size=10))
def test_all_equal_is_reflexive(xs):
    assert all_equal(numeric(xs), numeric(xs))


def test_all_equal_functions_compare_by_identity():
    fn = builtin("f", lambda interp, args, frame: NULL)
    assert all_equal(fn, fn)
    assert not all_equal(fn, builtin("f", lambda interp, args, frame: NULL))


# -- printing ----------------------------------------------------------------------------------

def test_number_formatting():
    assert format_number(16.962000000000003) == "16.962"
    assert format_number(0.1 + 0.2) == "0.3"
    assert format_number(1e10) == "1e+10"
    assert format_number(123456789.0) == "123456789"
    assert format_numbers([1.0, 2.5]) == ["1.0", "2.5"]
    assert format_number(math.nan) == "NaN"


def test_print_formats():
    classed = set_class(numeric(range(1, 11)), ["myclass"])
    assert format_value(classed) == (
        " [1]  1  2  3  4  5  6  7  8  9 10\n"
        'attr(,"class")\n'
        '[1] "myclass"\n')
    assert format_value(character(["a", "bb"])) == '[1] "a"  "bb"\n'
    assert format_value(NULL) == "NULL\n"
    assert format_value(numeric(())) == "numeric(0)\n"
    assert format_value(logical([True, False])) == "[1]  TRUE FALSE\n"
    assert format_value(builtin("sum", None)) == 'function (...) .Primitive("sum")\n'


def test_long_vectors_wrap_with_index_labels():
    lines = format_value(numeric(range(1, 31))).splitlines()
    assert len(lines) == 2
    assert lines[0].startswith(" [1]")
    assert lines[1].startswith("[26]")


def test_auto_print_and_invisibility(session):
    assert session.evaluate("1:3").stdout == "[1] 1 2 3\n"
    assert session.evaluate("x <- 1").stdout == ""
    assert session.evaluate("invisible(5)").stdout == ""
    assert session.evaluate("print(5)").stdout == "[1] 5\n"


def test_cat_writes_without_newline(session):
    assert session.evaluate('cat("a", 1.5)').stdout == "a 1.5"


# -- load_table ---------------------------------------------------------------------------------

def test_load_table_types(tmp_path):
    path = tmp_path / "t.tsv"
    path.write_text("x\ty\n1\ta\n2.5\tb\n", encoding="utf-8")
    df = load_table(path)
    assert df.field("x").payload == (1.0, 2.5)
    assert df.field("y").payload == ("a", "b")
    assert df.attr("row_count").payload == (2.0,)
    assert df.attr("class").payload == ("data_frame",)


@pytest.mark.parametrize("content, message", [
    ("", "empty file"),
    ("a\tb\n1\t2\n3\n", "line 3 has 1 fields, expected 2"),
    ("a\tb\n", "no data rows"),
    ("a\tb\n1\t2\n3\tNA\n", "missing value in column 'b' at line 3"),
    ("a\tb\n1\t2\n3\t\n", "missing value in column 'b' at line 3"),
])
def test_load_table_rejects_bad_files(tmp_path, content, message):
    path = tmp_path / "bad.tsv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(TableError, match=message):
        load_table(path)


def test_load_table_builtin_missing_file(session, tmp_path):
    with pytest.raises(RuntimeFailure, match="cannot open file"):
        evaluate(session, f'load_table("{tmp_path / "absent.tsv"}")')


def test_iris_shape(session):
    assert evaluate(session, "nrow(iris)").payload == (150.0,)
    assert evaluate(session, "ncol(iris)").payload == (5.0,)


if __name__ == "__main__":
    print("=" * 60)
    print("STANDARD LIBRARY TESTS")
    print("=" * 60)
    raise SystemExit(pytest.main([__file__, "-q"]))
