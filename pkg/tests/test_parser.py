import random
from decimal import Decimal

import pytest
from hypothesis import given

from azed.model import Num, Point, Rule, Side, Var, Wildcard
from azed.parser import ParseError, parse, parse_pattern, parse_spans, print_canonical

from .strategies import expressions


def test_parse_worked_example():
    expr = parse("info-about(dog(), non-subjectivity(nice-kind()))")
    assert expr == Rule(
        "info-about",
        (Rule("dog"), Rule("non-subjectivity", (Rule("nice-kind"),))),
    )


def test_parse_zero_argument_rule():
    assert parse("dog()") == Rule("dog")


def test_parse_point_natives():
    assert parse("scar-between(@abdomen-hi, @abdomen-lo)") == Rule(
        "scar-between", (Point("abdomen-hi"), Point("abdomen-lo"))
    )


def test_parse_number_and_side():
    assert parse("f(-1.50, #left, #right)") == Rule(
        "f", (Num(Decimal("-1.50")), Side("left"), Side("right"))
    )


def test_whitespace_is_insignificant():
    spaced = "each-of( localised-discourse(@Lssp,dog()) , localised-discourse(@Rssp,nice-kind()) )"
    assert print_canonical(parse(spaced)) == (
        "each-of(localised-discourse(@Lssp, dog()), localised-discourse(@Rssp, nice-kind()))"
    )


@pytest.mark.parametrize(
    "text",
    ["dog(", "dog)", "dog", "dog(,)", "dog(x(),)", "", "Dog()", "#up", "@", "1.", "dog()x", "???"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_carries_offset():
    with pytest.raises(ParseError) as err:
        parse("dog(")
    assert err.value.offset == 4
    assert err.value.offset <= len("dog(")


def test_print_canonical_examples():
    assert print_canonical(Rule("dog")) == "dog()"
    assert print_canonical(parse("info-about(dog(), non-subjectivity(nice-kind()))")) == (
        "info-about(dog(), non-subjectivity(nice-kind()))"
    )


def test_print_canonical_numbers_shortest_form():
    assert print_canonical(Num(Decimal("1.0"))) == "1"
    assert print_canonical(Num(Decimal("0.50"))) == "0.5"
    assert print_canonical(Num(Decimal("-0.15"))) == "-0.15"
    assert print_canonical(Num(Decimal("-0.0"))) == "0"


def test_pattern_parsing():
    assert parse_pattern("_") == Wildcard()
    assert parse_pattern("info-about(dog(), _)") == Rule("info-about", (Rule("dog"), Wildcard()))
    assert parse_pattern("each-of(?x, ?x)") == Rule("each-of", (Var("x"), Var("x")))
    with pytest.raises(ParseError):
        parse("_")  # pattern leaves are rejected by the plain parser
    with pytest.raises(ParseError):
        parse_pattern("?x(?y)")  # no variables over rule names


def test_parse_spans_cover_nodes():
    text = "info-about(dog(), non-subjectivity(nice-kind()))"
    _, spans = parse_spans(text)
    assert spans[()] == (0, len(text))
    start, end = spans[(1, 0)]
    assert text[start:end] == "nice-kind()"


@given(expressions)
def test_round_trip(expr):
    assert parse(print_canonical(expr)) == expr


@given(expressions)
def test_canonical_form_is_fixed_point(expr):
    text = print_canonical(expr)
    assert print_canonical(parse(text)) == text


def test_error_offset_near_injection():
    rng = random.Random(7)
    source = "each-of(localised-discourse(@Lssp, dog()), info-about(nice-kind(), f(-12.5, #left)))"
    longest_token = max(len(t) for t in ["localised-discourse", "-12.5"])
    for _ in range(200):
        pos = rng.randrange(len(source))
        corrupted = source[:pos] + "%" + source[pos:]
        with pytest.raises(ParseError) as err:
            parse(corrupted)
        assert err.value.offset <= pos + longest_token
