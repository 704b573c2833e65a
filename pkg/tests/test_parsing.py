from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fdjet.errors import NotADiffeomorphismError, ParseError
from fdjet.jets import VectorFieldJet, parse_vector_field
from fdjet.parsing import format_map, format_series, infer_n, parse_map, parse_polynomial, parse_series

from conftest import diffeos, series


def test_map_terms():
    phi = parse_map("(x, y*(1+x))", 3)
    assert phi[1].terms == {(0, 1): 1, (1, 1): 1}


def test_geometric_expansion():
    assert parse_map("(x/(1-x), y)", 3) == parse_map("(x + x^2 + x^3, y)", 3)


def test_constant_term_rejected():
    with pytest.raises(NotADiffeomorphismError):
        parse_map("(x+1, y)", 3)


def test_singular_rejected():
    with pytest.raises(NotADiffeomorphismError):
        parse_map("(x + y, 2x + 2y)", 3)


@pytest.mark.parametrize("text", ["(x, y", "(x, y +)", "(x, y) z", "(x, $)"])
def test_syntax_errors_have_position(text):
    with pytest.raises(ParseError) as info:
        parse_map(text, 3)
    assert info.value.position is not None


def test_non_unit_denominator():
    with pytest.raises(ParseError):
        parse_series("1/x", 1, 3)


def test_rational_literals_and_powers():
    f = parse_series("-1/2*x^2 + 3/4*y**2 - (1+x)^-1", 2, 3)
    assert f.coefficient((2, 0)) == Fraction(-1, 2) - 1
    assert f.coefficient((0, 2)) == Fraction(3, 4)
    assert f.constant_term == -1


def test_zn_variables():
    f = parse_series("z1*z4 + z2", 4, 2)
    assert f.terms == {(1, 0, 0, 1): 1, (0, 1, 0, 0): 1}
    assert infer_n("z1 + z5^2") == 5
    assert format_series(f) == "z2 + z1*z4"


def test_polynomial_is_exact():
    p = parse_polynomial("y - x^7/3", 2)
    assert p.cutoff == 7 and p.coefficient((7, 0)) == Fraction(-1, 3)
    with pytest.raises(ParseError):
        parse_polynomial("1/(1+x)", 1)


def test_print_order_is_graded_lex():
    assert format_series(parse_series("y^2 + x*y + x^2 + y + x + 1", 2, 2)) == "1 + x + y + x^2 + x*y + y^2"


def test_vector_field_grammar():
    X = parse_vector_field("(x^2)*d/dy + (x*y)*d/dx", 2, 3)
    assert X[0] == parse_series("x*y", 2, 3) and X[1] == parse_series("x^2", 2, 3)
    assert str(X) == "(x*y)*d/dx + (x^2)*d/dy"
    assert parse_vector_field(str(X), 2, 3) == X
    assert parse_vector_field("0", 2, 3) == VectorFieldJet.zero(2, 3)
    assert parse_vector_field("(z1^2)*d/dz2", 2, 3) == parse_vector_field("(x^2)*d/dy", 2, 3)


@settings(max_examples=50, deadline=None)
@given(diffeos())
def test_map_round_trip(phi):
    assert parse_map(format_map(phi), phi.cutoff) == phi


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_series_round_trip(data):
    n = data.draw(st.integers(1, 5))
    k = data.draw(st.integers(0, 4))
    f = data.draw(series(n, k))
    assert parse_series(format_series(f), n, k) == f
