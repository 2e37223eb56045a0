import pytest
from hypothesis import given, strategies as st

from splitred.errors import ParseError, UnknownSymbol
from splitred.expr import IntAlgebra, evaluate, parse

from conftest import build


@pytest.mark.parametrize(
    "text, value",
    [
        ("1+2*3", 7),
        ("(1+2)*3", 9),
        ("2^3^1", None),
        ("-2^2", -4),
        ("2^(1+2)", 8),
        ("10/5 - 3", -1),
        ("7 - 2 - 1", 4),
    ],
)
def test_integer_precedence(text, value):
    if value is None:
        with pytest.raises(ParseError):
            parse(text)
    else:
        assert evaluate(parse(text), IntAlgebra()) == value


@pytest.mark.parametrize("text", ["pi_L^^2", "1+", "(1+pi_L", "pi_L)", "2 $ 3", ""])
def test_malformed_reports_position(text):
    T = build(2, [("L", "t^3-pi_base")])
    with pytest.raises(ParseError) as info:
        T.element(text)
    assert isinstance(info.value.position, int)


def test_unknown_symbol():
    T = build(2, [("L", "t^3-pi_base")])
    with pytest.raises(UnknownSymbol) as info:
        T.element("1 + pi_M")
    assert info.value.name == "pi_M"
    assert info.value.position == 4


def test_lower_level_symbols_embed():
    T = build(2, [("K", "t^3-2"), ("L", "t^2-pi_K")])
    assert T.element("pi_K") == T.element("pi_L^2")
    assert T.element("pi_base").valuation() == 6


def test_spaces_and_implicit_precedence():
    T = build(2, [("L", "t^3-pi_base")])
    a = T.element("pi_L^2 * (1 + pi_L)")
    b = T.element("pi_L^2+pi_L^3")
    assert a == b


_atoms = st.sampled_from(["1", "2", "3", "pi_L", "z", "(1+pi_L)", "(z-1)", "pi_base"])


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(_atoms)
    op = draw(st.sampled_from(["+", "-", "*"]))
    return f"({draw(expressions(depth=depth - 1))}{op}{draw(expressions(depth=depth - 1))})"


@given(expressions())
def test_print_parse_roundtrip(text):
    T = build(3, [("L", "t^2+3*t+3")], residue_degree=2, precision=20)
    a = T.element(text)
    assert T.element(a.to_expr()) == a
