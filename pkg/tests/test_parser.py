from __future__ import annotations

import pytest
from hypothesis import given

from paracr.parser import ExpressionSyntaxError, ModelError, load_model, parse_expression, parse_model
from paracr.series import NonUnitDivisor, Series, UnknownVariable, VarSpace

from conftest import polynomials

QSPACE = VarSpace(("x", "y", "a", "b", "c"))


def test_cubic_model_has_three_terms():
    s = parse_expression("c + x*a + x^2*b", QSPACE, 8)
    assert len(s) == 3


def test_division_by_unit_expands():
    s = parse_expression("(a*x + b*x^2 + a^2*y) / (1 - 4*b*y)", QSPACE, 8)
    num = parse_expression("a*x + b*x^2 + a^2*y", QSPACE, 8)
    den = parse_expression("1 - 4*b*y", QSPACE, 8)
    assert s == num * den.reciprocal()
    assert (s * den - num).is_zero()
    # a*x * (4*b*y) is the first correction
    assert s.coeff({"x": 1, "y": 1, "a": 1, "b": 1}) == 4


def test_cancellation():
    assert parse_expression("x - x", QSPACE, 8).is_zero()


def test_precedence_and_literals():
    sp = VarSpace(("x",))
    assert parse_expression("3/2^2", sp, 4) == Series.constant(sp, "9/4", 4)
    assert parse_expression("-x^2", sp, 4) == -(Series.variable(sp, "x", 4) ** 2)
    assert parse_expression("2*x/2", sp, 4) == Series.variable(sp, "x", 4)
    assert parse_expression("(1 + x)^3", sp, 4).coeff((2,)) == 3


def test_implicit_products_are_identifiers():
    with pytest.raises(UnknownVariable) as err:
        parse_expression("c + xa", QSPACE, 8)
    assert "byte 4" in str(err.value)


def test_non_unit_divisor():
    with pytest.raises(NonUnitDivisor):
        parse_expression("a / x", QSPACE, 8)


@pytest.mark.parametrize(
    "text, offset",
    [("c + ", 4), ("c + (x", 6), ("x ^ y", 4), ("c $ x", 2), ("", 0), ("x y", 2)],
)
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression(text, QSPACE, 8)
    assert err.value.byte_offset == offset


def test_model_file_parse():
    text = "# cubic model\nn = 2\nm = 2\ntruncation = 6\nQ = c + x*a + x^2*b  # comment\n"
    mf = parse_model(text)
    assert (mf.n, mf.m, mf.trunc, mf.side) == (2, 2, 6, "Q")
    assert mf.series().space == QSPACE
    assert mf.series().trunc == 6


def test_model_file_error_offset_is_in_bytes():
    text = "# é\nn = 2\nm = 2\nQ = c + \n"
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_model(text)
    # "# é\n" is 5 bytes; the error is at the end of the Q line
    assert err.value.byte_offset == len("# é\nn = 2\nm = 2\nQ = c + ".encode())


def test_model_file_validation():
    with pytest.raises(ExpressionSyntaxError):
        parse_model("n = 1\nm = 1\n")
    with pytest.raises(ExpressionSyntaxError):
        parse_model("n = 1\nm = 1\nQ = b\nP = y\n")
    with pytest.raises(ExpressionSyntaxError):
        parse_model("n = 1\nm = 1\nfoo = 3\nQ = b\n")
    with pytest.raises(ModelError):
        parse_model("n = 0\nm = 1\nQ = b\n")
    with pytest.raises(ModelError):
        parse_model("n = 1\nm = 1\ntruncation = 2\nQ = b\n")


def test_indexed_names_are_detected():
    mf = parse_model("n = 3\nm = 1\nQ = b + x1*a1 + x2*x3*a1\n")
    assert mf.space().names == ("x1", "x2", "x3", "a1", "b")


def test_load_model_file(tmp_path):
    p = tmp_path / "m.model"
    p.write_text("n = 1\nm = 1\nQ = b + x*a\n", encoding="utf-8")
    mf = load_model(p)
    assert mf.source == str(p)
    assert str(mf.series()) == "b + x*a"


@given(polynomials(QSPACE, trunc=8, max_deg=4))
def test_print_parse_round_trip(s):
    assert parse_expression(str(s), QSPACE, 8) == s.with_trunc(8)
