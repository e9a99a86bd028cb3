from fractions import Fraction

import pytest

from skewconnect import OreOperator, ScalarTower, XAction
from skewconnect.errors import ParseError, UndefinedName
from skewconnect.expr import (
    ExprContext,
    elaborate_operator,
    elaborate_scalar,
    parse_expression,
)

from conftest import dilation_base_exact_q, shift_base


def scalar(src, tower_base):
    t, b = tower_base
    return elaborate_scalar(parse_expression(src), ExprContext(b))


def operator(src, tower_base, x_action=None):
    t, b = tower_base
    return elaborate_operator(parse_expression(src), ExprContext(b, 0, x_action))


def test_parse_skew_polynomial():
    tb = shift_base(step=1)
    t, b = tb
    z = t.var("z")
    op = operator("X^2 - z*X + 1", tb, XAction.SIGMA_ONLY)
    assert op == OreOperator(b, 0, XAction.SIGMA_ONLY, [t.one(), -z, t.one()])


def test_parse_normalizes_x_through_coefficients():
    tb = shift_base(step=1)
    t, b = tb
    z = t.var("z")
    got = operator("X*z", tb, XAction.SIGMA_DELTA)
    want = OreOperator(b, 0, XAction.SIGMA_DELTA, [t.one(), z + t.one()])
    assert got == want
    assert str(got) == "(z + 1)*X + 1"


def test_qpow_scalar():
    t = ScalarTower.h_trunc(3, ("z",))
    from skewconnect import SigmaBase

    b = SigmaBase(t, [])
    got = elaborate_scalar(parse_expression("qpow(1/2)*z"), ExprContext(b))
    want = t.h_series_power(Fraction(1, 2)) * t.var("z")
    assert got == want


def test_precedence_and_associativity():
    tb = shift_base(step=1)
    t, _ = tb
    z = t.var("z")
    assert scalar("2*z^2", tb) == t.from_int(2) * z**2  # ^ binds tighter than *
    assert scalar("-z^2", tb) == -(z**2)
    assert scalar("1 - 2 - 3", tb) == t.from_int(-4)
    assert scalar("8/2/2", tb) == t.from_int(2)
    assert scalar("z^-1", tb) == z.inverse()
    assert scalar("(z+1)^2", tb) == (z + t.one()) ** 2


def test_rationals():
    tb = shift_base(step=1)
    t, _ = tb
    assert scalar("3/4", tb) == t.from_fraction(Fraction(3, 4))


def test_hbar_resolves_to_the_step():
    tb = shift_base(step=Fraction(1, 2))
    t, b = tb
    got = elaborate_scalar(parse_expression("hbar"), ExprContext(b, 0))
    assert got == t.from_fraction(Fraction(1, 2))


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_expression("z + $")
    assert err.value.position == 4


def test_unbalanced_parenthesis():
    with pytest.raises(ParseError):
        parse_expression("(z + 1")


def test_undefined_name():
    tb = shift_base(step=1)
    with pytest.raises(UndefinedName):
        scalar("w + 1", tb)


def test_x_rejected_in_scalar_context():
    tb = shift_base(step=1)
    with pytest.raises(ParseError):
        scalar("X + 1", tb)


def test_operator_division_by_operator_rejected():
    tb = shift_base(step=1)
    with pytest.raises(ParseError):
        operator("1/X", tb, XAction.SIGMA_ONLY)


@pytest.mark.parametrize(
    "src",
    ["X^2 - z*X + 1", "X*z", "(z+1)*X + 1", "z^2 - 1/2", "qpow(2)*z - X"],
)
def test_round_trip_parse_print_parse(src):
    tb = dilation_base_exact_q()
    t, b = tb
    op1 = operator(src, tb, XAction.SIGMA_ONLY)
    printed = str(op1)
    op2 = operator(printed, tb, XAction.SIGMA_ONLY)
    assert op1 == op2
    assert str(op2) == printed


def test_scalar_round_trip_htrunc():
    t = ScalarTower.h_trunc(3, ("z",))
    from skewconnect import SigmaBase

    b = SigmaBase(t, [])
    x = t.h_series_power(Fraction(1, 2)) * t.var("z") + t.one()
    printed = str(x)
    again = elaborate_scalar(parse_expression(printed), ExprContext(b))
    assert again == x
