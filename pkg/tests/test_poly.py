from fractions import Fraction as F

import pytest

from tractorcalc.poly import LOGVAR, Poly, RVAR, frac_str, parse_frac


def test_arithmetic_exact():
    p = Poly.parse("3*x1^2*x2 - 1/2*r")
    q = Poly.parse("x2 + 2")
    assert (p + q) - q == p
    assert p * Poly.zero() == Poly.zero()
    assert (p * q).total_degree() == 4
    assert (p - p).is_zero()


def test_parse_format_roundtrip():
    for text in ("0", "1", "-3/2", "x1", "r^2*x3 - x1", "2*r*log + 5",
                 "-x1^2 + 1/3*x2*x3"):
        p = Poly.parse(text)
        assert Poly.parse(p.format()) == p


def test_diff_and_euler():
    p = Poly.parse("r^2*x1 + x1*x2^2")
    assert p.diff(1) == Poly.parse("r^2 + x2^2")
    assert p.diff(2) == Poly.parse("2*x1*x2")
    assert p.r_dr() == Poly.parse("2*r^2*x1")
    with pytest.raises(ValueError):
        p.diff(RVAR)


def test_log_chain_rule():
    # r d/dr (r^2 log) = 2 r^2 log + r^2
    p = Poly.var(RVAR, 2) * Poly.var(LOGVAR)
    assert p.r_dr() == Poly.parse("r^2 + 2*r^2*log")
    # bare log differentiates to a constant under r d/dr
    assert Poly.var(LOGVAR).r_dr() == Poly.one


def test_r_structure():
    p = Poly.parse("r^2*x1 + r^3")
    assert p.r_valuation() == 2
    assert p.shift_r(-2) == Poly.parse("x1 + r")
    assert p.r_coefficient(3) == Poly.one
    with pytest.raises(ValueError):
        Poly.parse("x1").shift_r(-1)
    with pytest.raises(ValueError):
        (Poly.var(LOGVAR)).subs_r0()
    assert Poly.parse("x1 + r*x2").subs_r0() == Poly.parse("x1")


def test_frac_str():
    assert frac_str(F(3, 2)) == "3/2"
    assert frac_str(F(4, 2)) == "2"
    assert parse_frac("-7/3") == F(-7, 3)
