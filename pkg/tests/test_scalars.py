from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fractions
from transvect.scalars import SQRT21, QuadExt, format_scalar, is_rational, kappa, parse_scalar, rat

quads = st.builds(QuadExt, fractions(), fractions())


def test_rat_reduces():
    assert rat(2, 4) == Fraction(1, 2)
    assert rat(-9, 12) == Fraction(-3, 4)
    z = rat(0, 7)
    assert (z.numerator, z.denominator) == (0, 1)
    assert rat(3, -6) == Fraction(-1, 2)


def test_rat_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rat(1, 0)


def test_quad_mul_examples():
    assert SQRT21 * SQRT21 == QuadExt(21, 0)
    x = QuadExt(Fraction(2, 3), Fraction(-5, 7))
    assert QuadExt(1, 0) * x == x
    assert QuadExt(-4, -1) * QuadExt(-4, 1) == -5


def test_quad_is_rational_and_mixes_with_fraction():
    assert QuadExt(3, 0) == Fraction(3)
    assert hash(QuadExt(Fraction(1, 2), 0)) == hash(Fraction(1, 2))
    assert not QuadExt(0, 1).is_rational()
    assert is_rational(Fraction(1, 3)) and not is_rational(SQRT21)
    assert SQRT21 + 1 == QuadExt(1, 1)
    assert 1 - SQRT21 == QuadExt(1, -1)
    assert 2 / QuadExt(2, 0) == 1


def test_kappa_solves_its_quadratic():
    # 12 k^2 + 18 k + 5 = 0 for k = -(9 +- sqrt21)/12
    for s in (1, -1):
        k = kappa(s)
        assert 12 * k * k + 18 * k + 5 == 0
    assert kappa(1) + kappa(-1) == Fraction(-3, 2)
    with pytest.raises(ValueError):
        kappa(0)


@given(quads, quads, quads)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == 0
    if x != 0:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(quads, st.integers(0, 5))
def test_power_matches_repeated_product(x, n):
    p = QuadExt(1, 0)
    for _ in range(n):
        p = p * x
    assert x ** n == p


@given(quads)
def test_norm_is_product_with_conjugate(x):
    assert x * x.conjugate() == x.norm()


@given(st.one_of(fractions(50, 50), quads))
def test_format_parse_round_trip(x):
    text = format_scalar(x)
    assert parse_scalar(text) == x
    assert format_scalar(parse_scalar(text)) == text


@given(fractions(50, 50))
def test_normalization_is_idempotent(x):
    once = Fraction(x.numerator, x.denominator)
    assert Fraction(once.numerator, once.denominator) == once
    assert (once.numerator, once.denominator) == (x.numerator, x.denominator)


def test_string_forms():
    assert format_scalar(Fraction(-2, 3)) == "-2/3"
    assert format_scalar(QuadExt(Fraction(-3, 4), Fraction(-1, 12))) == "-3/4-1/12*sqrt21"
    assert format_scalar(QuadExt(5, 0)) == "5"
    assert parse_scalar("1/2+3/4*sqrt21") == QuadExt(Fraction(1, 2), Fraction(3, 4))
    for bad in ("0.5", "1e3", "abc", "1/2*sqrt5"):
        with pytest.raises(ValueError):
            parse_scalar(bad)
