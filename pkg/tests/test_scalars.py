from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from aspeckit.errors import DivisionByZero, FieldMismatch
from aspeckit.parsing import parse_scalar
from aspeckit.scalars import GF, QQ, QQI, GaussianRational, Residue, conj, field_from_name


def test_fraction_sum():
    assert QQ(Fraction(1, 2)) + QQ(Fraction(1, 3)) == Fraction(5, 6)


def test_gaussian_inverse():
    z = GaussianRational(2, 1)
    assert z.inverse() == GaussianRational(Fraction(2, 5), Fraction(-1, 5))
    assert z * z.inverse() == 1


def test_prime_field_inverse():
    assert GF(7).inv(GF(7)(3)) == GF(7)(5)


def test_division_by_zero_everywhere():
    for F in (QQ, QQI, GF(5)):
        with pytest.raises(DivisionByZero):
            F.inv(F.zero)
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0, 0).inverse()


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Residue(1, 5) + Residue(1, 7)
    with pytest.raises(FieldMismatch):
        GaussianRational(1, 1) + Residue(1, 5)
    with pytest.raises(FieldMismatch):
        QQ(GaussianRational(0, 1))


def test_conjugation_examples():
    assert conj(GaussianRational(2, 3)) == GaussianRational(2, -3)
    assert conj(Fraction(5, 7)) == Fraction(5, 7)
    assert conj(conj(GaussianRational(1, -1))) == GaussianRational(1, -1)
    assert GF(5).conj(GF(5)(3)) == GF(5)(3)


def test_canonical_representation():
    a = GaussianRational(Fraction(2, 4), Fraction(-6, 8))
    assert (a.re.numerator, a.re.denominator, a.im.numerator, a.im.denominator) == (1, 2, -3, 4)
    assert Residue(-1, 7).value == 6
    assert hash(GaussianRational(3, 0)) == hash(Fraction(3))


def test_literal_round_trip():
    for text in ["0", "-3", "1/2", "-5/7", "i", "-i", "2*i", "1/2+3/4*i", "1-i", "-1/3-2*i"]:
        assert QQI.format(parse_scalar(text, QQI)) == text
    assert GF(7).format(parse_scalar("1/3", GF(7))) == "5"


def test_field_names():
    assert field_from_name("QQ") is QQ
    assert field_from_name("QQ(i)") is QQI
    assert field_from_name("GF(11)") is GF(11)
    with pytest.raises(ValueError):
        field_from_name("GF(9)")


rationals = st.builds(Fraction, st.integers(-10 ** 4, 10 ** 4), st.integers(1, 50))
gaussians = st.builds(GaussianRational, rationals, rationals)
residues = st.integers(0, 12).map(lambda v: Residue(v, 13))


@pytest.mark.parametrize("elements", [rationals, gaussians, residues], ids=["QQ", "QQ(i)", "GF(13)"])
def test_field_axioms(elements):
    @given(elements, elements, elements)
    def check(a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a - a == 0 * a
        if a:
            assert a * (1 / a) == 1
    check()


@given(gaussians, gaussians)
def test_conj_is_automorphism(a, b):
    assert conj(a * b) == conj(a) * conj(b)
    assert conj(a + b) == conj(a) + conj(b)
    assert conj(conj(a)) == a


@given(gaussians)
def test_equal_values_equal_reprs(a):
    b = GaussianRational(a.re * 3 / 3, a.im + 0)
    assert a == b and repr(a) == repr(b) and hash(a) == hash(b)
