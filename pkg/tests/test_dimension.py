import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dexcheck.dimension import (
    CHARGE,
    DIMENSIONLESS,
    ENERGY,
    LENGTH,
    MASS,
    TIME,
    Dimension,
    Quantity,
    dex_gap,
    dim_combine,
    dim_pow,
    qty_arith,
    qty_pow,
)
from dexcheck.errors import DimensionMismatch, DivisionByZero, NegativeRoot, NonPositive, Overflow

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)
dimensions = st.builds(Dimension, rationals, rationals, rationals, rationals)
VELOCITY = LENGTH / TIME


def test_charge_squared_over_length_is_energy():
    assert dim_combine(CHARGE, CHARGE, "mul") == Dimension(1, 3, -2, 0)
    assert CHARGE ** 2 / LENGTH == ENERGY == Dimension(1, 2, -2, 0)


def test_dim_combine_examples():
    assert dim_combine(VELOCITY, TIME, "mul") == LENGTH
    assert dim_combine(ENERGY, ENERGY, "div") == DIMENSIONLESS


def test_dim_pow_examples():
    assert dim_pow(MASS ** 2, Fraction(1, 2)) == MASS
    assert dim_pow(CHARGE, 0) == DIMENSIONLESS
    assert dim_pow(CHARGE, 2) == Dimension(1, 3, -2, 0)


def test_float_exponents_rejected():
    with pytest.raises(TypeError):
        Dimension(0.5, 0, 0, 0)


def test_unit_string():
    assert CHARGE.unit_string() == "g^1/2 cm^3/2 s^-1"
    assert DIMENSIONLESS.unit_string() == "dimensionless"


@given(dimensions, dimensions, dimensions)
def test_group_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert (a * b) / b == a
    assert a / a == DIMENSIONLESS


@given(dimensions, rationals, rationals)
def test_pow_composes_exactly(d, r, s):
    assert dim_pow(dim_pow(d, r), s) == dim_pow(d, r * s)


@given(rationals, rationals, rationals)
def test_rational_reduced_and_associative(a, b, c):
    total = (a + b) + c
    assert total == a + (b + c)
    assert total.denominator > 0
    assert math.gcd(total.numerator, total.denominator) == 1


def test_quantity_add_sub():
    assert qty_arith(Quantity(3, LENGTH), Quantity(4, LENGTH), "add") == Quantity(7, LENGTH)
    with pytest.raises(DimensionMismatch):
        qty_arith(Quantity(2, MASS), Quantity(1, TIME), "add")


def test_electrostatic_self_energy(reg):
    # e^2 / r_e with r_e = 2.8179e-13 cm: desk value 8.187207e-7 erg
    e2 = reg["e"] ** 2
    assert e2.dimension == Dimension(1, 3, -2, 0)
    energy = e2 / Quantity(2.8179e-13, LENGTH)
    assert energy.dimension == ENERGY
    assert energy.magnitude == pytest.approx(8.187207e-7, rel=1e-6)


def test_division_by_zero_and_overflow():
    with pytest.raises(DivisionByZero):
        Quantity(1.0) / Quantity(0.0, LENGTH)
    with pytest.raises(Overflow):
        Quantity(1e300) * Quantity(1e300)
    with pytest.raises(Overflow):
        Quantity(float("nan"))


def test_zero_magnitude_allowed_with_any_dimension():
    assert Quantity(0.0, CHARGE).magnitude == 0.0


def test_qty_pow_examples(reg):
    assert qty_pow(Quantity(1e80), Fraction(1, 2)).magnitude == 1e40
    assert qty_pow(Quantity(4, LENGTH ** 2), Fraction(1, 2)) == Quantity(2, LENGTH)
    planck = qty_pow(reg["hbar"] * reg["c"] / reg["G"], Fraction(1, 2))
    assert planck.dimension == MASS
    # desk value sqrt(1.054572e-27 * 2.99792458e10 / 6.674e-8)
    assert planck.magnitude == pytest.approx(2.1764834e-5, rel=1e-7)
    with pytest.raises(NegativeRoot):
        qty_pow(Quantity(-4.0), Fraction(1, 2))
    assert qty_pow(Quantity(-8.0), Fraction(1, 3)).magnitude == pytest.approx(-2.0)


@given(st.floats(1e-100, 1e100), st.floats(1e-100, 1e100))
def test_mul_matches_plain_float(x, y):
    q = qty_arith(Quantity(x, MASS), Quantity(y, VELOCITY), "mul")
    assert q.magnitude == x * y
    assert q.dimension == dim_combine(MASS, VELOCITY, "mul")


@given(st.floats(1e-300, 1e300), st.floats(1e-300, 1e300))
def test_dex_gap_symmetric(x, y):
    a, b = Quantity(x, LENGTH), Quantity(y, LENGTH)
    assert dex_gap(a, b) == dex_gap(b, a)


def test_dex_gap_examples():
    x = Quantity(3.3, LENGTH)
    assert dex_gap(x, x) == 0.0
    # large-number ratio with m = m_e from the desk oracle
    assert dex_gap(Quantity(4.165791e42), Quantity(1e40)) == pytest.approx(2.62, abs=0.005)
    with pytest.raises(DimensionMismatch):
        dex_gap(Quantity(2, MASS), Quantity(2, LENGTH))
    with pytest.raises(NonPositive):
        dex_gap(Quantity(-1.0), Quantity(1.0))
