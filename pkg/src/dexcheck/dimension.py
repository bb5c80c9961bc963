"""Exact dimension algebra and checked quantities in Gaussian CGS.

Four base axes are tracked: mass [g], length [cm], time [s] and
temperature [K].  Charge is derived (1 esu = g^1/2 cm^3/2 s^-1), which is
why exponents are exact rationals rather than integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DimensionMismatch, DivisionByZero, NegativeRoot, NonPositive, Overflow

__all__ = [
    "Rational",
    "Dimension",
    "Quantity",
    "DIMENSIONLESS",
    "MASS",
    "LENGTH",
    "TIME",
    "TEMPERATURE",
    "ENERGY",
    "CHARGE",
    "UNIT_DIMENSIONS",
    "dim_combine",
    "dim_pow",
    "qty_arith",
    "qty_pow",
    "dex_gap",
    "as_rational",
]

Rational = Fraction
RationalLike = Union[Fraction, int, str]

AXIS_UNITS = ("g", "cm", "s", "K")


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise TypeError("rational exponents must be exact, got float")
    return Fraction(value)


@dataclass(frozen=True)
class Dimension:
    """Exponents of (mass, length, time, temperature)."""

    mass: Fraction = Fraction(0)
    length: Fraction = Fraction(0)
    time: Fraction = Fraction(0)
    temperature: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("mass", "length", "time", "temperature"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def from_exponents(cls, exponents) -> "Dimension":
        return cls(*exponents)

    @property
    def exponents(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.mass, self.length, self.time, self.temperature)

    @property
    def is_dimensionless(self) -> bool:
        return not any(self.exponents)

    def __mul__(self, other: "Dimension") -> "Dimension":
        return dim_combine(self, other, "mul")

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return dim_combine(self, other, "div")

    def __pow__(self, r: RationalLike) -> "Dimension":
        return dim_pow(self, r)

    def unit_string(self) -> str:
        """Render as a unit list, e.g. ``g^1/2 cm^3/2 s^-1``."""
        parts = []
        for unit, exp in zip(AXIS_UNITS, self.exponents):
            if exp == 0:
                continue
            parts.append(unit if exp == 1 else f"{unit}^{exp}")
        return " ".join(parts) if parts else "dimensionless"

    def __str__(self) -> str:
        return self.unit_string()


DIMENSIONLESS = Dimension()
MASS = Dimension(1, 0, 0, 0)
LENGTH = Dimension(0, 1, 0, 0)
TIME = Dimension(0, 0, 1, 0)
TEMPERATURE = Dimension(0, 0, 0, 1)
ENERGY = Dimension(1, 2, -2, 0)
CHARGE = Dimension(Fraction(1, 2), Fraction(3, 2), -1, 0)

UNIT_DIMENSIONS = {
    "g": MASS,
    "cm": LENGTH,
    "s": TIME,
    "K": TEMPERATURE,
    "erg": ENERGY,
    "esu": CHARGE,
    "dimensionless": DIMENSIONLESS,
}


def dim_combine(a: Dimension, b: Dimension, op: str) -> Dimension:
    if op == "mul":
        return Dimension(*(x + y for x, y in zip(a.exponents, b.exponents)))
    if op == "div":
        return Dimension(*(x - y for x, y in zip(a.exponents, b.exponents)))
    raise ValueError(f"unknown dimension op {op!r}")


def dim_pow(a: Dimension, r: RationalLike) -> Dimension:
    r = as_rational(r)
    return Dimension(*(x * r for x in a.exponents))


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise Overflow(f"{what} produced a non-finite magnitude")
    return value


@dataclass(frozen=True)
class Quantity:
    magnitude: float
    dimension: Dimension = DIMENSIONLESS

    def __post_init__(self):
        object.__setattr__(self, "magnitude", float(self.magnitude))
        if not math.isfinite(self.magnitude):
            raise Overflow(f"non-finite magnitude {self.magnitude!r}")

    @classmethod
    def of(cls, magnitude: float, unit: str = "dimensionless") -> "Quantity":
        """Build a quantity from a magnitude and a unit string like ``"g cm^2 s^-2"``."""
        from .dsl import parse_unit

        return cls(magnitude, parse_unit(unit))

    def _coerce(self, other) -> "Quantity":
        if isinstance(other, Quantity):
            return other
        if isinstance(other, (int, float)):
            return Quantity(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else qty_arith(self, other, "add")

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else qty_arith(self, other, "sub")

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else qty_arith(self, other, "mul")

    def __rmul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else qty_arith(other, self, "mul")

    def __truediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else qty_arith(self, other, "div")

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else qty_arith(other, self, "div")

    def __pow__(self, r):
        return qty_pow(self, r)

    def __str__(self) -> str:
        return format_quantity(self)


def format_quantity(q: Quantity) -> str:
    """Shortest round-trip magnitude followed by the unit list."""
    return f"{q.magnitude!r} {q.dimension.unit_string()}"


def qty_arith(a: Quantity, b: Quantity, op: str) -> Quantity:
    if op in ("add", "sub"):
        if a.dimension != b.dimension:
            raise DimensionMismatch(
                f"cannot {op} {a.dimension} and {b.dimension}", a.dimension, b.dimension
            )
        value = a.magnitude + b.magnitude if op == "add" else a.magnitude - b.magnitude
        return Quantity(_finite(value, op), a.dimension)
    if op == "mul":
        return Quantity(_finite(a.magnitude * b.magnitude, op), a.dimension * b.dimension)
    if op == "div":
        if b.magnitude == 0:
            raise DivisionByZero("division by a zero magnitude")
        return Quantity(_finite(a.magnitude / b.magnitude, op), a.dimension / b.dimension)
    raise ValueError(f"unknown arithmetic op {op!r}")


def qty_pow(a: Quantity, r: RationalLike) -> Quantity:
    r = as_rational(r)
    if r.denominator % 2 == 0 and a.magnitude < 0:
        raise NegativeRoot(f"even root of negative magnitude {a.magnitude!r}")
    if r == 0:
        return Quantity(1.0)
    if a.magnitude == 0 and r < 0:
        raise DivisionByZero("negative power of a zero magnitude")
    if r.denominator == 1:
        # integer powers by float pow of an int exponent keep exact small cases
        try:
            value = a.magnitude ** int(r)
        except OverflowError as exc:
            raise Overflow(str(exc)) from None
    elif r.denominator == 2 and r.numerator == 1:
        value = math.sqrt(a.magnitude)
    else:
        base = abs(a.magnitude)
        try:
            value = base ** float(r)
        except OverflowError as exc:
            raise Overflow(str(exc)) from None
        if a.magnitude < 0 and r.numerator % 2 == 1:
            value = -value
    return Quantity(_finite(value, "pow"), dim_pow(a.dimension, r))


def dex_gap(a: Quantity, b: Quantity) -> float:
    """Absolute base-10 log ratio of two same-dimension positive quantities."""
    if a.dimension != b.dimension:
        raise DimensionMismatch(
            f"dex gap between {a.dimension} and {b.dimension}", a.dimension, b.dimension
        )
    if a.magnitude <= 0 or b.magnitude <= 0:
        raise NonPositive("dex gap needs strictly positive magnitudes")
    # log10 of each side separately keeps ratios of ~1e-300/1e300 in range
    return abs(math.log10(a.magnitude) - math.log10(b.magnitude))
