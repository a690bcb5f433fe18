"""
Coefficient - exact Gaussian rationals
Scalars of the operator algebra: re + im*i with both parts exact fractions
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


Number = Union[int, Fraction, 'Coefficient']


@dataclass(frozen=True, order=False)
class Coefficient:
    """Exact complex rational re + im*i (always in lowest terms via Fraction)"""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        # Fraction normalizes ints and strings; floats are not exact
        for part in (self.re, self.im):
            if isinstance(part, (float, complex)):
                raise TypeError(f"Cannot use {type(part).__name__} as an exact coefficient")
        object.__setattr__(self, 're', Fraction(self.re))
        object.__setattr__(self, 'im', Fraction(self.im))

    @classmethod
    def of(cls, value: Number) -> 'Coefficient':
        """Coerce int / Fraction / Coefficient to a Coefficient"""
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value), Fraction(0))
        raise TypeError(f"Cannot use {type(value).__name__} as an exact coefficient")

    @classmethod
    def imaginary(cls, value: Union[int, Fraction] = 1) -> 'Coefficient':
        return cls(Fraction(0), value)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def is_imaginary(self) -> bool:
        return self.re == 0 and self.im != 0

    def conjugate(self) -> 'Coefficient':
        return Coefficient(self.re, -self.im)

    def __add__(self, other: Number) -> 'Coefficient':
        other = Coefficient.of(other)
        return Coefficient(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> 'Coefficient':
        return Coefficient(-self.re, -self.im)

    def __sub__(self, other: Number) -> 'Coefficient':
        return self + (-Coefficient.of(other))

    def __rsub__(self, other: Number) -> 'Coefficient':
        return Coefficient.of(other) - self

    def __mul__(self, other: Number) -> 'Coefficient':
        other = Coefficient.of(other)
        return Coefficient(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> 'Coefficient':
        other = Coefficient.of(other)
        denom = other.re * other.re + other.im * other.im
        if denom == 0:
            raise ZeroDivisionError("Coefficient division by zero")
        num = self * other.conjugate()
        return Coefficient(num.re / denom, num.im / denom)

    def __pow__(self, exponent: int) -> 'Coefficient':
        if exponent < 0:
            return Coefficient(1) / (self ** -exponent)
        result = Coefficient(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        try:
            other = Coefficient.of(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"Coefficient({self.re}, {self.im})"


ZERO = Coefficient(0)
ONE = Coefficient(1)
I = Coefficient.imaginary(1)
