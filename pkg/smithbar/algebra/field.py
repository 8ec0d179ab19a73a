"""
Exact scalar arithmetic over the rationals and the prime fields F_p.

Elements are stored raw (``Fraction`` for Q, ``int`` residues in [0, p) for
F_p) inside the linear algebra loops; ``Scalar`` wraps a raw value together
with its field for the public arithmetic surface.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Union

from sympy import isprime

from ..core.errors import DivisionByZero, FieldMismatch, InputError, InvalidField
from ..utils.formatters import format_rational, parse_rational

MAX_PRIME = 2 ** 31

Raw = Union[int, Fraction]


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field F_p."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not 2 <= self.p < MAX_PRIME or not isprime(self.p):
                raise InvalidField(f"{self.p!r} is not a prime below 2^31")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def spec(self) -> str:
        return 'q' if self.p is None else f"f{self.p}"

    def __str__(self) -> str:
        return self.spec

    # raw arithmetic -------------------------------------------------------

    def zero(self) -> Raw:
        return Fraction(0) if self.p is None else 0

    def one(self) -> Raw:
        return Fraction(1) if self.p is None else 1

    def coerce(self, value: Any) -> Raw:
        """Map an integer or a rational into the field."""
        value = Fraction(value)
        if self.p is None:
            return value
        den = value.denominator % self.p
        if den == 0:
            raise DivisionByZero(f"denominator {value.denominator} vanishes in F_{self.p}")
        return value.numerator * pow(den, -1, self.p) % self.p

    def is_zero(self, x: Raw) -> bool:
        return x == 0

    def add(self, x: Raw, y: Raw) -> Raw:
        return x + y if self.p is None else (x + y) % self.p

    def sub(self, x: Raw, y: Raw) -> Raw:
        return x - y if self.p is None else (x - y) % self.p

    def mul(self, x: Raw, y: Raw) -> Raw:
        return x * y if self.p is None else (x * y) % self.p

    def neg(self, x: Raw) -> Raw:
        return -x if self.p is None else (-x) % self.p

    def inv(self, x: Raw) -> Raw:
        if x == 0:
            raise DivisionByZero(f"zero has no inverse in {self.spec}")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def div(self, x: Raw, y: Raw) -> Raw:
        return self.mul(x, self.inv(y))

    # text -----------------------------------------------------------------

    def parse(self, text: str) -> Raw:
        """Parse a coefficient written as an integer, ``p/q`` or a decimal."""
        return self.coerce(parse_rational(text))

    def format(self, x: Raw) -> str:
        return format_rational(x) if self.p is None else str(x)

    def scalar(self, value: Any) -> 'Scalar':
        return Scalar(self, self.coerce(value))


@lru_cache(maxsize=None)
def parse_field(spec: str) -> Field:
    """Parse ``q``, ``f2``, ``f3``, ``f<p>`` or ``fp:<p>``."""
    raw = spec.strip().lower()
    if raw in ('q', 'qq', 'rationals'):
        return Field()
    if raw.startswith('fp:'):
        digits = raw[3:]
    elif raw.startswith('f'):
        digits = raw[1:]
    else:
        raise InvalidField(f"unknown field spec {spec!r}")
    if not digits.isdigit():
        raise InvalidField(f"unknown field spec {spec!r}")
    return Field(int(digits))


RATIONALS = Field()


@dataclass(frozen=True)
class Scalar:
    """An immutable field element."""

    field: Field
    value: Raw

    def _check(self, other: 'Scalar') -> None:
        if not isinstance(other, Scalar):
            raise InputError(f"expected a Scalar, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field.spec} vs {other.field.spec}")

    def __add__(self, other: 'Scalar') -> 'Scalar':
        self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other: 'Scalar') -> 'Scalar':
        self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other: 'Scalar') -> 'Scalar':
        self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other: 'Scalar') -> 'Scalar':
        self._check(other)
        return Scalar(self.field, self.field.div(self.value, other.value))

    def __neg__(self) -> 'Scalar':
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> 'Scalar':
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __str__(self) -> str:
        return self.field.format(self.value)


_OPS = {
    'add': Scalar.__add__,
    'sub': Scalar.__sub__,
    'mul': Scalar.__mul__,
    'div': Scalar.__truediv__,
}


def arith(op: str, a: Scalar, b: Optional[Scalar] = None) -> Scalar:
    """Apply ``op`` in {add, sub, mul, div, neg, inv} to scalars of one field."""
    if op == 'neg':
        return -a
    if op == 'inv':
        return a.inverse()
    if op not in _OPS:
        raise InputError(f"unknown operation {op!r}")
    if b is None:
        raise InputError(f"operation {op!r} needs two operands")
    return _OPS[op](a, b)
