"""Arithmetic in the 2-local integers.

Three value types live here:

* :class:`DyadicLocal` -- exact rationals with odd denominator, i.e. the
  localization ``Z_(2)``, a dense subring of the 2-adic integers.
* :class:`TruncatedTwoAdic` -- a residue modulo ``2**precision``.
* :class:`DyadicModOne` -- a ``DyadicLocal`` taken modulo the integers.

All three are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral, Rational


class LocalArithmeticError(ArithmeticError):
    """Raised when an operation leaves the 2-local world (even denominators, non-units...)."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, DyadicLocal):
        return value._q
    if isinstance(value, (Integral, Rational)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a 2-local number")


class DyadicLocal:
    """A rational number whose reduced denominator is odd."""

    __slots__ = ("_q",)

    def __init__(self, numerator=0, denominator=1):
        q = Fraction(_as_fraction(numerator), _as_fraction(denominator))
        if q.denominator % 2 == 0:
            raise LocalArithmeticError(f"{q} has an even denominator")
        object.__setattr__(self, "_q", q)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicLocal is immutable")

    @classmethod
    def coerce(cls, value) -> "DyadicLocal":
        return value if isinstance(value, cls) else cls(value)

    @property
    def numerator(self) -> int:
        return self._q.numerator

    @property
    def denominator(self) -> int:
        return self._q.denominator

    def as_fraction(self) -> Fraction:
        return self._q

    def is_integer(self) -> bool:
        return self._q.denominator == 1

    def valuation(self) -> float | int:
        """2-adic valuation; ``inf`` for zero."""
        n = self._q.numerator
        if n == 0:
            return float("inf")
        return (n & -n).bit_length() - 1

    def half(self) -> "DyadicLocal":
        """Exact division by 2; the numerator must be even."""
        if self._q.numerator % 2:
            raise LocalArithmeticError(f"{self._q} is not divisible by 2 in Z_(2)")
        return DyadicLocal(self._q / 2)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            return DyadicLocal(self._q + _as_fraction(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return DyadicLocal(self._q - _as_fraction(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return DyadicLocal(_as_fraction(other) - self._q)
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        try:
            return DyadicLocal(self._q * _as_fraction(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            d = _as_fraction(other)
        except TypeError:
            return NotImplemented
        if d == 0:
            raise ZeroDivisionError("division by zero")
        # allowed iff the result keeps an odd denominator
        return DyadicLocal(self._q / d)

    def __rtruediv__(self, other):
        return DyadicLocal(other) / self

    def __neg__(self):
        return DyadicLocal(-self._q)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        return DyadicLocal(self._q ** int(exponent))

    def __eq__(self, other):
        try:
            return self._q == _as_fraction(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._q)

    def __repr__(self):
        return f"DyadicLocal({self._q.numerator}, {self._q.denominator})"

    def __str__(self):
        return str(self._q)

    def to_json(self) -> dict:
        return {"num": str(self.numerator), "den": str(self.denominator)}

    @classmethod
    def from_json(cls, data: dict) -> "DyadicLocal":
        return cls(int(data["num"]), int(data["den"]))


class TruncatedTwoAdic:
    """A 2-adic integer known modulo ``2**precision``.

    Binary operations between two truncated values run at the smaller of
    the two precisions. Plain ints and ``DyadicLocal`` operands are reduced
    to the precision of ``self``.
    """

    __slots__ = ("residue", "precision")

    def __init__(self, residue: int, precision: int):
        if precision < 1:
            raise ValueError("precision must be positive")
        if isinstance(residue, DyadicLocal):
            residue = reduce_mod_power(residue, precision).residue
        object.__setattr__(self, "precision", int(precision))
        object.__setattr__(self, "residue", int(residue) % (1 << precision))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedTwoAdic is immutable")

    @property
    def modulus(self) -> int:
        return 1 << self.precision

    def is_unit(self) -> bool:
        return self.residue & 1 == 1

    def lift(self) -> int:
        return self.residue

    def with_precision(self, precision: int) -> "TruncatedTwoAdic":
        if precision > self.precision:
            raise LocalArithmeticError("cannot raise the precision of a truncated value")
        return TruncatedTwoAdic(self.residue, precision)

    def _binary(self, other, op):
        if isinstance(other, TruncatedTwoAdic):
            prec = min(self.precision, other.precision)
            rhs = other.residue
        elif isinstance(other, DyadicLocal):
            prec = self.precision
            rhs = reduce_mod_power(other, prec).residue
        elif isinstance(other, Integral):
            prec = self.precision
            rhs = int(other)
        else:
            return NotImplemented
        return TruncatedTwoAdic(op(self.residue, rhs), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedTwoAdic(-self.residue, self.precision)

    def __pow__(self, exponent: int):
        exponent = int(exponent)
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return TruncatedTwoAdic(pow(self.residue, exponent, self.modulus), self.precision)

    def inverse(self) -> "TruncatedTwoAdic":
        if not self.is_unit():
            raise LocalArithmeticError(f"{self.residue} is not a unit mod 2^{self.precision}")
        return TruncatedTwoAdic(pow(self.residue, -1, self.modulus), self.precision)

    def __eq__(self, other):
        if isinstance(other, TruncatedTwoAdic):
            return self.precision == other.precision and self.residue == other.residue
        if isinstance(other, Integral):
            return self.residue == int(other) % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.precision))

    def __repr__(self):
        return f"TruncatedTwoAdic({self.residue}, {self.precision})"

    def to_json(self) -> dict:
        return {"residue": str(self.residue), "precision": self.precision}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedTwoAdic":
        return cls(int(data["residue"]), int(data["precision"]))


class DyadicModOne:
    """An element of ``Z_(2) / Z``, stored by its representative in ``[0, 1)``."""

    __slots__ = ("value",)

    def __init__(self, value=0):
        if isinstance(value, DyadicModOne):
            q = value.value.as_fraction()
        else:
            q = DyadicLocal.coerce(value).as_fraction()
        q = q - (q.numerator // q.denominator)
        object.__setattr__(self, "value", DyadicLocal(q))

    def __setattr__(self, name, value):
        raise AttributeError("DyadicModOne is immutable")

    @staticmethod
    def _other(value):
        if isinstance(value, DyadicModOne):
            return value.value
        return DyadicLocal.coerce(value)

    def __add__(self, other):
        try:
            return DyadicModOne(self.value + self._other(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return DyadicModOne(self.value - self._other(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return DyadicModOne(self._other(other) - self.value)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return DyadicModOne(-self.value)

    def __mul__(self, other):
        # only integer multiples are well defined on Z_(2)/Z
        if isinstance(other, Integral):
            return DyadicModOne(self.value * int(other))
        return NotImplemented

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.value.numerator == 0

    def __eq__(self, other):
        if isinstance(other, DyadicModOne):
            return self.value == other.value
        if isinstance(other, (Integral, DyadicLocal, Fraction)):
            try:
                return self == DyadicModOne(other)
            except LocalArithmeticError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash(("mod1", self.value))

    def __repr__(self):
        return f"DyadicModOne({self.value.numerator}/{self.value.denominator})"

    def to_json(self) -> dict:
        return self.value.to_json()

    @classmethod
    def from_json(cls, data: dict) -> "DyadicModOne":
        return cls(DyadicLocal.from_json(data))


def reduce_mod_power(x, m: int) -> TruncatedTwoAdic:
    """Image of ``x`` in ``Z / 2**m`` (denominators are inverted mod ``2**m``)."""
    if m < 1:
        raise ValueError("precision must be at least 1")
    x = DyadicLocal.coerce(x)
    mod = 1 << m
    return TruncatedTwoAdic(x.numerator * pow(x.denominator, -1, mod), m)


def is_unit_square(a: TruncatedTwoAdic) -> bool:
    """Whether the unit ``a`` is a square in ``Z_2``; needs precision >= 3."""
    if a.precision < 3:
        raise LocalArithmeticError("squareness of a unit is decided mod 8; precision >= 3 required")
    if not a.is_unit():
        raise LocalArithmeticError(f"{a.residue} is not a unit")
    return a.residue % 8 == 1


def hensel_sqrt(a: TruncatedTwoAdic) -> TruncatedTwoAdic:
    """Square root of ``a`` modulo ``2**precision``, normalized to ``x = 1 (mod 4)``.

    ``a`` must be ``1 mod 8``. The root is lifted one bit at a time: if
    ``x**2 = a mod 2**j`` with ``j >= 3`` then either ``x`` or
    ``x + 2**(j-1)`` is a root mod ``2**(j+1)``.
    """
    m = a.precision
    if m < 3:
        raise LocalArithmeticError("precision >= 3 required")
    if a.residue % 8 != 1:
        raise LocalArithmeticError(f"{a.residue} is not 1 mod 8, so it has no 2-adic square root")
    target = a.residue
    x = 1
    for j in range(3, m):
        if (x * x - target) % (1 << (j + 1)):
            x += 1 << (j - 1)
    x %= 1 << m
    if x % 4 != 1:
        x = (-x) % (1 << m)
    return TruncatedTwoAdic(x, m)


def mod_one(x) -> DyadicModOne:
    return DyadicModOne(x)
