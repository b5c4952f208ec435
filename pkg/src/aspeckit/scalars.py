"""Exact scalars over Q, Q(i) and prime fields.

Elements are plain Python values: ``fractions.Fraction`` for Q,
:class:`GaussianRational` for Q(i) and :class:`Residue` for F_p.  A
:class:`Field` object carries everything that is not an operator on the
elements themselves (coercion, conjugation, literal formatting, sampling).
"""

from __future__ import annotations

import functools
import itertools
from random import Random
from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZero, FieldMismatch


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with reduced fractional parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        if isinstance(other, Residue):
            raise FieldMismatch("cannot mix Q(i) and F_p scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def norm(self):
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def inverse(self):
        n = self.norm()
        if not n:
            raise DivisionByZero("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return QQI.format(self)


class Residue:
    """An element of F_p stored as its least nonnegative residue."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        self.p = p
        self.value = value % p

    def _lift(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise FieldMismatch(f"cannot mix F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, (Fraction, GaussianRational)):
            raise FieldMismatch(f"cannot mix F_{self.p} and characteristic 0 scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self):
        if not self.value:
            raise DivisionByZero(f"inverse of zero in F_{self.p}")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * Residue(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.p) * self.inverse()

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def _format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Field:
    """Common interface of the three supported scalar fields."""

    name: str
    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, a) -> bool:
        return not a

    def inv(self, a):
        if not a:
            raise DivisionByZero(f"division by zero in {self.name}")
        return self.one / a

    def conj(self, a):
        return a

    def is_finite(self) -> bool:
        return self.characteristic != 0

    def order(self):
        return self.characteristic if self.characteristic else None

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Field) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


class RationalField(Field):
    name = "QQ"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        if type(x) is Fraction:
            return x
        if isinstance(x, GaussianRational):
            if x.im:
                raise FieldMismatch(f"{x} is not rational")
            return x.re
        if isinstance(x, Residue):
            raise FieldMismatch("cannot coerce F_p scalar into QQ")
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, Rational):
            return Fraction(int(x.numerator), int(x.denominator))
        raise FieldMismatch(f"cannot coerce {x!r} into QQ")

    def contains(self, a) -> bool:
        return isinstance(a, (int, Fraction))

    def format(self, a) -> str:
        return _format_fraction(Fraction(a))

    def random(self, rng: Random, bound: int = 5):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


class GaussianRationalField(Field):
    name = "QQ(i)"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Residue):
            raise FieldMismatch("cannot coerce F_p scalar into QQ(i)")
        return GaussianRational(QQ(x), 0)

    @property
    def i(self):
        return GaussianRational(0, 1)

    def contains(self, a) -> bool:
        return isinstance(a, (int, Fraction, GaussianRational))

    def conj(self, a):
        return self(a).conjugate()

    def is_rational(self, a) -> bool:
        return not self(a).im

    def format(self, a) -> str:
        a = self(a)
        if not a.im:
            return _format_fraction(a.re)
        if a.im == 1:
            im = "i"
        elif a.im == -1:
            im = "-i"
        else:
            im = _format_fraction(a.im) + "*i"
        if not a.re:
            return im
        sign = "" if im.startswith("-") else "+"
        return _format_fraction(a.re) + sign + im

    def random(self, rng: Random, bound: int = 5):
        return GaussianRational(QQ.random(rng, bound), QQ.random(rng, bound))


class PrimeField(Field):
    characteristic: int

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x):
        if isinstance(x, Residue):
            if x.p != self.characteristic:
                raise FieldMismatch(f"cannot coerce F_{x.p} scalar into {self.name}")
            return x
        if isinstance(x, int):
            return Residue(x, self.characteristic)
        if isinstance(x, Fraction):
            return Residue(x.numerator, self.characteristic) / Residue(x.denominator, self.characteristic)
        raise FieldMismatch(f"cannot coerce {x!r} into {self.name}")

    def contains(self, a) -> bool:
        return isinstance(a, Residue) and a.p == self.characteristic

    def format(self, a) -> str:
        return str(self(a).value)

    def random(self, rng: Random, bound: int = 0):
        return Residue(rng.randrange(self.characteristic), self.characteristic)

    def elements(self):
        return [Residue(v, self.characteristic) for v in range(self.characteristic)]

    def vectors(self, n: int):
        """All vectors of F_p^n in lexicographic order."""
        return itertools.product(self.elements(), repeat=n)


QQ = RationalField()
QQI = GaussianRationalField()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Resolve ``QQ``, ``QQ(i)`` or ``GF(p)``."""
    key = name.replace(" ", "")
    if key in ("QQ", "Q"):
        return QQ
    if key in ("QQ(i)", "Q(i)", "QQI"):
        return QQI
    if key.startswith("GF(") and key.endswith(")") and key[3:-1].isdigit():
        return GF(int(key[3:-1]))
    raise ValueError(f"unknown field {name!r}")


def conj(a):
    """Complex conjugation; identity on Q and F_p."""
    if isinstance(a, GaussianRational):
        return a.conjugate()
    return a


def field_of(a) -> Field:
    if isinstance(a, Residue):
        return GF(a.p)
    if isinstance(a, GaussianRational):
        return QQI
    if isinstance(a, (int, Fraction)):
        return QQ
    raise FieldMismatch(f"{a!r} is not a supported scalar")
