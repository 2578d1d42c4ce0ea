"""Exact arithmetic in the real field Q(sqrt2, sqrt3, sqrt5, sqrt7).

Elements are stored as finite sums  sum_d  c_d * sqrt(d)  where each
radicand d is a square-free product of primes from {2, 3, 5, 7} (16 basis
radicands: 1, 2, 3, 5, 6, 7, 10, 14, 15, 21, 30, 35, 42, 70, 105, 210) and
each coefficient c_d is an exact rational.  The representation is
canonical: zero coefficients are never stored, so equality is structural.

This field is big enough to hold every entry of the embedded orthogonal
representation matrices of S_k for k <= 6, which is all the rest of the
package needs.  Floating point appears only in ``to_float`` for reporting.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt, sqrt
from typing import Iterator, Union

from .errors import NotRepresentable

PRIMES = (2, 3, 5, 7)

# radicand of each subset of PRIMES, indexed by bitmask
_RADICAND = tuple(
    (2 if m & 1 else 1) * (3 if m & 2 else 1) * (5 if m & 4 else 1) * (7 if m & 8 else 1)
    for m in range(16)
)
_MASK_OF = {d: m for m, d in enumerate(_RADICAND)}

Rational = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QNum:
    """An exact element of Q(sqrt2, sqrt3, sqrt5, sqrt7).

    Immutable.  Supports +, -, *, / with other QNum values and with exact
    rationals (int, Fraction); never with floats.
    """

    __slots__ = ("_terms",)

    def __init__(self, coeffs=None):
        """Build from a mapping {radicand: rational coefficient}."""
        terms: dict[int, Fraction] = {}
        if coeffs:
            for d, c in coeffs.items():
                if d not in _MASK_OF:
                    raise ValueError(f"radicand {d} is not square-free over primes 2,3,5,7")
                c = _as_fraction(c)
                if c:
                    terms[_MASK_OF[d]] = c
        self._terms = terms

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "QNum":
        self = object.__new__(cls)
        self._terms = terms
        return self

    @classmethod
    def from_rational(cls, q: Rational) -> "QNum":
        q = _as_fraction(q)
        return cls._raw({0: q} if q else {})

    # -- inspection ---------------------------------------------------------

    def items(self) -> Iterator[tuple[int, Fraction]]:
        """Yield (radicand, coefficient) pairs, radicands increasing."""
        for m in sorted(self._terms, key=_RADICAND.__getitem__):
            yield _RADICAND[m], self._terms[m]

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(m == 0 for m in self._terms)

    def as_fraction(self) -> Fraction:
        """The value as a Fraction; raises if any radical part is present."""
        if not self._terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms[0]

    def to_float(self) -> float:
        return sum((float(c) * sqrt(_RADICAND[m]) for m, c in self._terms.items()), 0.0)

    __float__ = to_float

    # -- ring structure -----------------------------------------------------

    def _coerced(self, other):
        if isinstance(other, QNum):
            return other
        if isinstance(other, (int, Fraction)):
            return QNum.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in o._terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return QNum._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return QNum._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        terms: dict[int, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                # sqrt(d1)*sqrt(d2) = g * sqrt(d1*d2/g^2) with g = gcd(d1,d2)
                m = m1 ^ m2
                c = c1 * c2 * _RADICAND[m1 & m2]
                s = terms.get(m, 0) + c
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return QNum._raw(terms)

    __rmul__ = __mul__

    def conjugate(self, prime: int) -> "QNum":
        """Flip the sign of sqrt(prime) (a field automorphism)."""
        bit = 1 << PRIMES.index(prime)
        return QNum._raw({m: (-c if m & bit else c) for m, c in self._terms.items()})

    def inverse(self) -> "QNum":
        """Exact multiplicative inverse.

        Multiplies numerator and denominator by the conjugate flipping each
        sqrt(p) in turn until the denominator is rational.
        """
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        num = QNum.from_rational(1)
        den = self
        for p in PRIMES:
            bit = 1 << PRIMES.index(p)
            if any(m & bit for m in den._terms):
                conj = den.conjugate(p)
                num = num * conj
                den = den * conj
        return num * den.as_fraction() ** -1

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}.

        Zero is structural.  A nonzero value is certified by evaluating each
        sqrt(d) inside a rational interval, refined until the interval sum
        excludes 0; termination is guaranteed because a nonzero algebraic
        number is bounded away from zero.
        """
        if not self._terms:
            return 0
        if self.is_rational():
            return 1 if self._terms[0] > 0 else -1
        shift = 32
        while True:
            lo = hi = Fraction(0)
            scale = 1 << shift
            for m, c in self._terms.items():
                if m == 0:
                    lo += c
                    hi += c
                    continue
                root = isqrt(_RADICAND[m] << (2 * shift))
                b_lo = Fraction(root, scale)
                b_hi = Fraction(root + 1, scale)
                if c > 0:
                    lo += c * b_lo
                    hi += c * b_hi
                else:
                    lo += c * b_hi
                    hi += c * b_lo
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            shift *= 2

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for d, c in self.items():
            mag = c if c > 0 else -c
            if d == 1:
                body = str(mag)
            elif mag == 1:
                body = f"√{d}"
            else:
                body = f"{mag}√{d}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"QNum({{{', '.join(f'{d}: {c!r}' for d, c in self.items())}}})"

    # -- wire format --------------------------------------------------------

    def to_json_dict(self) -> dict[str, list[int]]:
        """JSON form: {radicand: [numerator, denominator]}."""
        return {str(d): [c.numerator, c.denominator] for d, c in self.items()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "QNum":
        return cls({int(d): Fraction(int(n), int(m)) for d, (n, m) in data.items()})


ZERO = QNum.from_rational(0)
ONE = QNum.from_rational(1)


def sqrt_rational(q: Rational) -> QNum:
    """The exact positive square root of a positive rational.

    Representable exactly iff the square-free part of numerator*denominator
    divides 210; otherwise raises NotRepresentable.
    """
    q = _as_fraction(q)
    if q <= 0:
        raise ValueError("square root argument must be positive")
    m = q.numerator * q.denominator
    outside = 1
    radicand = 1
    for p in PRIMES:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        outside *= p ** (e // 2)
        if e % 2:
            radicand *= p
    r = isqrt(m)
    if r * r != m:
        raise NotRepresentable(
            f"square-free part of {q} has a prime factor outside {{2,3,5,7}}"
        )
    return QNum({radicand: Fraction(outside * r, q.denominator)})


def _term_items(x):
    if isinstance(x, QNum):
        return x._terms.items()
    x = _as_fraction(x)
    return ((0, x),) if x else ()


def qdot(u, v) -> QNum:
    """Exact dot product of two sequences of QNum/rational entries.

    Accumulates into a single coefficient table, which is much faster than
    folding with repeated ``+`` when the vectors are long.
    """
    acc: dict[int, Fraction] = {}
    for a, b in zip(u, v, strict=True):
        ta = _term_items(a)
        if not ta:
            continue
        tb = _term_items(b)
        if not tb:
            continue
        for m1, c1 in ta:
            for m2, c2 in tb:
                m = m1 ^ m2
                s = acc.get(m, 0) + c1 * c2 * _RADICAND[m1 & m2]
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
    return QNum._raw(acc)


def qsum(values) -> QNum:
    """Exact sum of an iterable of QNum/rational values."""
    acc: dict[int, Fraction] = {}
    for v in values:
        for m, c in _term_items(v):
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
    return QNum._raw(acc)
