"""Exact polynomials in one variable, plus Lagrange interpolation.

Coefficients may be Fractions or QNum values (anything supporting exact
+, *, and truth testing); the two kinds can be mixed freely because QNum
coerces rationals.
"""

from __future__ import annotations

from fractions import Fraction


class RatPoly:
    """Polynomial stored as a tuple of coefficients, ascending by degree.

    Trailing zero coefficients are trimmed, so ``degree`` is well defined
    and equality is structural.  The zero polynomial has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, d: int):
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return RatPoly(out)

    def __sub__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self + other.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return RatPoly(out)

    def scale(self, factor):
        return RatPoly([c * factor for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            body = str(c) if d == 0 else (f"{c}*n" if d == 1 else f"{c}*n^{d}")
            if parts and body.startswith("-"):
                parts.append(f"- {body[1:]}")
            elif parts:
                parts.append(f"+ {body}")
            else:
                parts.append(body)
        return " ".join(parts)

    def __repr__(self):
        return f"RatPoly({list(self.coeffs)!r})"

    def to_strings(self) -> list[str]:
        """Coefficients as exact strings, ascending by degree."""
        return [str(c) for c in self.coeffs]


def lagrange(points) -> RatPoly:
    """Exact interpolating polynomial through (x, y) pairs with distinct x."""
    points = list(points)
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    total = RatPoly()
    for i, (_, yi) in enumerate(points):
        basis = RatPoly([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = basis * RatPoly([-xj, Fraction(1)])
            denom *= xs[i] - xj
        total = total + basis.scale(yi / denom)
    return total


def binomial_poly(k: int) -> RatPoly:
    """C(n, k) as an exact polynomial in n."""
    from math import factorial

    p = RatPoly([1])
    for i in range(k):
        p = p * RatPoly([-i, 1])
    return p.scale(Fraction(1, factorial(k)))
