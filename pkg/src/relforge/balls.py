"""Interval and complex ball arithmetic with exact rational endpoints.

No floating point is involved: every endpoint is a :class:`fractions.Fraction`.
Results are enclosures, i.e. they contain the exact image of every point of
the operands. Endpoints may be rounded outward to dyadic rationals with
:meth:`RealInterval.round_out` to keep denominators small.
"""

from fractions import Fraction
from math import isqrt, floor, ceil

from .errors import RelforgeError


def Q(x):
    """Coerce an int/str/Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def sqrt_lower(x, bits=64):
    """Rational r with r <= sqrt(x), relative accuracy about 2**-bits."""
    x = Q(x)
    if x <= 0:
        return Fraction(0)
    # scale so the integer square root carries `bits` significant bits
    e = max(0, bits - (x.numerator.bit_length() - x.denominator.bit_length()) // 2 + 2)
    n = x.numerator * 4 ** e // x.denominator
    return Fraction(isqrt(n), 2 ** e)


def sqrt_upper(x, bits=64):
    """Rational r with r >= sqrt(x)."""
    x = Q(x)
    if x <= 0:
        return Fraction(0)
    e = max(0, bits - (x.numerator.bit_length() - x.denominator.bit_length()) // 2 + 2)
    n = -(-x.numerator * 4 ** e // x.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 2 ** e)


def iroot_lower(x, n, bits=64):
    """Rational r with 0 <= r <= x**(1/n) for x >= 0."""
    x = Q(x)
    if x <= 0:
        return Fraction(0)
    if n == 1:
        return x
    e = max(0, bits - (x.numerator.bit_length() - x.denominator.bit_length()) // n + 2)
    m = x.numerator * 2 ** (n * e) // x.denominator
    return Fraction(_int_nth_root(m, n), 2 ** e)


def _int_nth_root(m, n):
    # largest r with r**n <= m
    if m < 2:
        return m
    r = 1 << ((m.bit_length() + n - 1) // n)
    while True:
        s = ((n - 1) * r + m // r ** (n - 1)) // n
        if s >= r:
            break
        r = s
    while r ** n > m:
        r -= 1
    while (r + 1) ** n <= m:
        r += 1
    return r


def _round_down(x, bits):
    s = 1 << bits
    return Fraction(floor(x * s), s)


def _round_up(x, bits):
    s = 1 << bits
    return Fraction(ceil(x * s), s)


class RealInterval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Q(lo)
        hi = lo if hi is None else Q(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _of(cls, x):
        if isinstance(x, RealInterval):
            return x
        return cls(x)

    def __repr__(self):
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def mag(self):
        """Upper bound of |x|."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self):
        """Lower bound of |x|."""
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x):
        if isinstance(x, RealInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def intersects(self, other):
        other = RealInterval._of(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return RealInterval(lo, hi)

    def round_out(self, bits):
        return RealInterval(_round_down(self.lo, bits), _round_up(self.hi, bits))

    def __add__(self, other):
        other = RealInterval._of(other)
        return RealInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = RealInterval._of(other)
        return RealInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return RealInterval._of(other) - self

    def __mul__(self, other):
        other = RealInterval._of(other)
        if self.lo == self.hi and other.lo == other.hi:
            p = self.lo * other.lo
            return RealInterval(p, p)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RealInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def inverse(self):
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return RealInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * RealInterval._of(other).inverse()

    def __rtruediv__(self, other):
        return RealInterval._of(other) * self.inverse()

    def square(self):
        if self.contains_zero():
            return RealInterval(0, self.mag() ** 2)
        a, b = self.lo ** 2, self.hi ** 2
        return RealInterval(min(a, b), max(a, b))


class ComplexBall:
    """Rectangle ``re + i*im`` with rational interval sides."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = RealInterval._of(re)
        self.im = RealInterval._of(im)

    @classmethod
    def of(cls, x):
        if isinstance(x, ComplexBall):
            return x
        if isinstance(x, RealInterval):
            return cls(x, 0)
        if hasattr(x, "ball") and callable(x.ball):
            return x.ball()
        return cls(Q(x), 0)

    @classmethod
    def around(cls, re, im, radius):
        """Square box centred at ``re + i im`` with half-width ``radius``."""
        r = Q(radius)
        re, im = Q(re), Q(im)
        return cls(RealInterval(re - r, re + r), RealInterval(im - r, im + r))

    def __repr__(self):
        if self.im.lo == 0 == self.im.hi:
            return f"Ball({self.re!r})"
        return f"Ball({self.re!r} + i{self.im!r})"

    @property
    def width(self):
        return max(self.re.width, self.im.width)

    @property
    def center(self):
        return self.re.mid, self.im.mid

    def is_exact(self):
        return self.width == 0

    def is_real(self):
        return self.im.lo == 0 == self.im.hi

    def contains(self, other):
        if isinstance(other, ComplexBall):
            return self.re.contains(other.re) and self.im.contains(other.im)
        if isinstance(other, tuple):
            return self.re.contains(other[0]) and self.im.contains(other[1])
        return self.re.contains(Q(other)) and self.im.contains(0)

    def contains_zero(self):
        return self.re.contains_zero() and self.im.contains_zero()

    def intersects(self, other):
        other = ComplexBall.of(other)
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def intersection(self, other):
        re = self.re.intersection(other.re)
        im = self.im.intersection(other.im)
        if re is None or im is None:
            return None
        return ComplexBall(re, im)

    def round_out(self, bits):
        return ComplexBall(self.re.round_out(bits), self.im.round_out(bits))

    def abs_upper(self, bits=64):
        return sqrt_upper(self.re.mag() ** 2 + self.im.mag() ** 2, bits)

    def abs_lower(self, bits=64):
        return sqrt_lower(self.re.mig() ** 2 + self.im.mig() ** 2, bits)

    def abs2(self):
        return self.re.square() + self.im.square()

    def __add__(self, other):
        other = ComplexBall.of(other)
        return ComplexBall(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __sub__(self, other):
        other = ComplexBall.of(other)
        return ComplexBall(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ComplexBall.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, ComplexBall):
            if isinstance(other, (int, Fraction)):
                o = RealInterval(Q(other))
                return ComplexBall(self.re * o, self.im * o)
            other = ComplexBall.of(other)
        if other.is_real():
            return ComplexBall(self.re * other.re, self.im * other.re)
        if self.is_real():
            return ComplexBall(self.re * other.re, self.re * other.im)
        return ComplexBall(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self):
        return ComplexBall(self.re, -self.im)

    def inverse(self):
        d = self.abs2()
        if d.contains_zero():
            raise ZeroDivisionError("ball contains zero")
        dinv = d.inverse()
        return ComplexBall(self.re * dinv, -self.im * dinv)

    def __truediv__(self, other):
        return self * ComplexBall.of(other).inverse()

    def __rtruediv__(self, other):
        return ComplexBall.of(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return (self ** -n).inverse()
        result = ComplexBall(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def to_json(self, bits=None):
        """Endpoints as exact rational strings, rounded outward to a dyadic grid finer than the width."""
        if bits is None:
            w = self.width
            bits = 512 if w == 0 else max(64, w.denominator.bit_length() - w.numerator.bit_length() + 32)
        b = self if self._small() else self.round_out(bits)
        return {"re": [str(b.re.lo), str(b.re.hi)], "im": [str(b.im.lo), str(b.im.hi)]}

    def _small(self):
        return all(x.denominator.bit_length() < 256 and x.numerator.bit_length() < 256
                   for x in (self.re.lo, self.re.hi, self.im.lo, self.im.hi))

    def decimal(self, digits=30):
        """Human-readable midpoint with a radius, e.g. ``0.3090169... +/- 1e-41``."""
        import mpmath
        with mpmath.workdps(digits + 10):
            re = mpmath.mpf(self.re.mid.numerator) / self.re.mid.denominator
            im = mpmath.mpf(self.im.mid.numerator) / self.im.mid.denominator
            rad = float(self.width / 2)
            s = mpmath.nstr(re, digits)
            if not self.is_real():
                s += (" + " if im >= 0 else " - ") + mpmath.nstr(abs(im), digits) + "i"
        return f"{s} +/- {rad:.2g}"


class EnclosureError(RelforgeError):
    """An enclosure could not be produced to the requested width."""
