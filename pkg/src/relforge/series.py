"""Lazily extended power series with exact coefficients.

A :class:`PowerSeries` owns a growing coefficient prefix and a rule that
produces further coefficients on demand. Extending never changes
coefficients already produced, and extension is guarded by a lock so that
concurrent readers always see a consistent prefix.
"""

import threading
from fractions import Fraction

from .errors import DenominatorSingularAtOrigin, PreconditionFailed, TruncationTooSmall
from .kernels import mul_any
from .numberfield import NFElem
from .polyring import Poly, RatFunc


def _zero(field):
    return field(0) if field is not None else Fraction(0)


def _inv(c):
    return c.inverse() if isinstance(c, NFElem) else 1 / c


def _fieldof(*objs):
    for o in objs:
        f = getattr(o, "field", None)
        if f is not None:
            return f
    return None


class PowerSeries:
    """Truncatable coefficient stream over Q or a number field."""

    def __init__(self, extend, field=None, name=None, prefix=()):
        self._extend = extend
        self.field = field
        self.name = name
        self._c = [c if isinstance(c, NFElem) else Fraction(c) for c in prefix]
        self._lock = threading.RLock()

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs(6))
        return f"PowerSeries({self.name or ''}[{shown}, ...])"

    # access
    def _ensure(self, n):
        if len(self._c) >= n:
            return
        with self._lock:
            if len(self._c) < n:
                self._extend(self, n)

    def coeffs(self, n):
        """First n coefficients (a fresh list)."""
        self._ensure(n)
        return self._c[:n]

    def __getitem__(self, k):
        self._ensure(k + 1)
        return self._c[k]

    @property
    def known(self):
        return len(self._c)

    def poly(self, n):
        return Poly(self.coeffs(n), self.field)

    def valuation(self, n):
        """Index of the first nonzero coefficient below n, or None."""
        for k, c in enumerate(self.coeffs(n)):
            if c != 0:
                return k
        return None

    def is_zero_mod(self, n):
        return self.valuation(n) is None

    # constructors
    @classmethod
    def from_function(cls, fn, field=None, name=None):
        """Coefficients c_n = fn(n)."""
        def extend(s, n):
            for k in range(len(s._c), n):
                s._c.append(fn(k))
        return cls(extend, field, name)

    @classmethod
    def from_list(cls, coeffs, field=None, name=None, finite=True):
        """A polynomial (finite=True) or a known prefix that cannot be extended."""
        coeffs = list(coeffs)
        zero = _zero(field)

        def extend(s, n):
            if not finite:
                raise TruncationTooSmall(f"only {len(coeffs)} coefficients are known, {n} requested")
            s._c.extend([zero] * (n - len(s._c)))
        return cls(extend, field or _fieldof(*coeffs), name, coeffs)

    @classmethod
    def from_poly(cls, p, name=None):
        return cls.from_list(p.coeffs, p.field, name)

    @classmethod
    def from_ratfunc(cls, r, name=None):
        r = RatFunc.of(r)
        if r.den[0] == 0:
            raise DenominatorSingularAtOrigin("denominator vanishes at 0")
        num, den = r.num.coeffs, r.den.coeffs
        inv = _inv(r.den[0])
        field = r.field
        zero = _zero(field)

        def extend(s, n):
            c = s._c
            for k in range(len(c), n):
                acc = num[k] if k < len(num) else zero
                for j in range(1, min(k, len(den) - 1) + 1):
                    acc = acc - den[j] * c[k - j]
                c.append(acc * inv)
        return cls(extend, field, name)

    @classmethod
    def mahler(cls, q, coeffs, inhom=None, initial=(), field=None, name=None):
        """Solution of inhom + sum_i a_i(z) f(z^(q^i)) = 0.

        ``coeffs`` are the polynomials a_0, ..., a_m with a_0(0) != 0. The
        first ``len(initial)`` coefficients are taken from ``initial``; the
        constant term, if not given, must be forced by the equation.
        """
        polys = [c if isinstance(c, Poly) else Poly([c]) for c in coeffs]
        if polys[0][0] == 0:
            raise DenominatorSingularAtOrigin("a_0(0) = 0: the equation does not determine the series")
        inhom = inhom if inhom is not None else Poly([])
        field = field or _fieldof(inhom, *polys)
        zero = _zero(field)
        a = [[(k, c) for k, c in enumerate(p.coeffs) if c != 0] for p in polys]
        b = inhom.coeffs
        inv = _inv(polys[0][0])
        powers = [q ** i for i in range(len(polys))]
        init = list(initial)

        def extend(s, n):
            c = s._c
            for k in range(len(c), n):
                if k < len(init):
                    c.append(init[k] if isinstance(init[k], NFElem) else Fraction(init[k]))
                    continue
                acc = b[k] if k < len(b) else zero
                if k == 0:
                    total = sum((p[0] for p in polys), zero)
                    if total != 0:
                        c.append(-acc * _inv(total))
                        continue
                    if acc != 0:
                        raise PreconditionFailed("equation is inconsistent at z^0")
                    raise PreconditionFailed("constant term is free; supply it in initial")
                for (j, coef) in a[0]:
                    if j and j <= k:
                        acc = acc + coef * c[k - j]
                for i in range(1, len(a)):
                    qi = powers[i]
                    for (j, coef) in a[i]:
                        m = k - j
                        if m >= 0 and m % qi == 0:
                            acc = acc + coef * c[m // qi]
                c.append(-acc * inv)
        return cls(extend, field, name)

    # arithmetic
    def _binary(self, other, op):
        other = as_series(other, self.field)
        field = self.field or other.field

        def extend(s, n):
            a = self.coeffs(n)
            b = other.coeffs(n)
            for k in range(len(s._c), n):
                s._c.append(op(a[k], b[k]))
        return PowerSeries(extend, field)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return as_series(other, self.field) - self

    def __neg__(self):
        return self.map(lambda c: -c)

    def map(self, fn, field=None):
        """Coefficient-wise image (e.g. a field automorphism)."""
        def extend(s, n):
            src = self.coeffs(n)
            for k in range(len(s._c), n):
                s._c.append(fn(src[k]))
        return PowerSeries(extend, field or self.field)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NFElem)):
            return self.map(lambda c: c * other, _fieldof(self, other))
        if isinstance(other, RatFunc) and not other.is_poly():
            return self * PowerSeries.from_ratfunc(other)
        other = as_series(other, self.field)
        field = self.field or other.field

        def extend(s, n):
            target = max(n, 2 * len(s._c), 16)
            try:
                a = self.coeffs(target)
                b = other.coeffs(target)
            except TruncationTooSmall:
                target = n
                a = self.coeffs(target)
                b = other.coeffs(target)
            prod = mul_any(a, b)[:target]
            s._c.extend(prod[len(s._c):])
        return PowerSeries(extend, field)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = as_series(1, self.field)
        for _ in range(e):
            result = result * self
        return result

    def inverse(self):
        c0 = self[0]
        if c0 == 0:
            raise DenominatorSingularAtOrigin("series vanishes at 0")
        inv = _inv(c0)

        def extend(s, n):
            a = self.coeffs(n)
            c = s._c
            for k in range(len(c), n):
                if k == 0:
                    c.append(inv)
                    continue
                acc = _zero(self.field)
                for j in range(1, k + 1):
                    if a[j] != 0:
                        acc = acc + a[j] * c[k - j]
                c.append(-acc * inv)
        return PowerSeries(extend, self.field)

    def sigma(self, q, times=1):
        """f(z^(q^times))."""
        step = q ** times
        if step == 1:
            return self
        zero = _zero(self.field)

        def extend(s, n):
            src = self.coeffs((n - 1) // step + 1)
            for k in range(len(s._c), n):
                s._c.append(src[k // step] if k % step == 0 else zero)
        return PowerSeries(extend, self.field)

    def derivative(self, times=1):
        if times == 0:
            return self

        def extend(s, n):
            src = self.coeffs(n + 1)
            for k in range(len(s._c), n):
                s._c.append(src[k + 1] * (k + 1))
        d = PowerSeries(extend, self.field)
        return d.derivative(times - 1) if times > 1 else d

    def shift(self, k):
        """z^k * f."""
        zero = _zero(self.field)

        def extend(s, n):
            src = self.coeffs(max(n - k, 0))
            for j in range(len(s._c), n):
                s._c.append(zero if j < k else src[j - k])
        return PowerSeries(extend, self.field)

    def divided_difference(self, value, alpha):
        """(f - value) / (z - alpha) as a formal series (alpha != 0)."""
        alpha_inv = _inv(alpha)
        field = self.field or _fieldof(value, alpha)

        def extend(s, n):
            src = self.coeffs(n)
            c = s._c
            for k in range(len(c), n):
                fk = src[k] - value if k == 0 else src[k]
                prev = c[k - 1] if k else _zero(field)
                c.append((prev - fk) * alpha_inv)
        return PowerSeries(extend, field)

    def truncation_equal(self, other, n):
        return self.coeffs(n) == as_series(other, self.field).coeffs(n)

    def eval_exact_poly(self, n, x):
        return self.poly(n)(x)


def as_series(x, field=None):
    if isinstance(x, PowerSeries):
        return x
    if isinstance(x, Poly):
        return PowerSeries.from_poly(x)
    if isinstance(x, RatFunc):
        return PowerSeries.from_ratfunc(x)
    if isinstance(x, (int, Fraction, NFElem)):
        return PowerSeries.from_list([x], field or _fieldof(x))
    raise TypeError(f"cannot interpret {x!r} as a power series")


def exp_series():
    fact = [Fraction(1)]

    def coeff(n):
        while len(fact) <= n:
            fact.append(fact[-1] / len(fact))
        return fact[n]
    return PowerSeries.from_function(coeff, name="exp")
