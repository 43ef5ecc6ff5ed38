"""Univariate polynomials and rational functions in z over Q or a number field,
sparse multivariate polynomials, and certified root-modulus tests.
"""

import math
from fractions import Fraction
from math import gcd, lcm

from .balls import ComplexBall, sqrt_lower
from .errors import BoundaryUndecided, DivisionByZeroPolynomial, FieldTooSmall, ZeroPolynomial
from .kernels import mul_any
from .numberfield import NFElem

INFINITY = math.inf

GRAEFFE_CAP = 40
GRAEFFE_MAX_BITS = 400_000


def _scalar(c):
    if isinstance(c, (Fraction, NFElem)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


def _field_of(coeffs):
    for c in coeffs:
        if isinstance(c, NFElem):
            return c.field
    return None


def _normalize_scalar(c):
    # collapse rational NFElems in degree-one fields is not done: keep the type stable
    return c


class Poly:
    """Dense univariate polynomial in z, coefficients ascending."""

    __slots__ = ("coeffs", "field", "_hash")

    def __init__(self, coeffs=(), field=None):
        cs = [_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        f = field or _field_of(cs)
        if f is not None:
            cs = [c if isinstance(c, NFElem) else f(c) for c in cs]
            for c in cs:
                if c.field != f:
                    raise FieldTooSmall("coefficients from different number fields")
        self.coeffs = tuple(cs)
        self.field = f
        self._hash = None

    @classmethod
    def _raw(cls, coeffs, field):
        p = cls.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        p.coeffs = tuple(cs)
        p.field = field
        p._hash = None
        return p

    @classmethod
    def z(cls, k=1, field=None):
        return cls([0] * k + [1], field)

    @classmethod
    def const(cls, c, field=None):
        return cls([c], field)

    def one(self):
        return Poly._raw([self._one()], self.field)

    def _zero(self):
        return self.field(0) if self.field else Fraction(0)

    def _one(self):
        return self.field(1) if self.field else Fraction(1)

    # basic queries
    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self._zero()

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self._zero()

    def valuation(self):
        """Order of vanishing at 0 (None for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    def is_rational(self):
        return self.field is None or all(c.is_rational() for c in self.coeffs)

    def to_rational(self):
        if self.field is None:
            return self
        return Poly([c.rational() for c in self.coeffs])

    def over(self, field):
        if field is None:
            return self.to_rational()
        if self.field is not None and self.field != field:
            raise FieldTooSmall("cannot move polynomial between different number fields")
        return Poly(self.coeffs, field)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        from .grammar import format_poly
        return format_poly(self)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, NFElem)):
            return (not self.coeffs and other == 0) or (len(self.coeffs) == 1 and self.coeffs[0] == other)
        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, NFElem)):
            return Poly([other], self.field)
        return None

    def _join(self, other):
        if self.field is None:
            return other.field
        if other.field is None or other.field == self.field:
            return self.field
        raise FieldTooSmall("polynomials over different number fields")

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self._join(o)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(out, f) if f is None or all(isinstance(c, NFElem) for c in out) else Poly(out, f)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NFElem)):
            if isinstance(other, NFElem) and self.field is None:
                return Poly([c * other for c in self.coeffs], other.field)
            return Poly._raw([c * other for c in self.coeffs], self.field)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self._join(o)
        if f is None:
            return Poly._raw(mul_any(list(self.coeffs), list(o.coeffs)), None)
        return Poly(mul_any(list(self.coeffs), list(o.coeffs)), f)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZeroPolynomial("division by the zero polynomial")
        f = self._join(o)
        a = list(self.coeffs)
        b = o.coeffs
        inv = 1 / b[-1]
        q = [self._zero()] * max(len(a) - len(b) + 1, 0)
        while len(a) >= len(b) and a:
            c = a[-1] * inv
            k = len(a) - len(b)
            q[k] = c
            if c != 0:
                for i, y in enumerate(b):
                    a[i + k] = a[i + k] - c * y
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        return Poly(q, f), Poly(a, f)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, NFElem)):
            if other == 0:
                raise DivisionByZeroPolynomial("division by zero")
            inv = 1 / Fraction(other) if not isinstance(other, NFElem) else other.inverse()
            return self * inv
        return RatFunc(self, other)

    def __rtruediv__(self, other):
        return RatFunc(other, self)

    def monic(self):
        if self.is_zero():
            return self
        return self * (1 / self.lc() if not isinstance(self.lc(), NFElem) else self.lc().inverse())

    def primitive(self):
        """Content-free form: over Q integer coefficients with gcd 1 and positive lc;
        over a number field the monic associate."""
        if self.is_zero():
            return self
        if self.field is None:
            den = 1
            for c in self.coeffs:
                den = lcm(den, c.denominator)
            ints = [c.numerator * (den // c.denominator) for c in self.coeffs]
            g = 0
            for x in ints:
                g = gcd(g, x)
            if ints[-1] < 0:
                g = -g
            return Poly._raw([Fraction(x // g) for x in ints], None)
        return self.monic()

    def content_scale(self):
        """Scalar c with self == c * self.primitive()."""
        p = self.primitive()
        return self.lc() / p.lc()

    def derivative(self):
        return Poly._raw([c * k for k, c in enumerate(self.coeffs)][1:], self.field)

    def compose_power(self, q):
        """p(z^q)."""
        if q == 1 or self.degree <= 0:
            return self
        out = [self._zero()] * (self.degree * q + 1)
        for k, c in enumerate(self.coeffs):
            out[k * q] = c
        return Poly._raw(out, self.field)

    def shift_z(self, k):
        """z^k * p."""
        if self.is_zero() or k == 0:
            return self
        return Poly._raw([self._zero()] * k + list(self.coeffs), self.field)

    def strip_z(self):
        """(v, p / z^v) with v the valuation."""
        v = self.valuation()
        if v is None:
            raise ZeroPolynomial("zero polynomial")
        return v, Poly._raw(self.coeffs[v:], self.field)

    def truncate(self, n):
        return Poly._raw(self.coeffs[:n], self.field)

    def compose(self, other):
        """p(other(z))."""
        acc = Poly._raw([], self.field if self.field else other.field)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def __call__(self, x):
        if isinstance(x, ComplexBall):
            acc = ComplexBall(0)
            for c in reversed(self.coeffs):
                acc = acc * x + (c.embed(Fraction(1, 2 ** 128)) if isinstance(c, NFElem) else c)
            return acc
        acc = self._zero()
        if isinstance(x, NFElem) and self.field is None:
            acc = x.field(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_ball(self, x, width):
        """Certified ball for p(x) with x exact (NFElem/rational), width <= ``width``."""
        if isinstance(x, (int, Fraction)) and self.field is None:
            return ComplexBall(self(Fraction(x)))
        val = self(x)
        if isinstance(val, NFElem):
            return val.embed(width)
        return ComplexBall(val)

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def gcdex(self, other):
        """(g, s, t) with s*self + t*other = g monic."""
        r0, r1 = self, other
        s0, s1 = self.one(), Poly._raw([], self.field)
        t0, t1 = Poly._raw([], self.field), self.one()
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = 1 / r0.lc() if not isinstance(r0.lc(), NFElem) else r0.lc().inverse()
        return r0 * inv, s0 * inv, t0 * inv

    def squarefree(self):
        """Squarefree part (monic)."""
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def factor(self):
        """Irreducible monic factors with multiplicities over the coefficient field."""
        from .sympy_bridge import factor_over_field
        if self.degree <= 0:
            return []
        facs = factor_over_field(list(self.coeffs), self.field)
        return [(Poly(f, self.field), m) for f, m in facs]

    def to_json(self):
        return str(self)

    @staticmethod
    def from_json(text, field=None):
        from .grammar import parse_expression
        p = parse_expression(text, field)
        if isinstance(p, RatFunc):
            if not p.den.is_constant():
                raise ValueError("expected a polynomial")
            return p.num * (1 / p.den.lc())
        return p


def _unit_inverse(c):
    return c.inverse() if isinstance(c, NFElem) else 1 / c


class RatFunc:
    """Reduced fraction num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, Poly):
            num = Poly([num])
        if den is None:
            den = num.one()
        elif not isinstance(den, Poly):
            den = Poly([den], num.field)
        if den.is_zero():
            raise DivisionByZeroPolynomial("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly([1], num.field or den.field)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num // g
                    den = den // g
                u = _unit_inverse(den.lc())
                num = num * u
                den = den * u
        self.num = num
        self.den = den

    @classmethod
    def of(cls, x, field=None):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x, x.one(), _reduced=True)
        p = Poly([x], field)
        return cls(p, p.one() if p else Poly([1], field), _reduced=True)

    @property
    def field(self):
        return self.num.field or self.den.field

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        from .grammar import format_ratfunc
        return format_ratfunc(self)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_poly(self):
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, (Poly, int, Fraction, NFElem)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _c(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, Fraction, NFElem)):
            return RatFunc.of(other)
        return None

    def __add__(self, other):
        o = self._c(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._c(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._c(other)
        if o is None:
            return NotImplemented
        if o.is_poly() and self.is_poly():
            u = _unit_inverse(self.den.lc() * o.den.lc())
            return RatFunc(self.num * o.num * u, Poly([1], self.field or o.field), _reduced=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByZeroPolynomial("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._c(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** -n
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def compose_power(self, q):
        return RatFunc(self.num.compose_power(q), self.den.compose_power(q), _reduced=True)

    def derivative(self):
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise DivisionByZeroPolynomial("pole at evaluation point")
        return self.num(x) / d

    def valuation(self):
        v = self.num.valuation()
        if v is None:
            return None
        return v - self.den.valuation()

    def series(self, n):
        """First n Taylor coefficients at 0 (denominator must not vanish at 0)."""
        from .errors import DenominatorSingularAtOrigin
        d0 = self.den[0]
        if d0 == 0:
            raise DenominatorSingularAtOrigin("denominator vanishes at 0")
        inv = _unit_inverse(d0)
        num = self.num.coeffs
        den = self.den.coeffs
        zero = self.num._zero()
        out = []
        for k in range(n):
            acc = num[k] if k < len(num) else zero
            for j in range(1, min(k, len(den) - 1) + 1):
                acc = acc - den[j] * out[k - j]
            out.append(acc * inv)
        return out

    def to_json(self):
        return str(self)


class MultiPoly:
    """Sparse polynomial over named variables: {exponent tuple: coefficient}."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.vars):
                raise ValueError("exponent length does not match variables")
            if c != 0:
                t[e] = c
        self.terms = t

    @classmethod
    def var(cls, variables, name, coeff=Fraction(1)):
        e = [0] * len(variables)
        e[list(variables).index(name)] = 1
        return cls(variables, {tuple(e): coeff})

    @classmethod
    def constant(cls, variables, c):
        return cls(variables, {(0,) * len(variables): c})

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        from .grammar import format_multipoly
        return format_multipoly(self)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if self.vars == other.vars:
                return self.terms == other.terms
            return self.rename(sorted(set(self.vars) | set(other.vars))).terms == \
                other.rename(sorted(set(self.vars) | set(other.vars))).terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.vars, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def rename(self, variables):
        """Re-express over a superset list of variables."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        return MultiPoly(variables, out)

    def used_vars(self):
        used = set()
        for e in self.terms:
            for v, k in zip(self.vars, e):
                if k:
                    used.add(v)
        return [v for v in self.vars if v in used]

    def _align(self, other):
        if isinstance(other, MultiPoly):
            if other.vars == self.vars:
                return self, other
            allv = list(self.vars) + [v for v in other.vars if v not in self.vars]
            return self.rename(allv), other.rename(allv)
        return self, MultiPoly.constant(self.vars, other)

    def __add__(self, other):
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        r = MultiPoly(a.vars)
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = MultiPoly(self.vars)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if other == 0:
                return MultiPoly(self.vars)
            r = MultiPoly(self.vars)
            r.terms = {e: c * other for e, c in self.terms.items()}
            return r
        a, b = self._align(other)
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e)
                p = c1 * c2
                out[e] = p if v is None else v + p
        r = MultiPoly(a.vars)
        r.terms = {e: c for e, c in out.items() if c != 0}
        return r

    __rmul__ = __mul__

    def __pow__(self, n):
        result = MultiPoly.constant(self.vars, Fraction(1))
        for _ in range(n):
            result = result * self
        return result

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def map_coeffs(self, fn):
        r = MultiPoly(self.vars)
        r.terms = {e: fn(c) for e, c in self.terms.items()}
        r.terms = {e: c for e, c in r.terms.items() if c != 0}
        return r

    def substitute(self, values):
        """Evaluate with ``values`` mapping variable names to ring elements.

        Variables not in ``values`` are kept; the result is a MultiPoly over the
        remaining variables when any remain, else a scalar/ring element.
        """
        keep = [v for v in self.vars if v not in values]
        kidx = [self.vars.index(v) for v in keep]
        sub = [(i, values[v]) for i, v in enumerate(self.vars) if v in values]
        out = MultiPoly(keep) if keep else None
        total = 0
        cache = {}
        for e, c in self.terms.items():
            term = c
            for i, val in sub:
                k = e[i]
                if k:
                    key = (i, k)
                    pw = cache.get(key)
                    if pw is None:
                        pw = val ** k
                        cache[key] = pw
                    term = term * pw
            if keep:
                out = out + MultiPoly(keep, {tuple(e[i] for i in kidx): Fraction(1)}) * term \
                    if not isinstance(term, MultiPoly) else out + term
            else:
                total = total + term
        return out if keep else total


# root-modulus machinery

def _abs_rational(c):
    return abs(c)


def _graeffe_step(coeffs):
    """Coefficients of g(z) with g(z^2) = (-1)^n p(z) p(-z)."""
    n = len(coeffs) - 1
    neg = [c if k % 2 == 0 else -c for k, c in enumerate(coeffs)]
    if all(type(c) is Fraction for c in coeffs):
        prod = mul_any(list(coeffs), neg)
    else:
        prod = mul_any(list(coeffs), neg)
    out = prod[0::2]
    if n % 2:
        out = [-c for c in out]
    return out


def _integerize(coeffs):
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [c.numerator * (den // c.denominator) for c in coeffs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [Fraction(x // g) for x in ints]


def _rational_image(p):
    """A rational polynomial whose roots contain the roots of p (norm for number-field p)."""
    if p.field is None or p.is_rational():
        return p.to_rational()
    from .sympy_bridge import norm_poly
    return Poly(norm_poly(list(p.coeffs), p.field))


def _fujiwara_lower(coeffs):
    """Lower bound on min |root| for a polynomial with nonzero constant term."""
    a0 = abs(coeffs[0])
    n = len(coeffs) - 1
    best = None
    from .balls import iroot_lower
    for i in range(1, n + 1):
        ai = abs(coeffs[i])
        if ai == 0:
            continue
        if i == n:
            v = iroot_lower(2 * a0 / ai, i)
        else:
            v = iroot_lower(a0 / ai, i)
        if best is None or v < best:
            best = v
    return best / 2


def min_root_modulus_bound(p, iterations=8):
    """Certified b > 0 with |rho| >= b for every nonzero root rho of p.

    Returns :data:`INFINITY` when p is a monomial. Root-squaring sharpens the
    bound: after k steps the bound is (Fujiwara bound of g_k)^(1/2^k); the
    best over all steps is returned, so the result is monotone in
    ``iterations``.
    """
    if not isinstance(p, Poly):
        p = Poly(p)
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no root bound")
    p = _rational_image(p)
    _, p1 = p.strip_z()
    if p1.degree == 0:
        return INFINITY
    g = _integerize(list(p1.coeffs))
    best = _fujiwara_lower(g)
    for k in range(1, iterations + 1):
        g = _integerize(_graeffe_step(g))
        if max(abs(c.numerator).bit_length() for c in g) > GRAEFFE_MAX_BITS:
            break
        b = _fujiwara_lower(g)
        for _ in range(k):
            b = sqrt_lower(b, 64)
        if b > best:
            best = b
    return best


def _pellet(coeffs):
    """Index j with |a_j| > sum of the other |a_i| (exactly j roots in the open unit disk)."""
    absvals = [abs(c) for c in coeffs]
    total = sum(absvals)
    for j, a in enumerate(absvals):
        if 2 * a > total:
            return j
    return None


def has_root_in_punctured_disk(p, R, cap=GRAEFFE_CAP):
    """Decide whether p has a root rho with 0 < |rho| < R.

    Over Q the decision comes from Graeffe iterates of p(Rz) and Pellet's
    test; over a number field the nonzero roots are isolated and compared
    with R. Raises :class:`BoundaryUndecided` when a root modulus cannot be
    separated from R.
    """
    if not isinstance(p, Poly):
        p = Poly(p)
    R = Fraction(R)
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if not 0 < R <= 1:
        raise ValueError("R must lie in (0, 1]")
    _, p1 = p.strip_z()
    if p1.degree == 0:
        return False
    if p1.field is not None and not p1.is_rational():
        return _disk_by_isolation(p1, R)
    g = [c * R ** k for k, c in enumerate(p1.to_rational().coeffs)]
    g = _integerize(g)
    for _ in range(cap + 1):
        j = _pellet(g)
        if j is not None:
            return j > 0
        g = _integerize(_graeffe_step(g))
        if max(abs(c.numerator).bit_length() for c in g) > GRAEFFE_MAX_BITS:
            break
    # the size guard stops exact squaring long before the cap; fall back to isolation
    return _disk_by_isolation(p1.to_rational(), R)


def certified_roots(p):
    """Isolated roots of the squarefree part of p (including 0 if it is a root)."""
    from .rootiso import isolate_roots
    sq = p.squarefree()
    return isolate_roots(list(sq.coeffs))


def _disk_by_isolation(p1, R):
    from .rootiso import modulus_vs_radius
    for r in certified_roots(p1):
        side = modulus_vs_radius(r, R)
        if side is None:
            raise BoundaryUndecided(f"a root has modulus indistinguishable from {R}")
        if side < 0:
            return True
    return False
