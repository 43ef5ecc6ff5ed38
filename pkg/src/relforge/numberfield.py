"""Simple number fields Q(t) given by a monic irreducible minimal polynomial.

Elements are coordinate vectors on the power basis 1, t, ..., t^(d-1).
Each field carries certified isolating boxes for the complex roots of its
minimal polynomial; one of them is the distinguished embedding used by
:meth:`NFElem.embed`.
"""

import threading
from fractions import Fraction

from .balls import ComplexBall
from .errors import (AutomorphismFieldMismatch, FieldTooSmall, NotIrreducible,
                     NotMonic, RelforgeError)
from .rootiso import isolate_roots


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / Fraction(b[-1])
    while len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a.pop()
        a = _trim(a)
    return q, a


def _psub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _inverse_mod(a, m):
    """Inverse of a modulo m (coprime), by the extended Euclidean algorithm."""
    r0, r1 = _trim(m), _trim(a)
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    c = 1 / r1[0]
    return [x * c for x in s1]


def format_univariate(coeffs, var="x"):
    """Canonical text of an ascending rational coefficient list, highest degree first."""
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[k])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if a == 1:
                body = mono
            elif a.denominator == 1:
                body = f"{a}*{mono}"
            else:
                body = f"{a.numerator}/{a.denominator}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += sign + body
    return s


class NumberField:
    """Q(t) with t a root of ``minpoly`` (ascending rational coefficients)."""

    def __init__(self, minpoly, embedding_index=0, _check=True):
        coeffs = _trim(Fraction(c) for c in minpoly)
        if len(coeffs) < 2:
            raise NotIrreducible("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise NotMonic(f"leading coefficient is {coeffs[-1]}, expected 1")
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        if _check and self.degree > 1:
            from .sympy_bridge import factor_rational
            facs = factor_rational(list(coeffs))
            if len(facs) != 1 or facs[0][1] != 1:
                raise NotIrreducible(f"{format_univariate(coeffs)} factors over Q")
        self._roots = isolate_roots(list(coeffs))
        if not 0 <= embedding_index < self.degree:
            raise ValueError(f"embedding index {embedding_index} out of range")
        self.embedding_index = embedding_index
        self._lock = threading.Lock()
        # t^k reduced modulo minpoly for k < 2d - 1
        d = self.degree
        table = []
        cur = [Fraction(0)] * d
        cur[0] = Fraction(1)
        for _ in range(2 * d - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                for i in range(d):
                    cur[i] -= top * coeffs[i]
        self._powers = table

    def __repr__(self):
        return f"NumberField({format_univariate(self.minpoly)!r}, embedding_index={self.embedding_index})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def with_embedding(self, index):
        f = NumberField.__new__(NumberField)
        f.__dict__.update(self.__dict__)
        if not 0 <= index < self.degree:
            raise ValueError(f"embedding index {index} out of range")
        f.embedding_index = index
        f._lock = threading.Lock()
        return f

    @property
    def embeddings(self):
        """Certified isolating boxes of all roots, in canonical order."""
        return [r.box for r in self._roots]

    def root_box(self, width, index=None):
        i = self.embedding_index if index is None else index
        with self._lock:
            return self._roots[i].refine(Fraction(width))

    def gen(self):
        c = [Fraction(0)] * self.degree
        if self.degree == 1:
            c[0] = -self.minpoly[0]
        else:
            c[1] = Fraction(1)
        return NFElem(self, c)

    def __call__(self, x):
        if isinstance(x, NFElem):
            if x.field != self:
                raise FieldTooSmall("element belongs to another field")
            return x
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(x)
        return NFElem(self, c)

    def element(self, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            raise ValueError("too many coordinates")
        return NFElem(self, coords + [Fraction(0)] * (self.degree - len(coords)))

    def reduce(self, poly):
        """Reduce an ascending coefficient list in t modulo the minimal polynomial."""
        d = self.degree
        out = [Fraction(0)] * d
        if len(poly) <= len(self._powers):
            for k, c in enumerate(poly):
                if c:
                    row = self._powers[k]
                    for i in range(d):
                        if row[i]:
                            out[i] += c * row[i]
            return out
        _, r = _pdivmod([Fraction(c) for c in poly], list(self.minpoly))
        for i, c in enumerate(r):
            out[i] = c
        return out

    def to_json(self):
        return {"minpoly": format_univariate(self.minpoly), "embedding_index": self.embedding_index}

    @classmethod
    def from_json(cls, data):
        from .grammar import parse_univariate
        coeffs = parse_univariate(data["minpoly"], var="x")
        return make_number_field(coeffs, data.get("embedding_index", 0))


_FIELD_CACHE = {}
_CACHE_LOCK = threading.Lock()


def make_number_field(minpoly, embedding_index=None):
    """Construct Q(t) for a monic irreducible rational polynomial.

    ``minpoly`` is an ascending coefficient list (or anything with a
    ``coeffs`` attribute). Without an explicit index the distinguished
    embedding is the root of smallest argument in (-pi, pi], then smallest
    modulus. Fields are cached by (minpoly, index).
    """
    if hasattr(minpoly, "coeffs"):
        minpoly = minpoly.coeffs
    coeffs = tuple(_trim(Fraction(c) for c in minpoly))
    if len(coeffs) >= 2 and coeffs[-1] != 1:
        raise NotMonic(f"leading coefficient is {coeffs[-1]}, expected 1")
    key = (coeffs, embedding_index or 0)
    with _CACHE_LOCK:
        f = _FIELD_CACHE.get(key)
    if f is None:
        f = NumberField(coeffs, embedding_index or 0)
        with _CACHE_LOCK:
            f = _FIELD_CACHE.setdefault(key, f)
    return f


class NFElem:
    """Immutable element of a :class:`NumberField`."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(coords)
        self._hash = None

    def __repr__(self):
        return f"NFElem({format_univariate(self.coords, 't')})"

    def __str__(self):
        return format_univariate(self.coords, "t")

    def _coerce(self, other):
        if isinstance(other, NFElem):
            if other.field != self.field:
                raise FieldTooSmall("elements live in different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self.coords[1:])

    def rational(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, NFElem):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords[0]) if self.is_rational() else hash(self.coords)
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NFElem(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, [-a for a in self.coords])

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NFElem(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, [a * other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            c = other.coords[0]
            return NFElem(self.field, [a * c for a in self.coords])
        if self.is_rational():
            c = self.coords[0]
            return NFElem(self.field, [a * c for a in other.coords])
        return NFElem(self.field, self.field.reduce(_pmul(self.coords, other.coords)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return self.field(1 / self.coords[0])
        inv = _inverse_mod(list(self.coords), list(self.field.minpoly))
        return self.field.element(inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return NFElem(self.field, [a / other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** -n
        result = self.field(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def embed(self, width=Fraction(1, 2 ** 64), index=None):
        """Certified ball of width <= ``width`` around the chosen embedding."""
        width = Fraction(width)
        if self.is_rational():
            return ComplexBall(self.coords[0])
        # bound |p'| on a unit neighbourhood of the root to pick the root width
        box = self.field.root_box(Fraction(1, 2 ** 10), index)
        rad = box.abs_upper() + 1
        slope = sum(abs(c) * k * rad ** (k - 1) for k, c in enumerate(self.coords) if k) + 1
        w = width / (2 * slope)
        while True:
            box = self.field.root_box(w, index)
            acc = ComplexBall(0)
            for c in reversed(self.coords):
                acc = acc * box + c
            if acc.width <= width:
                return acc
            w /= 4

    def ball(self):
        return self.embed()

    def minpoly_rational(self):
        """Minimal polynomial of this element over Q (ascending, monic)."""
        from .sympy_bridge import element_minpoly
        return element_minpoly(self)

    def to_json(self):
        return {"coords": [str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, field, data):
        return field.element(Fraction(c) for c in data["coords"])


def embed(x, precision):
    """Ball of width <= ``precision`` containing x under the distinguished embedding."""
    if isinstance(x, (int, Fraction)):
        return ComplexBall(Fraction(x))
    return x.embed(precision)


class FieldAutomorphism:
    """Automorphism of a number field determined by the image of its generator."""

    def __init__(self, field, image_of_generator):
        if not isinstance(image_of_generator, NFElem) or image_of_generator.field != field:
            raise AutomorphismFieldMismatch("generator image must lie in the field")
        acc = field(0)
        for c in reversed(field.minpoly):
            acc = acc * image_of_generator + c
        if not acc.is_zero():
            raise RelforgeError("image of generator is not a root of the minimal polynomial")
        self.field = field
        self.image_of_generator = image_of_generator

    def __repr__(self):
        return f"FieldAutomorphism(t -> {self.image_of_generator})"

    def __eq__(self, other):
        return (isinstance(other, FieldAutomorphism) and self.field == other.field
                and self.image_of_generator == other.image_of_generator)

    def __hash__(self):
        return hash(self.image_of_generator)

    def is_identity(self):
        return self.image_of_generator == self.field.gen()

    def __call__(self, x):
        return conjugate_element(x, self)

    def compose(self, other):
        """self o other."""
        if other.field != self.field:
            raise AutomorphismFieldMismatch("automorphisms of different fields")
        return FieldAutomorphism(self.field, self(other.image_of_generator))

    def to_json(self):
        return {"image_of_generator": self.image_of_generator.to_json()}


def conjugate_element(x, tau):
    """Image of ``x`` under ``tau``; rationals are fixed."""
    if isinstance(x, (int, Fraction)):
        return x
    if x.field != tau.field:
        raise AutomorphismFieldMismatch("automorphism belongs to a different field")
    if x.is_rational():
        return x
    acc = x.field(0)
    for c in reversed(x.coords):
        acc = acc * tau.image_of_generator + c
    return acc


def automorphisms(field):
    """All automorphisms of ``field``, identity first."""
    from .sympy_bridge import roots_in_field
    gen = field.gen()
    out = [FieldAutomorphism(field, gen)]
    for r in roots_in_field(list(field.minpoly), field):
        if r != gen:
            out.append(FieldAutomorphism(field, r))
    return out


RATIONALS = None


def rational_field():
    """The degree-one field Q (as Q(t), t - 0)."""
    global RATIONALS
    if RATIONALS is None:
        RATIONALS = make_number_field([0, 1])
    return RATIONALS
