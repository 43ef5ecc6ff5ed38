"""Skew operators sum a_i(z) T^i with T = sigma_q (f -> f(z^q)) or T = delta (d/dz).

Coefficients are kept as polynomials over one common monic denominator.
The commutation rules are sigma a(z) = a(z^q) sigma and
delta a(z) = a(z) delta + a'(z).
"""

from fractions import Fraction
from math import comb

from .errors import (DenominatorSingularAtOrigin, DivisionByZeroOperator, KindMismatch,
                     ZeroOperator)
from .linalg import det as _det, inverse as _inverse, matmul
from .numberfield import NFElem
from .polyring import Poly, RatFunc
from .series import PowerSeries, as_series


def _rf(x, field=None):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc.of(x)
    if isinstance(x, str):
        from .grammar import parse_ratfunc
        return parse_ratfunc(x, field)
    return RatFunc.of(Poly([x], field))


def _field_of(rfs):
    for r in rfs:
        if r.field is not None:
            return r.field
    return None


class OreOperator:
    """Common base of :class:`SigmaOp` and :class:`DeltaOp`."""

    kind = None

    def __init__(self, coeffs, q=None, field=None):
        rfs = [_rf(c, field) for c in coeffs]
        while rfs and rfs[-1].is_zero():
            rfs.pop()
        self.q = q
        self.field = field or _field_of(rfs)
        one = Poly([1], self.field)
        den = one
        for r in rfs:
            if r.den.degree > 0 and den != r.den:
                den = den * r.den // den.gcd(r.den)
        den = den.monic() if den.degree > 0 else one
        self.den = den
        self.num = tuple((r.num * (den // r.den)) * (1 / r.den.lc() if not isinstance(r.den.lc(), NFElem)
                                                     else r.den.lc().inverse()) for r in rfs)

    # construction helpers
    def _new(self, coeffs):
        return type(self)._make(coeffs, self.q, self.field)

    @classmethod
    def _make(cls, coeffs, q, field):
        raise NotImplementedError

    @property
    def order(self):
        """Order (-1 for the zero operator)."""
        return len(self.num) - 1

    def is_zero(self):
        return not self.num

    @property
    def coeffs(self):
        """Coefficients as rational functions a_i/den."""
        return [RatFunc(a, self.den) for a in self.num]

    def coeff(self, i):
        if 0 <= i < len(self.num):
            return RatFunc(self.num[i], self.den)
        return RatFunc.of(Poly([], self.field))

    def lc(self):
        return self.coeff(self.order)

    def is_polynomial(self):
        return self.den.degree == 0

    def max_coeff_degree(self):
        return max((a.degree for a in self.num), default=-1)

    def __repr__(self):
        name = type(self).__name__
        q = f"q={self.q}, " if self.q else ""
        return f"{name}({q}[{', '.join(str(c) for c in self.coeffs)}])"

    def __eq__(self, other):
        if not isinstance(other, OreOperator):
            return NotImplemented
        return (self.kind == other.kind and self.q == other.q and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.kind, self.q, self.num, self.den))

    def _check(self, other):
        if not isinstance(other, OreOperator) or other.kind != self.kind or other.q != self.q:
            raise KindMismatch("operators of different kinds cannot be combined")

    def __add__(self, other):
        if not isinstance(other, OreOperator):
            other = self._new([other])
        self._check(other)
        n = max(len(self.num), len(other.num))
        return self._new([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, OreOperator):
            other = self._new([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, OreOperator):
            return skew_multiply(self, other)
        return skew_multiply(self, self._new([other]))

    def __rmul__(self, other):
        return skew_multiply(self._new([other]), self)

    def scale_left(self, c):
        """c(z) * L for a rational function c."""
        c = _rf(c, self.field)
        return self._new([c * a for a in self.coeffs])

    def primitive(self):
        """Polynomial coefficients with the scalar and polynomial content removed.

        Over Q the result has coprime integer coefficients and a positive
        leading coefficient in its top coefficient; over a number field the
        top coefficient is made monic.
        """
        if self.is_zero():
            return self
        g = None
        for a in self.num:
            if a.is_zero():
                continue
            g = a if g is None else g.gcd(a)
        polys = [a // g for a in self.num]
        if self.field is None:
            from math import gcd, lcm
            den = 1
            for a in polys:
                for c in a.coeffs:
                    den = lcm(den, c.denominator)
            ints = [[c * den for c in a.coeffs] for a in polys]
            cg = 0
            for row in ints:
                for c in row:
                    cg = gcd(cg, int(c))
            top = polys[-1].lc()
            if top < 0:
                cg = -cg
            polys = [Poly([Fraction(int(c), cg) for c in row]) for row in ints]
        else:
            u = polys[-1].lc().inverse()
            polys = [a * u for a in polys]
        return self._new(polys)

    def to_json(self):
        d = {"kind": self.kind}
        if self.kind == "sigma":
            d["q"] = self.q
        if self.field is not None:
            d["field"] = self.field.to_json()
        d["coeffs"] = [str(c) for c in self.coeffs]
        return d

    @staticmethod
    def from_json(data, field=None):
        if field is None and "field" in data:
            from .numberfield import NumberField
            field = NumberField.from_json(data["field"])
        if data["kind"] == "sigma":
            return SigmaOp(data["q"], data["coeffs"], field)
        if data["kind"] == "delta":
            return DeltaOp(data["coeffs"], field)
        raise KindMismatch(f"unknown operator kind {data['kind']!r}")

    def theta_power(self, k):
        """The operator T^k of the same kind."""
        return self._new([0] * k + [1])


class SigmaOp(OreOperator):
    kind = "sigma"

    def __init__(self, q, coeffs, field=None):
        if int(q) < 2:
            raise ValueError("q must be at least 2")
        super().__init__(coeffs, int(q), field)

    @classmethod
    def _make(cls, coeffs, q, field):
        return cls(q, coeffs, field)

    def act_on_coeff(self, c, k=1):
        return c.compose_power(self.q ** k)


class DeltaOp(OreOperator):
    kind = "delta"

    def __init__(self, coeffs, field=None):
        super().__init__(coeffs, None, field)

    @classmethod
    def _make(cls, coeffs, q, field):
        return cls(coeffs, field)

    def act_on_coeff(self, c, k=1):
        for _ in range(k):
            c = c.derivative()
        return c


def skew_multiply(A, B):
    """The product A*B in the skew operator ring."""
    A._check(B)
    if A.is_zero() or B.is_zero():
        return A._new([])
    out = {}
    bco = B.coeffs
    for i, a in enumerate(A.coeffs):
        if a.is_zero():
            continue
        if A.kind == "sigma":
            step = A.q ** i
            for j, b in enumerate(bco):
                if not b.is_zero():
                    t = a * b.compose_power(step)
                    out[i + j] = out[i + j] + t if i + j in out else t
        else:
            # delta^i b = sum_k C(i,k) b^(i-k) delta^k
            for j, b in enumerate(bco):
                if b.is_zero():
                    continue
                deriv = b
                for d in range(0, i + 1):
                    k = i - d
                    t = a * deriv * comb(i, d)
                    if not t.is_zero():
                        out[j + k] = out[j + k] + t if j + k in out else t
                    deriv = deriv.derivative()
    n = max(out) + 1 if out else 0
    zero = RatFunc.of(Poly([], A.field or B.field))
    return A._new([out.get(k, zero) for k in range(n)])


def _theta_series(L, f, k):
    if L.kind == "sigma":
        return f.sigma(L.q, k)
    return f.derivative(k)


def apply_operator(L, f, N=None):
    """L(f) as a power series (truncated to N coefficients when N is given).

    The common denominator of L must not vanish at 0 unless the polynomial
    part of L(f) is divisible by the matching power of z.
    """
    f = as_series(f)
    total = None
    for i, a in enumerate(L.num):
        if a.is_zero():
            continue
        term = _theta_series(L, f, i) * a
        total = term if total is None else total + term
    if total is None:
        total = as_series(0, L.field)
    den = L.den
    if den.degree > 0:
        v, rest = den.strip_z()
        if v:
            M = (N or 64) + v
            head = total.coeffs(v)
            if any(c != 0 for c in head):
                raise DenominatorSingularAtOrigin("operator denominator vanishes at 0")
            total = _shift_down(total, v)
            den = rest
        total = total * PowerSeries.from_ratfunc(RatFunc(Poly([1], L.field), den))
    if N is not None:
        return PowerSeries.from_list(total.coeffs(N), L.field or f.field, finite=False)
    return total


def _shift_down(s, v):
    def extend(t, n):
        src = s.coeffs(n + v)
        for k in range(len(t._c), n):
            t._c.append(src[k + v])
    return PowerSeries(extend, s.field)


def right_divide(A, B):
    """(Q, R) with A = Q*B + R and order(R) < order(B)."""
    A._check(B)
    if B.is_zero():
        raise DivisionByZeroOperator("right division by the zero operator")
    Q = A._new([])
    R = A
    m = B.order
    lcB = B.lc()
    while not R.is_zero() and R.order >= m:
        k = R.order - m
        lead = B.act_on_coeff(lcB, k) if A.kind == "sigma" else lcB
        c = R.lc() / lead
        term = A._new([0] * k + [c])
        Q = Q + term
        R = R - skew_multiply(term, B)
    return Q, R


def gcrd(A, B):
    """Greatest common right divisor, normalized to primitive polynomial form."""
    A._check(B)
    if A.is_zero() and B.is_zero():
        raise ZeroOperator("gcrd of two zero operators")
    a, b = A, B
    if a.order < b.order:
        a, b = b, a
    while not b.is_zero():
        _, r = right_divide(a, b)
        a, b = b, r
    return a.primitive()


def sigma_shift(L, s):
    """sigma^s * L = sum a_i(z^(q^s)) sigma^(i+s)."""
    if s == 0:
        return L
    return skew_multiply(L.theta_power(s), L)


class SystemMatrix:
    """Square matrix A(z) of rational functions with a kind.

    For kind ``sigma`` solutions satisfy Y(z^q) = A(z) Y(z); for ``delta``
    they satisfy Y' = A(z) Y.
    """

    def __init__(self, entries, kind, q=None, labels=None, field=None):
        rows = [[_rf(x, field) for x in row] for row in entries]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("system matrix must be square")
        self.entries = rows
        self.kind = kind
        self.q = q
        self.labels = list(labels) if labels is not None else [f"y{i}" for i in range(n)]
        self.field = field or _field_of([x for r in rows for x in r])

    @property
    def dim(self):
        return len(self.entries)

    def __repr__(self):
        rows = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"SystemMatrix({self.kind}, [{rows}])"

    def __eq__(self, other):
        return (isinstance(other, SystemMatrix) and self.kind == other.kind and self.q == other.q
                and self.entries == other.entries)

    def one(self):
        return RatFunc.of(Poly([1], self.field))

    def det(self):
        return _det(self.entries, self.one())

    def inverse_entries(self):
        return _inverse(self.entries, self.one())

    def map(self, fn):
        return SystemMatrix([[fn(x) for x in r] for r in self.entries], self.kind, self.q,
                            self.labels, self.field)

    def compose_power(self, q):
        return self.map(lambda x: x.compose_power(q))

    def matmul(self, other):
        ent = other.entries if isinstance(other, SystemMatrix) else other
        zero = RatFunc.of(Poly([], self.field))
        return matmul(self.entries, ent, zero)

    def denominator_lcm(self):
        den = Poly([1], self.field)
        for r in self.entries:
            for x in r:
                if x.den.degree > 0:
                    den = den * x.den // den.gcd(x.den)
        return den.monic()

    def is_laurent(self):
        """True when every entry lies in K[z, 1/z]."""
        for r in self.entries:
            for x in r:
                if x.den.degree > 0 and x.den.valuation() != x.den.degree:
                    return False
        return True

    def evaluate(self, alpha):
        """Entries evaluated at an exact point (raises on poles)."""
        return [[x(alpha) for x in r] for r in self.entries]

    def to_json(self):
        d = {"kind": self.kind, "labels": self.labels,
             "entries": [[str(x) for x in r] for r in self.entries]}
        if self.q:
            d["q"] = self.q
        return d


def companion_system(L):
    """Companion matrix for (f, Tf, ..., T^(m-1) f)."""
    if L.is_zero() or L.order < 1:
        raise ZeroOperator("companion system needs an operator of order >= 1")
    m = L.order
    lc = L.lc()
    zero = RatFunc.of(Poly([], L.field))
    one = RatFunc.of(Poly([1], L.field))
    rows = []
    for i in range(m - 1):
        rows.append([one if j == i + 1 else zero for j in range(m)])
    rows.append([-(L.coeff(j) / lc) for j in range(m)])
    labels = [f"T^{j}" for j in range(m)]
    return SystemMatrix(rows, L.kind, L.q, labels, L.field)


def direct_sum(systems):
    """Block-diagonal sum; labels concatenated."""
    if not systems:
        raise ValueError("empty list of systems")
    kind, q = systems[0].kind, systems[0].q
    for s in systems:
        if s.kind != kind or s.q != q:
            raise KindMismatch("systems of different kinds")
    field = _field_of([RatFunc.of(Poly([1], s.field)) for s in systems])
    n = sum(s.dim for s in systems)
    zero = RatFunc.of(Poly([], field))
    rows = [[zero] * n for _ in range(n)]
    labels = []
    off = 0
    for s in systems:
        for i in range(s.dim):
            for j in range(s.dim):
                rows[off + i][off + j] = s.entries[i][j]
        labels.extend(s.labels)
        off += s.dim
    return SystemMatrix(rows, kind, q, labels, field)


# Euler-operator presentation used by the Fourier-Laplace correspondence.
# A theta-form is a dict {i: Poly in theta} meaning sum_i z^i P_i(theta).

def _falling(k, shift=0, field=None):
    """prod_{j=0}^{k-1} (theta + shift - j) as a Poly in theta."""
    p = Poly([1], field)
    for j in range(k):
        p = p * Poly([shift - j, 1], field)
    return p


def _to_theta_form(L):
    """z^K (den L) written as sum_i z^i P_i(theta) with K >= 0 as small as possible."""
    K = max([0] + [k - a.valuation() for k, a in enumerate(L.num) if not a.is_zero()])
    form = {}
    for k, a in enumerate(L.num):
        if a.is_zero():
            continue
        fk = _falling(k, 0, L.field)
        for e, c in enumerate(a.coeffs):
            if c == 0:
                continue
            i = e + K - k
            form[i] = form.get(i, Poly([], L.field)) + fk * c
    return {i: p for i, p in form.items() if not p.is_zero()}


def _stirling2(n):
    table = [[1]]
    for m in range(1, n + 1):
        row = [0] * (m + 1)
        for j in range(1, m + 1):
            row[j] = j * (table[m - 1][j] if j < m else 0) + table[m - 1][j - 1]
        table.append(row)
    return table


def _from_theta_form(form, field):
    """Delta operator from sum_i z^i P_i(theta), divided by the largest left power of z and content."""
    maxk = max((p.degree for p in form.values()), default=0)
    st = _stirling2(maxk)
    coeffs = {}
    for i, p in form.items():
        for k, c in enumerate(p.coeffs):
            if c == 0:
                continue
            # theta^k = sum_j S(k,j) z^j delta^j
            for j in range(0, k + 1):
                s = st[k][j] if j < len(st[k]) else 0
                if s:
                    mono = Poly.z(i + j, field) * (c * s)
                    coeffs[j] = coeffs.get(j, Poly([], field)) + mono
    order = max(coeffs) if coeffs else -1
    polys = [coeffs.get(j, Poly([], field)) for j in range(order + 1)]
    op = DeltaOp(polys, field)
    if op.is_zero():
        return op
    return op.primitive()


def fourier_laplace(L):
    """From an annihilator of sum a_n z^n/n! to one of sum a_n z^n (up to a left factor)."""
    if L.is_zero():
        raise ZeroOperator("transform of the zero operator")
    if L.kind != "delta":
        raise KindMismatch("the Fourier-Laplace correspondence acts on differential operators")
    form = _to_theta_form(L)
    out = {}
    for i, p in form.items():
        rising = Poly([1], L.field)
        for j in range(1, i + 1):
            rising = rising * Poly([j, 1], L.field)
        out[i] = p * rising
    return _from_theta_form(out, L.field)


def inverse_fourier_laplace(M):
    """From an annihilator of sum a_n z^n to one of sum a_n z^n/n! (up to a left factor)."""
    if M.is_zero():
        raise ZeroOperator("transform of the zero operator")
    if M.kind != "delta":
        raise KindMismatch("the Fourier-Laplace correspondence acts on differential operators")
    form = _to_theta_form(M)
    K = max(form)
    out = {}
    for i, p in form.items():
        g = Poly([1], M.field)
        for k in range(i, K):
            g = g * Poly([i - k, 1], M.field)
        out[i] = p * g
    return _from_theta_form(out, M.field)
