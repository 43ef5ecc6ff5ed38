"""Mahler functions: automatic series, relation guessing with certificates,
Mahler denominators, level-R operators, singularity removal, regular points,
system iteration and multiplicity reduction.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .balls import ComplexBall
from .errors import (IndependenceNotCertified, KindMismatch, NoRelationWithinBounds,
                     NotAnalyticOnDisk, NotLevelR, OrderMismatch, PointOnBoundary,
                     PreconditionFailed, RegularityFails, TruncationTooSmall, ValueNotAttained)
from .linalg import Echelon
from .numberfield import NFElem
from .ore import SigmaOp, SystemMatrix, apply_operator, companion_system, right_divide, sigma_shift, skew_multiply
from .polyring import Poly, RatFunc, has_root_in_punctured_disk, min_root_modulus_bound, INFINITY
from .series import PowerSeries


# automatic sequences

class AutomatonSeq:
    """Deterministic finite automaton with output reading base-q digits.

    ``transitions[s][d]`` is the state reached from ``s`` on digit ``d``.
    With ``digit_order="lsd"`` the least significant digit is read first;
    n = 0 reads the empty word, so a_0 is the output of the initial state.
    """

    def __init__(self, q, transitions, output, initial=0, digit_order="lsd", name=None):
        self.q = int(q)
        self.transitions = [list(map(int, row)) for row in transitions]
        self.output = [o if isinstance(o, NFElem) else Fraction(o) for o in output]
        self.initial = int(initial)
        if digit_order not in ("lsd", "msd"):
            raise ValueError("digit_order must be 'lsd' or 'msd'")
        self.digit_order = digit_order
        self.name = name
        n = len(self.transitions)
        if len(self.output) != n:
            raise ValueError("one output per state is required")
        for row in self.transitions:
            if len(row) != self.q or any(not 0 <= s < n for s in row):
                raise ValueError("transition table must be complete")

    @property
    def states(self):
        return list(range(len(self.transitions)))

    def state_of(self, n):
        digits = []
        while n:
            digits.append(n % self.q)
            n //= self.q
        if self.digit_order == "msd":
            digits.reverse()
        s = self.initial
        for d in digits:
            s = self.transitions[s][d]
        return s

    def __call__(self, n):
        return self.output[self.state_of(n)]

    def to_json(self):
        return {"q": self.q, "states": self.states, "transitions": self.transitions,
                "output": [str(o) for o in self.output], "initial": self.initial,
                "digit_order": self.digit_order}

    @classmethod
    def from_json(cls, data, name=None):
        return cls(data["q"], data["transitions"], [Fraction(o) for o in data["output"]],
                   data.get("initial", 0), data.get("digit_order", "lsd"), name)


def series_from_automaton(a, N=None):
    """Generating series of an automatic sequence (lazy; N forces a prefix)."""
    q = a.q
    trans = a.transitions
    out = a.output
    nstates = len(trans)
    # end[s][m]: state reached from s after reading the digits of m
    end = [[s] for s in range(nstates)]

    def extend(ser, n):
        c = ser._c
        if a.digit_order == "msd":
            st = getattr(ser, "_msd_states", [a.initial])
            for k in range(len(st), n):
                st.append(trans[st[k // q]][k % q])
            ser._msd_states = st
            for k in range(len(c), n):
                c.append(out[st[k]])
            return
        for m in range(len(end[0]), n):
            d, rest = m % q, m // q
            for s in range(nstates):
                end[s].append(end[trans[s][d]][rest])
        for k in range(len(c), n):
            c.append(out[end[a.initial][k]])

    field = next((o.field for o in out if isinstance(o, NFElem)), None)
    s = PowerSeries(extend, field, a.name)
    if N is not None:
        s.coeffs(N)
    return s


# Mahler functions

class MahlerFunction:
    """A q-Mahler series with an optional defining relation.

    The relation is ``inhom + sum_i a_i(z) f(z^(q^i)) = 0`` with the
    operator stored as ``annihilator`` (a SigmaOp) and ``inhom`` a Poly.
    """

    def __init__(self, q, series, annihilator=None, inhom=None, name=None, automaton=None,
                 notes=None):
        self.q = int(q)
        self.series = series
        self.annihilator = annihilator
        self.inhom = inhom
        self.name = name or getattr(series, "name", None)
        self.automaton = automaton
        self.notes = list(notes or [])
        self.field = series.field
        if annihilator is not None and annihilator.q != self.q:
            raise KindMismatch("annihilator has a different q")

    def __repr__(self):
        return f"MahlerFunction({self.name or '?'}, q={self.q})"

    @classmethod
    def from_automaton(cls, a, annihilator=None, inhom=None, name=None):
        return cls(a.q, series_from_automaton(a), annihilator, inhom, name or a.name, automaton=a)

    @classmethod
    def from_equation(cls, q, coeffs, inhom=None, initial=(), name=None, field=None):
        """Series determined by inhom + sum a_i f(z^(q^i)) = 0 and initial terms."""
        polys = [c if isinstance(c, Poly) else Poly([c], field) for c in coeffs]
        s = PowerSeries.mahler(q, polys, inhom, initial, field, name)
        return cls(q, s, SigmaOp(q, polys, field), inhom, name)

    def is_homogeneous(self):
        return self.inhom is None or self.inhom.is_zero()

    def homogeneous_annihilator(self):
        """A homogeneous operator killing f, eliminating the inhomogeneous term if present."""
        L = self.annihilator
        if L is None:
            return None
        if self.is_homogeneous():
            return L.primitive()
        b = self.inhom
        bq = b.compose_power(self.q)
        H = L.scale_left(RatFunc.of(bq)) - sigma_shift(L, 1).scale_left(RatFunc.of(b))
        return H.primitive()

    def relation_holds(self, N):
        if self.annihilator is None:
            return None
        res = apply_operator(self.annihilator, self.series, N)
        if self.inhom is not None:
            res = res + self.inhom
        return res.is_zero_mod(N)


def _as_series(f):
    return f.series if isinstance(f, MahlerFunction) else f


@dataclass
class DegreeBounds:
    """Search bounds: order m, coefficient degree d, truncation N."""

    m: int = 4
    d: int = 8
    N: int = None

    def __post_init__(self):
        if self.N is None:
            self.N = max(512, 4 * (self.m + 1) * (self.d + 1))


# guessing

@dataclass
class LinearRelation:
    """sum_i sum_j p_ij(z) sigma^j(f_i) + p(z) = 0 (p is the coefficient of the constant 1)."""

    q: int
    inhom: Poly
    coeffs: list  # coeffs[i][j] is a Poly
    verified_to: int = 0

    def operator(self, i=0):
        return SigmaOp(self.q, self.coeffs[i])

    def order(self):
        return max((j for row in self.coeffs for j, p in enumerate(row) if not p.is_zero()), default=-1)

    def __repr__(self):
        parts = []
        if not self.inhom.is_zero():
            parts.append(f"({self.inhom})*1")
        for i, row in enumerate(self.coeffs):
            for j, p in enumerate(row):
                if not p.is_zero():
                    parts.append(f"({p})*s^{j}f{i}")
        return "LinearRelation(" + " + ".join(parts) + " = 0)"


def _normalize_vector(vec, field):
    """Primitive integer form with first nonzero entry positive (or monic over a number field)."""
    nz = [c for c in vec if c != 0]
    if not nz:
        return vec
    if field is None or all(not isinstance(c, NFElem) or c.is_rational() for c in vec):
        from math import gcd, lcm
        vals = [c.rational() if isinstance(c, NFElem) else Fraction(c) for c in vec]
        den = 1
        for c in vals:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in vals]
        g = 0
        for x in ints:
            g = gcd(g, x)
        first = next(x for x in ints if x)
        if first < 0:
            g = -g
        out = [Fraction(x, g) for x in ints]
        if field is not None:
            out = [field(c) for c in out]
        return out
    first = nz[0]
    inv = first.inverse() if isinstance(first, NFElem) else 1 / first
    return [c * inv for c in vec]


def _solve_columns(columns, N, N2, field=None):
    """Kernel of the map lambda -> sum lambda_c col_c mod z^N, restricted to those valid mod z^N2.

    ``columns`` are coefficient lists of length >= N2. Returns vectors
    (reduced echelon basis, deterministic).
    """
    ncols = len(columns)
    one = field(1) if field else Fraction(1)
    zero = field(0) if field else Fraction(0)
    ech = Echelon(ncols, one)
    for n in range(N):
        row = [col[n] for col in columns]
        if any(c != 0 for c in row):
            ech.add(row)
            if ech.full_rank():
                return []
    basis = ech.nullspace(zero)
    if not basis or N2 <= N:
        return basis
    # restrict to combinations that stay valid up to N2
    bad = []
    for n in range(N, N2):
        vals = []
        for v in basis:
            acc = zero
            for c, col in zip(v, columns):
                if c != 0 and col[n] != 0:
                    acc = acc + c * col[n]
            vals.append(acc)
        if any(x != 0 for x in vals):
            bad.append(vals)
    if not bad:
        return basis
    ech2 = Echelon(len(basis), one)
    for row in bad:
        ech2.add(row)
    combos = ech2.nullspace(zero)
    out = []
    for w in combos:
        v = [zero] * ncols
        for wk, bk in zip(w, basis):
            if wk != 0:
                v = [a + wk * b for a, b in zip(v, bk)]
        out.append(v)
    # back to reduced echelon form
    if not out:
        return []
    e = Echelon(ncols, one)
    for v in out:
        e.add(v)
    rows, _ = e.rref()
    return rows


def _shifted_column(coeffs, k, n):
    return [Fraction(0)] * k + list(coeffs[: max(n - k, 0)]) if k < n else [Fraction(0)] * n


def guess_linear_sigma_relation(funcs, bounds, inhomogeneous=False):
    """All relations sum p_ij sigma^j f_i (+ p * 1) = 0 within the bounds.

    Every returned relation holds modulo z^(2N); an empty list means that no
    relation with deg p_ij <= d and j <= m holds even modulo z^N, which is an
    exact statement about the truncated system.
    """
    funcs = list(funcs)
    qs = {f.q for f in funcs if isinstance(f, MahlerFunction)}
    if len(qs) > 1:
        raise KindMismatch("functions with different q")
    q = qs.pop() if qs else bounds.q if hasattr(bounds, "q") else 2
    m, d, N = bounds.m, bounds.d, bounds.N
    r = len(funcs)
    ncols = r * (m + 1) * (d + 1) + ((d + 1) if inhomogeneous else 0)
    if N < ncols + 8:
        raise TruncationTooSmall(f"N = {N} is below the {ncols + 8} equations needed for {ncols} unknowns")
    N2 = 2 * N
    series = [_as_series(f) for f in funcs]
    field = next((s.field for s in series if s.field is not None), None)
    zero = field(0) if field else Fraction(0)
    columns = []
    if inhomogeneous:
        for k in range(d + 1):
            col = [zero] * N2
            col[k] = field(1) if field else Fraction(1)
            columns.append(col)
    for s in series:
        for j in range(m + 1):
            sj = s.sigma(q, j).coeffs(N2)
            for k in range(d + 1):
                columns.append([zero] * k + sj[: N2 - k])
    basis = _solve_columns(columns, N, N2, field)
    out = []
    for v in basis:
        v = _normalize_vector(v, field)
        pos = 0
        if inhomogeneous:
            inh = Poly(v[: d + 1], field)
            pos = d + 1
        else:
            inh = Poly([], field)
        rows = []
        for _ in range(r):
            row = []
            for _ in range(m + 1):
                row.append(Poly(v[pos: pos + d + 1], field))
                pos += d + 1
            rows.append(row)
        out.append(LinearRelation(q, inh, rows, N2))
    return out


@dataclass
class Certificate:
    order: int
    degree_bound: int
    truncation: int
    lower_orders_excluded: list
    status: str
    notes: list = dc_field(default_factory=list)

    def to_json(self):
        return {"order": self.order, "degree_bound": self.degree_bound, "truncation": self.truncation,
                "lower_orders_excluded": self.lower_orders_excluded, "status": self.status,
                "notes": self.notes}


def minimal_operator(f, d, N=None, max_order=4):
    """Operator of least order with coefficient degree <= d annihilating f mod z^N.

    Returns (operator, certificate). Orders below the result are excluded
    exactly for the truncated linear system.
    """
    N = N or max(512, 4 * (max_order + 1) * (d + 1))
    excluded = []
    for m in range(0, max_order + 1):
        rels = guess_linear_sigma_relation([f], DegreeBounds(m, d, N), inhomogeneous=False)
        if not rels:
            excluded.append(m)
            continue
        L = rels[0].operator(0).primitive()
        for rel in rels[1:]:
            # all order-m annihilators are rational multiples of one operator
            other = rel.operator(0).primitive()
            if other.order == L.order and other.max_coeff_degree() < L.max_coeff_degree():
                L = other
        low = next(c for c in L.num[0].coeffs if c != 0) if not L.num[0].is_zero() else 1
        if not isinstance(low, NFElem) and low < 0:
            L = L.scale_left(-1)
        status = f"verified to order {2 * N}"
        notes = []
        ref = f.annihilator if isinstance(f, MahlerFunction) else None
        if ref is not None and f.is_homogeneous() and L.order >= ref.order:
            _, R = right_divide(L, ref)
            if R.is_zero():
                status = "proved: right multiple of the reference annihilator"
            else:
                res = apply_operator(R, f.series, 2 * N)
                notes.append("remainder by reference annihilator is nonzero")
                if not res.is_zero_mod(2 * N):
                    status = "inconsistent with reference annihilator"
        cert = Certificate(L.order, d, N, excluded, status, notes)
        return L, cert
    raise NoRelationWithinBounds(f"no annihilator of order <= {max_order} with degree <= {d}")


def _monic_divisors(p):
    facs = p.factor()
    divs = [Poly([1], p.field)]
    for g, mult in facs:
        new = []
        for dv in divs:
            acc = dv
            for _ in range(mult):
                acc = acc * g
                new.append(acc)
        divs.extend(new)
    divs = [dv.monic() for dv in divs]
    uniq = []
    for dv in divs:
        if dv not in uniq:
            uniq.append(dv)
    uniq.sort(key=lambda x: (x.degree, str(x)))
    return uniq


@dataclass
class DenominatorResult:
    denominator: Poly
    witness: SigmaOp
    checked: list
    caveat: str


def _witness(f, p, m, d, N):
    """Coefficients c_1..c_m (deg <= d) with p f = sum c_k sigma^k f mod z^(2N), or None."""
    s = _as_series(f)
    q = f.q
    field = s.field or p.field
    zero = field(0) if field else Fraction(0)
    N2 = 2 * N
    columns = [(s * p).coeffs(N2)]
    for k in range(1, m + 1):
        sk = s.sigma(q, k).coeffs(N2)
        for j in range(d + 1):
            columns.append([zero] * j + [-c for c in sk[: N2 - j]])
    basis = _solve_columns(columns, N, N2, field)
    for v in basis:
        if v[0] != 0:
            inv = v[0].inverse() if isinstance(v[0], NFElem) else 1 / v[0]
            v = [c * inv for c in v]
            cs = [Poly(v[1 + (k - 1) * (d + 1): 1 + k * (d + 1)], field) for k in range(1, m + 1)]
            return cs
    # a relation with lambda = 0 only constrains f, not p; try combinations
    return None


def mahler_denominator(f, bounds):
    """Monic generator of the ideal of p with p f in sum_{k>=1} K[z] f(z^(q^k)), within bounds.

    Candidates are monic divisors of the constant coefficient of a known
    annihilator, tried by increasing degree; the first candidate with a
    witness relation is returned, so no proper divisor admits a witness
    within the same bounds.
    """
    L = f.homogeneous_annihilator() if isinstance(f, MahlerFunction) else None
    if L is None:
        L, _ = minimal_operator(f, bounds.d, bounds.N, bounds.m)
    a0 = L.num[0]
    if a0.is_zero():
        raise PreconditionFailed("annihilator has zero constant coefficient")
    m = max(L.order, 1)
    checked = []
    for p in _monic_divisors(a0):
        cs = _witness(f, p, m, bounds.d, bounds.N)
        checked.append(str(p))
        if cs is not None:
            wit = SigmaOp(f.q, [p] + [-c for c in cs], p.field)
            caveat = (f"minimal among monic divisors of {a0} for witnesses of order <= {m}, "
                      f"degree <= {bounds.d}, valid mod z^{2 * bounds.N}")
            return DenominatorResult(p, wit, checked, caveat)
    raise NoRelationWithinBounds("no divisor of the constant coefficient admits a witness")


def make_level_R(f, R, bounds=None):
    """Annihilator of f whose constant coefficient has no root in 0 < |z| < R."""
    R = Fraction(R)
    bounds = bounds or DegreeBounds(m=4, d=8)
    L = f.homogeneous_annihilator() if isinstance(f, MahlerFunction) else None
    if L is None:
        L, _ = minimal_operator(f, bounds.d, bounds.N, bounds.m)
    if not has_root_in_punctured_disk(L.num[0], R):
        return L
    den = mahler_denominator(f, bounds)
    if has_root_in_punctured_disk(den.denominator, R):
        raise NotAnalyticOnDisk(f"Mahler denominator {den.denominator} has a root in 0 < |z| < {R}")
    return den.witness


def is_level_R(L, R):
    return not has_root_in_punctured_disk(L.num[0], Fraction(R))


def remove_singularities(L, R):
    """(L + sigma^s L, s) with s least such that a_m(z^(q^s)) has no root in 0 < |z| < R.

    For s = 0 the operator itself is returned.
    """
    R = Fraction(R)
    if not is_level_R(L, R):
        raise NotLevelR(f"constant coefficient {L.num[0]} has a root in 0 < |z| < {R}")
    am = L.num[-1]
    s = 0
    radius = R
    while has_root_in_punctured_disk(am, radius):
        s += 1
        radius = R ** (L.q ** s)
        if s > 64:
            raise NotLevelR("leading coefficient never clears the disk")
    if s == 0:
        return L, 0
    return L + sigma_shift(L, s), s


# points and regularity

def point_ball(alpha, width=Fraction(1, 2 ** 80)):
    if isinstance(alpha, NFElem):
        return alpha.embed(width)
    return ComplexBall(Fraction(alpha))


def check_in_unit_disk(alpha):
    """Raise PointOnBoundary unless 0 < |alpha| < 1 (certified)."""
    if alpha == 0:
        raise PointOnBoundary("alpha = 0")
    if isinstance(alpha, NFElem) and not alpha.is_rational():
        w = Fraction(1, 2 ** 40)
        for _ in range(6):
            b = alpha.embed(w)
            if b.abs_upper(128) < 1:
                return
            if b.abs_lower(128) >= 1:
                raise PointOnBoundary("|alpha| >= 1")
            w = w ** 2
        raise PointOnBoundary("|alpha| cannot be separated from 1")
    a = alpha.rational() if isinstance(alpha, NFElem) else Fraction(alpha)
    if abs(a) >= 1:
        raise PointOnBoundary("|alpha| >= 1")


def _relevant_poly(target):
    if isinstance(target, SigmaOp):
        return target.num[0] * target.num[-1]
    if isinstance(target, SystemMatrix):
        D = target.denominator_lcm()
        det = target.det()
        if det.is_zero():
            return Poly([], target.field)
        return D * det.num
    raise TypeError("expected a SigmaOp or SystemMatrix")


def is_regular_point(target, alpha):
    """True iff alpha^(q^l) avoids every singularity for all l >= 0."""
    check_in_unit_disk(alpha)
    if isinstance(target, SystemMatrix) and target.kind != "sigma":
        P = _relevant_poly(target)
        return P(alpha) != 0
    q = target.q
    P = _relevant_poly(target)
    if P.is_zero():
        return False
    bound = min_root_modulus_bound(P, 8)
    ell_star = regular_orbit_cutoff(alpha, q, bound)
    x = alpha
    for _ in range(ell_star + 1):
        if P(x) == 0:
            return False
        x = x ** q
    return True


def regular_orbit_cutoff(alpha, q, bound):
    """Least l with |alpha|^(q^l) certified below ``bound`` (0 if bound is infinite)."""
    if bound == INFINITY:
        return 0
    up = point_ball(alpha).abs_upper(128)
    ell = 0
    cur = up
    while cur >= bound:
        cur = cur ** q
        ell += 1
        if cur.denominator.bit_length() > 4096:
            cur = Fraction(cur.numerator * 2 ** 256 // cur.denominator + 1, 2 ** 256)
    return ell


def iterate_system(A, ell):
    """A(z^(q^(l-1))) ... A(z^q) A(z), a q^l-Mahler system."""
    if A.kind != "sigma":
        raise KindMismatch("only sigma systems can be iterated")
    if ell < 1:
        raise ValueError("ell must be at least 1")
    result = A.entries
    for k in range(1, ell):
        Ak = A.compose_power(A.q ** k)
        result = Ak.matmul(result)
    return SystemMatrix(result, "sigma", A.q ** ell, A.labels, A.field)


def companion_with_constant(L, inhom=None, label="f"):
    """System for (1, f, sigma f, ..., sigma^(m-1) f) from inhom + L f = 0."""
    m = L.order
    if m < 1:
        raise PreconditionFailed("operator of order >= 1 required")
    field = L.field or (inhom.field if inhom is not None else None)
    zero = RatFunc.of(Poly([], field))
    one = RatFunc.of(Poly([1], field))
    lc = L.lc()
    b = RatFunc.of(inhom) if inhom is not None else zero
    rows = [[one] + [zero] * m]
    for i in range(1, m):
        row = [zero] * (m + 1)
        row[i + 1] = one
        rows.append(row)
    rows.append([-(b / lc)] + [-(L.coeff(j) / lc) for j in range(m)])
    labels = ["1"] + [f"{label}.{j}" for j in range(m)]
    return SystemMatrix(rows, "sigma", L.q, labels, field)


def _pole_order(r, alpha):
    """Order of alpha as a pole of the rational function r (0 if not a pole)."""
    def mult(p):
        k = 0
        if p.is_zero():
            return 10 ** 9
        lin = Poly([-alpha, 1])
        while p(alpha) == 0:
            p = p // lin
            k += 1
        return k
    return max(0, mult(r.den) - mult(r.num))


def multiplicity_bound(A, alpha, funcs=None, bounds=None):
    """Pole order of alpha in det A, bounding the multiplicity of the system's function at alpha.

    When ``funcs`` are given, linear independence of 1 and the non-constant
    functions over Q(z) within ``bounds`` is checked first.
    """
    if funcs is not None:
        bounds = bounds or DegreeBounds(m=0, d=6, N=256)
        nonconst = [f for f in funcs if not (isinstance(f, (int, Fraction)) and f == 1)]
        rels = guess_linear_sigma_relation(nonconst, DegreeBounds(0, bounds.d, bounds.N), inhomogeneous=True)
        if rels:
            raise IndependenceNotCertified("a linear relation over Q(z) was found")
    aq = alpha ** A.q
    if not is_regular_point(A, aq):
        raise RegularityFails("alpha^q is not a regular point of the system")
    return _pole_order(A.det(), alpha)


def reduce_multiplicity_step(A, f_index, alpha, value, func=None):
    """Replace f by g = (f - value)/(z - alpha) in the system.

    Returns (B, g_series) with B = P(z^q) A(z) P(z)^(-1). Requires the
    constant function at index 0.
    """
    if A.labels[0] != "1":
        raise PreconditionFailed("the first system component must be the constant function 1")
    if alpha == 0:
        raise PreconditionFailed("alpha must be nonzero")
    if func is not None:
        from .evalnum import check_algebraic_value
        if check_algebraic_value(func, alpha, value, Fraction(1, 10 ** 30)) == "refuted":
            raise ValueNotAttained("f(alpha) differs from the supplied value")
    n = A.dim
    field = A.field or (alpha.field if isinstance(alpha, NFElem) else None)
    if field is None and isinstance(value, NFElem):
        field = value.field
    one = RatFunc.of(Poly([1], field))
    zero = RatFunc.of(Poly([], field))
    lin = Poly([-alpha, 1], field)
    linq = Poly.z(A.q, field) - alpha

    def P_of(l):
        rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
        rows[f_index][f_index] = RatFunc(Poly([1], field), l)
        rows[f_index][0] = RatFunc(Poly([-value], field), l)
        return rows

    def Pinv_of(l):
        rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
        rows[f_index][f_index] = RatFunc.of(l)
        rows[f_index][0] = RatFunc.of(Poly([value], field))
        return rows

    Aent = [[x if x.field == field or field is None else RatFunc(x.num.over(field), x.den.over(field))
             for x in r] for r in A.entries]
    from .linalg import matmul
    B = matmul(matmul(P_of(linq), Aent, zero), Pinv_of(lin), zero)
    labels = list(A.labels)
    labels[f_index] = labels[f_index] + "'"
    Bsys = SystemMatrix(B, "sigma", A.q, labels, field)
    lhs = Bsys.det() * RatFunc.of(linq)
    detA = A.det()
    rhs = RatFunc(detA.num.over(field) if field else detA.num, detA.den.over(field) if field else detA.den) * RatFunc.of(lin)
    if lhs != rhs:
        raise AssertionError("determinant identity failed")
    g = None
    if func is not None:
        g = _as_series(func).divided_difference(value, alpha)
    return Bsys, g


def order_reduce_at_point(L1, L2, alpha):
    """L3 = b_m sigma^(m-n) L1 - a_n(z^(q^(m-n))) (z^(q^m) - alpha) L2, of order < m.

    L1 = sum a_i(z)(z^(q^i) - alpha) sigma^i has order n; L2 = sum b_i sigma^i
    has order m >= n and b_0(alpha) != 0.
    """
    L1._check(L2)
    n, m = L1.order, L2.order
    if m < n:
        raise OrderMismatch(f"order of L2 ({m}) is below order of L1 ({n})")
    q = L1.q
    field = L1.field or L2.field or (alpha.field if isinstance(alpha, NFElem) else None)
    a = []
    for i, c in enumerate(L1.coeffs):
        lin = Poly.z(q ** i, field) - alpha
        num = c.num.over(field) if field else c.num
        if not c.is_zero() and not (num % lin).is_zero():
            raise PreconditionFailed(f"coefficient {i} of L1 lacks the factor z^{q ** i} - alpha")
        a.append(c / RatFunc.of(lin))
    b0 = L2.coeff(0)
    if b0.is_zero() or b0(alpha) == 0:
        raise PreconditionFailed("b_0(alpha) must be nonzero")
    bm = L2.lc()
    an_shift = a[n].compose_power(q ** (m - n))
    factor = an_shift * RatFunc.of(Poly.z(q ** m, field) - alpha)
    L3 = sigma_shift(L1, m - n).scale_left(bm) - L2.scale_left(factor)
    return L3
