"""Polynomial relations among functions and their prolongations.

A relation lives in K[z][X_{i,j}], where X_{i,j} stands for sigma^j(f_i)
(Mahler side) or the j-th derivative of f_i (differential side). Variables
are named ``"label.j"``; the coefficient of the empty monomial is the
coefficient of the constant function 1.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations_with_replacement

from .balls import ComplexBall
from .errors import (AutomorphismFieldMismatch, BoundaryUndecided, FieldTooSmall,
                     IterationCapExceeded, NoBoundAvailable, NoComponentWitness,
                     PreconditionFailed, SizeGuardExceeded, TruncationTooSmall, ValueNotAttained)
from .linalg import Echelon
from .numberfield import NFElem, automorphisms
from .polyring import MultiPoly, Poly, RatFunc
from .rootiso import isolate_roots, modulus_vs_radius

CONSTANT_LABEL = "1"


def split_var(name):
    label, j = name.rsplit(".", 1)
    return label, int(j)


def var_name(label, j):
    return f"{label}.{j}"


def _scalar_field(c):
    return c.field if isinstance(c, NFElem) else None


class ProlongationKind:
    """sigma(q) (z -> z^q, X_{i,j} -> X_{i,j+1}) or delta (d/dz)."""

    def __init__(self, kind, q=None):
        if kind not in ("sigma", "delta"):
            raise ValueError("kind must be 'sigma' or 'delta'")
        if kind == "sigma" and not q:
            raise ValueError("sigma kind needs q")
        self.kind = kind
        self.q = q if kind == "sigma" else None

    def __eq__(self, other):
        return isinstance(other, ProlongationKind) and (self.kind, self.q) == (other.kind, other.q)

    def __hash__(self):
        return hash((self.kind, self.q))

    def __repr__(self):
        return f"sigma({self.q})" if self.kind == "sigma" else "delta"

    def act_coeff(self, c):
        return c.compose_power(self.q) if self.kind == "sigma" else c.derivative()

    def prolong_series(self, s, j):
        return s.sigma(self.q, j) if self.kind == "sigma" else s.derivative(j)

    def to_json(self):
        d = {"kind": self.kind}
        if self.q:
            d["q"] = self.q
        return d


SIGMA = lambda q: ProlongationKind("sigma", q)  # noqa: E731
DELTA = ProlongationKind("delta")


class RelationPoly:
    """Q(z, X) with Poly coefficients in z."""

    def __init__(self, poly, kind, labels=None, field=None):
        self.poly = poly
        self.kind = kind
        used = [split_var(v)[0] for v in poly.used_vars()]
        self.labels = list(labels) if labels is not None else list(dict.fromkeys(used))
        self.field = field or next((c.field for c in poly.terms.values() if c.field is not None), None)

    # construction
    @classmethod
    def from_terms(cls, terms, kind, labels=None, field=None):
        """``terms`` maps {var: exponent} dicts (as tuples of pairs) to coefficients."""
        variables = sorted({v for mono in terms for v, _ in mono}, key=_var_key)
        out = {}
        for mono, c in terms.items():
            e = [0] * len(variables)
            for v, k in mono:
                e[variables.index(v)] += k
            c = c if isinstance(c, Poly) else Poly([c], field)
            out[tuple(e)] = out.get(tuple(e), Poly([], field)) + c
        return cls(MultiPoly(variables, out), kind, labels, field)

    @classmethod
    def from_operator(cls, L, label, inhom=None):
        """The linear form sum a_j X_{label,j} (+ inhom) of an operator with polynomial coefficients."""
        kind = SIGMA(L.q) if L.kind == "sigma" else DELTA
        terms = {((var_name(label, j), 1),): a for j, a in enumerate(L.num) if not a.is_zero()}
        if inhom is not None and not inhom.is_zero():
            terms[()] = inhom
        return cls.from_terms(terms, kind, [label], L.field)

    @classmethod
    def from_linear_relation(cls, rel, labels):
        kind = SIGMA(rel.q)
        terms = {}
        if not rel.inhom.is_zero():
            terms[()] = rel.inhom
        for label, row in zip(labels, rel.coeffs):
            for j, p in enumerate(row):
                if not p.is_zero():
                    terms[((var_name(label, j), 1),)] = p
        return cls.from_terms(terms, kind, labels)

    # basic queries
    def __repr__(self):
        return f"RelationPoly({self})"

    def __str__(self):
        return str(self.poly)

    def __eq__(self, other):
        return isinstance(other, RelationPoly) and self.kind == other.kind and self.poly == other.poly

    def __neg__(self):
        return RelationPoly(-self.poly, self.kind, self.labels, self.field)

    def __add__(self, other):
        return RelationPoly(self.poly + other.poly, self.kind, _merge(self.labels, other.labels), self.field or other.field)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RelationPoly):
            return RelationPoly(self.poly * other.poly, self.kind, _merge(self.labels, other.labels),
                                self.field or other.field)
        if not isinstance(other, Poly):
            other = Poly([other], self.field)
        return RelationPoly(self.poly * other, self.kind, self.labels, self.field)

    __rmul__ = __mul__

    def is_zero(self):
        return self.poly.is_zero()

    def depths(self):
        """Multi-depth: the largest j used for each label."""
        out = {}
        for v in self.poly.used_vars():
            label, j = split_var(v)
            out[label] = max(out.get(label, 0), j)
        return out

    def monomials(self):
        """[(dict var -> exponent, coefficient)]."""
        out = []
        for e, c in self.poly.terms.items():
            out.append(({v: k for v, k in zip(self.poly.vars, e) if k}, c))
        return out

    def total_degree(self):
        return self.poly.total_degree()

    def is_homogeneous(self):
        degs = {sum(e) for e in self.poly.terms}
        return len(degs) <= 1

    def homogenized(self):
        """Homogeneous form obtained by adjoining X_{1,0} for the constant function."""
        D = self.total_degree()
        one = var_name(CONSTANT_LABEL, 0)
        variables = list(self.poly.vars) + ([one] if one not in self.poly.vars else [])
        p = self.poly.rename(variables)
        idx = variables.index(one)
        out = {}
        for e, c in p.terms.items():
            e = list(e)
            e[idx] += D - sum(e)
            out[tuple(e)] = c
        return RelationPoly(MultiPoly(variables, out), self.kind, [CONSTANT_LABEL] + self.labels, self.field)

    def map_coeffs(self, fn):
        return RelationPoly(self.poly.map_coeffs(fn), self.kind, self.labels, self.field)

    def primitive(self):
        """Divide by the polynomial content; rational coefficients become coprime integers."""
        g = None
        for c in self.poly.terms.values():
            g = c if g is None else g.gcd(c)
        if g is None:
            return self
        out = self.poly.map_coeffs(lambda c: c // g)
        first = out.terms[max(out.terms)]
        if self.field is None:
            from math import gcd, lcm
            den = 1
            for c in out.terms.values():
                for x in c.coeffs:
                    den = lcm(den, x.denominator)
            num = 0
            for c in out.terms.values():
                for x in c.coeffs:
                    num = gcd(num, int(x * den))
            scale = Fraction(den, num)
            if first.lc() < 0:
                scale = -scale
            out = out.map_coeffs(lambda c: c * scale)
        else:
            u = first.lc().inverse()
            out = out.map_coeffs(lambda c: c * u)
        return RelationPoly(out, self.kind, self.labels, self.field)

    # Theta action
    def theta(self):
        """sigma: ring endomorphism; delta: derivation. X_{i,j} -> X_{i,j+1}."""
        shift = {}
        for v in self.poly.vars:
            label, j = split_var(v)
            shift[v] = var_name(label, j + 1)
        variables = sorted(set(self.poly.vars) | set(shift.values()), key=_var_key)
        if self.kind.kind == "sigma":
            out = MultiPoly(variables)
            src = self.poly.rename(variables)
            idx = {v: variables.index(v) for v in variables}
            terms = {}
            for e, c in src.terms.items():
                ne = [0] * len(variables)
                for v, k in zip(variables, e):
                    if k:
                        ne[idx[shift[v]]] += k
                terms[tuple(ne)] = self.kind.act_coeff(c)
            out = MultiPoly(variables, terms)
            return RelationPoly(out, self.kind, self.labels, self.field)
        src = self.poly.rename(variables)
        terms = {}

        def add(e, c):
            cur = terms.get(e)
            terms[e] = c if cur is None else cur + c

        for e, c in src.terms.items():
            dc = c.derivative()
            if not dc.is_zero():
                add(e, dc)
            for pos, k in enumerate(e):
                if not k:
                    continue
                v = variables[pos]
                tgt = variables.index(shift[v])
                ne = list(e)
                ne[pos] -= 1
                ne[tgt] += 1
                add(tuple(ne), c * k)
        terms = {e: c for e, c in terms.items() if not c.is_zero()}
        return RelationPoly(MultiPoly(variables, terms), self.kind, self.labels, self.field)

    # serialization
    def to_json(self):
        terms = []
        for e in sorted(self.poly.terms):
            c = self.poly.terms[e]
            mono = {v: k for v, k in zip(self.poly.vars, e) if k}
            terms.append({"coeff": str(c), "monomial": mono})
        d = dict(self.kind.to_json())
        d["labels"] = self.labels
        if self.field is not None:
            d["field"] = self.field.to_json()
        d["terms"] = terms
        return d

    @classmethod
    def from_json(cls, data, field=None):
        from .grammar import parse_expression
        from .numberfield import NumberField
        if field is None and "field" in data:
            field = NumberField.from_json(data["field"])
        kind = ProlongationKind(data["kind"], data.get("q"))
        terms = {}
        for t in data["terms"]:
            c = parse_expression(t["coeff"], field)
            if isinstance(c, RatFunc):
                raise PreconditionFailed("relation coefficients must be polynomials")
            mono = tuple(sorted((v, int(k)) for v, k in t["monomial"].items()))
            terms[mono] = terms.get(mono, Poly([], field)) + c
        return cls.from_terms(terms, kind, data.get("labels"), field)


def _var_key(v):
    label, j = split_var(v)
    return (label != CONSTANT_LABEL, label, j)


def _merge(a, b):
    return list(dict.fromkeys(list(a) + list(b)))


def _series_of(f):
    return getattr(f, "series", f)


# verification

@dataclass
class VerifyResult:
    passed: bool
    truncation: int
    first_failure: int = None

    def __bool__(self):
        return self.passed


def _prolongation_polys(Q, funcs, N):
    out = {}
    for v in Q.poly.vars:
        label, j = split_var(v)
        if label == CONSTANT_LABEL:
            out[v] = Poly([1], Q.field)
            continue
        if label not in funcs:
            raise PreconditionFailed(f"no function supplied for label {label!r}")
        s = Q.kind.prolong_series(_series_of(funcs[label]), j)
        out[v] = s.poly(N)
    return out


def evaluate_truncated(Q, funcs, N):
    """Q(z, prolongations of funcs) as a Poly truncated mod z^N."""
    polys = _prolongation_polys(Q, funcs, N)
    total = Poly([], Q.field)
    cache = {}
    for e, c in Q.poly.terms.items():
        term = c.truncate(N)
        for v, k in zip(Q.poly.vars, e):
            if not k:
                continue
            key = (v, k)
            pw = cache.get(key)
            if pw is None:
                pw = Poly([1], Q.field)
                for _ in range(k):
                    pw = (pw * polys[v]).truncate(N)
                cache[key] = pw
            term = (term * pw).truncate(N)
        total = total + term
    return total


def verify_relation(Q, funcs, N):
    """Check Q(z, f) = 0 mod z^N; reports the first failing order."""
    maxdeg = max((c.degree for c in Q.poly.terms.values()), default=0)
    if N < 1 or N <= maxdeg:
        raise TruncationTooSmall(f"N = {N} does not exceed the coefficient degree {maxdeg}")
    r = evaluate_truncated(Q, funcs, N)
    if r.is_zero():
        return VerifyResult(True, N)
    return VerifyResult(False, N, r.valuation())


# guessing

def _monomials(variables, D, homogeneous):
    out = []
    degrees = [D] if homogeneous else range(0, D + 1)
    for deg in degrees:
        for combo in combinations_with_replacement(range(len(variables)), deg):
            e = [0] * len(variables)
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _normalize(vec, field):
    from .mahler import _normalize_vector
    return _normalize_vector(vec, field)


def guess_algebraic_relations(funcs, kind, s, D, d, N, inhomogeneous=True, labels=None):
    """Basis of relations of multi-depth <= s, total degree <= D, z-degree <= d valid mod z^N.

    ``funcs`` is a dict label -> function (or a list, labelled f0, f1, ...).
    With ``inhomogeneous`` all monomials of degree <= D are used (the
    constant function is adjoined); otherwise only degree exactly D.
    Every returned relation is re-verified mod z^(2N).
    """
    from .mahler import _solve_columns
    if isinstance(funcs, (list, tuple)):
        labels = labels or [f"f{i}" for i in range(len(funcs))]
        funcs = dict(zip(labels, funcs))
    labels = list(funcs)
    variables = [var_name(label, j) for label in labels for j in range(s + 1)]
    monos = _monomials(variables, D, not inhomogeneous)
    ncols = len(monos) * (d + 1)
    if N < ncols + 8:
        raise TruncationTooSmall(f"N = {N} is below the {ncols + 8} equations needed for {ncols} unknowns")
    N2 = 2 * N
    field = next((_series_of(f).field for f in funcs.values() if _series_of(f).field is not None), None)
    zero = field(0) if field else Fraction(0)
    base = {}
    for v in variables:
        label, j = split_var(v)
        base[v] = kind.prolong_series(_series_of(funcs[label]), j).poly(N2)
    cache = {(0,) * len(variables): Poly([1], field)}

    def mono_poly(e):
        if e in cache:
            return cache[e]
        i = next(k for k, x in enumerate(e) if x)
        prev = list(e)
        prev[i] -= 1
        p = (mono_poly(tuple(prev)) * base[variables[i]]).truncate(N2)
        cache[e] = p
        return p

    columns = []
    for e in monos:
        coeffs = list(mono_poly(e).coeffs) + [zero] * N2
        coeffs = coeffs[:N2]
        for k in range(d + 1):
            columns.append([zero] * k + coeffs[: N2 - k])
    basis = _solve_columns(columns, N, N2, field)
    out = []
    for v in basis:
        v = _normalize(v, field)
        terms = {}
        for idx, e in enumerate(monos):
            p = Poly(v[idx * (d + 1): (idx + 1) * (d + 1)], field)
            if not p.is_zero():
                terms[e] = p
        out.append(RelationPoly(MultiPoly(variables, terms), kind, labels, field))
    return out


# evaluation at a point

def _coerce_point(alpha, field):
    if isinstance(alpha, NFElem):
        if field is not None and alpha.field != field:
            raise FieldTooSmall("point and relation live in different number fields")
        return alpha
    return Fraction(alpha) if field is None else field(alpha)


def ev_alpha(Q, alpha):
    """Coefficient-wise evaluation at z = alpha."""
    alpha = _coerce_point(alpha, Q.field)
    terms = {}
    for e, c in Q.poly.terms.items():
        val = c(alpha)
        if val != 0:
            terms[e] = val
    return MultiPoly(Q.poly.vars, terms)


@dataclass
class DegenerationReport:
    point: object
    P: MultiPoly
    witnesses: list
    consistency: object = None
    banality: str = "not checked"
    notes: list = dc_field(default_factory=list)

    def homogeneous_P(self):
        D = self.P.total_degree()
        one = var_name(CONSTANT_LABEL, 0)
        variables = list(self.P.vars) + ([one] if one not in self.P.vars else [])
        p = self.P.rename(variables)
        idx = variables.index(one)
        out = {}
        for e, c in p.terms.items():
            e = list(e)
            e[idx] += D - sum(e)
            out[tuple(e)] = c
        return MultiPoly(variables, out)

    def solve_for(self, label):
        """f(alpha) when P is linear in X_{label,0} and involves no other function."""
        v = var_name(label, 0)
        used = self.P.used_vars()
        if used != [v] or self.P.degree_in(v) != 1:
            raise PreconditionFailed(f"P does not determine {label} alone")
        i = self.P.vars.index(v)
        a = sum((c for e, c in self.P.terms.items() if e[i] == 1), 0 * next(iter(self.P.terms.values())))
        b = sum((c for e, c in self.P.terms.items() if e[i] == 0), 0 * a)
        inv = a.inverse() if isinstance(a, NFElem) else 1 / a
        return -b * inv

    def to_json(self):
        d = {"point": _scalar_json(self.point), "P": str(self.P), "P_homogeneous": str(self.homogeneous_P()),
             "witnesses": [{"monomial": m, "coeff": str(c)} for m, c in self.witnesses],
             "banality": self.banality, "notes": self.notes}
        if self.consistency is not None:
            d["consistency"] = {"ball": self.consistency.to_json(), "decimal": self.consistency.decimal(25),
                                "contains_zero": self.consistency.contains_zero()}
        return d


@dataclass
class NotDegenerate:
    point: object
    reason: str
    witness: tuple = None

    def to_json(self):
        d = {"point": _scalar_json(self.point), "degenerate": False, "reason": self.reason}
        if self.witness:
            d["witness"] = {"monomial": self.witness[0], "value": str(self.witness[1])}
        return d


def _scalar_json(x):
    return str(x)


def _ball_of(x, width):
    if isinstance(x, NFElem):
        return x.embed(width)
    return ComplexBall(Fraction(x))


def eval_multipoly_ball(P, values, width=Fraction(1, 2 ** 80)):
    """Ball of P at ``values`` (var name -> ComplexBall)."""
    total = ComplexBall(0)
    for e, c in P.terms.items():
        term = _ball_of(c, width)
        for v, k in zip(P.vars, e):
            if k:
                term = term * values[v] ** k
        total = total + term
    return total


def detect_degeneration(Q, funcs, alpha, width=Fraction(1, 10 ** 20), banality_bounds=None):
    """DegenerationReport if every coefficient of a monomial with some j >= 1 vanishes at alpha."""
    if Q.kind.kind == "sigma":
        from .mahler import check_in_unit_disk
        check_in_unit_disk(alpha)
    ev = ev_alpha(Q, alpha)
    witnesses = []
    idx_deep = [i for i, v in enumerate(Q.poly.vars) if split_var(v)[1] >= 1]
    for e, c in Q.poly.terms.items():
        if any(e[i] for i in idx_deep):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(Q.poly.vars, e) if k)
            if e in ev.terms:
                return NotDegenerate(alpha, "a prolongation coefficient does not vanish", (mono, ev.terms[e]))
            witnesses.append((mono, c))
    shallow = [v for v in Q.poly.vars if split_var(v)[1] == 0]
    P = ev.rename(list(Q.poly.vars))
    idx = [Q.poly.vars.index(v) for v in shallow]
    P = MultiPoly(shallow, {tuple(e[i] for i in idx): c for e, c in P.terms.items()})
    if P.is_zero():
        return NotDegenerate(alpha, "the specialized polynomial is zero")
    report = DegenerationReport(alpha, P, witnesses)
    values = {}
    try:
        from .evalnum import eval_ball
        for v in shallow:
            label, _ = split_var(v)
            if label == CONSTANT_LABEL:
                values[v] = ComplexBall(1)
            else:
                values[v] = eval_ball(funcs[label], alpha, width / 4)
        report.consistency = eval_multipoly_ball(P, values, width / 4)
        if not report.consistency.contains_zero():
            report.notes.append("numeric check failed: P at the function values excludes 0")
    except (NoBoundAvailable, KeyError) as exc:
        report.notes.append(f"numeric check skipped: {exc}")
    if banality_bounds is not None:
        report.banality = banality_verdict(P, funcs, alpha, Q.kind, *banality_bounds)
    return report


def banality_verdict(P, funcs, alpha, kind, d=4, N=256):
    """'banal within bounds' when P is the specialization of a depth-0 relation of z-degree <= d."""
    labels = [split_var(v)[0] for v in P.used_vars() if split_var(v)[0] != CONSTANT_LABEL]
    if not labels:
        return "non-banal within bounds"
    D = P.total_degree()
    sub = {label: funcs[label] for label in labels}
    rels = guess_algebraic_relations(sub, kind, 0, D, d, N, inhomogeneous=True)
    if not rels:
        return f"non-banal within bounds (d={d}, N={N})"
    field = alpha.field if isinstance(alpha, NFElem) else None
    one = field(1) if field else Fraction(1)
    zero = field(0) if field else Fraction(0)
    monos = set(P.terms)
    evs = []
    for r in rels:
        e = ev_alpha(r, alpha).rename(P.vars) if set(r.poly.vars) <= set(P.vars) else None
        if e is not None and not e.is_zero():
            evs.append(e)
            monos |= set(e.terms)
    monos = sorted(monos)
    ech = Echelon(len(monos), one)
    for e in evs:
        ech.add([e.terms.get(m, zero) for m in monos])
    before = ech.rank
    ech.add([P.terms.get(m, zero) for m in monos])
    return "banal within bounds" if ech.rank == before else f"non-banal within bounds (d={d}, N={N})"


def _deep_gcd(Q):
    idx_deep = [i for i, v in enumerate(Q.poly.vars) if split_var(v)[1] >= 1]
    g = None
    for e, c in Q.poly.terms.items():
        if any(e[i] for i in idx_deep):
            g = c if g is None else g.gcd(c)
    return g


@dataclass
class ScanHit:
    factor: Poly
    box: ComplexBall

    def to_json(self):
        return {"factor": str(self.factor), "box": self.box.to_json(), "approx": self.box.decimal(15)}


def scan_degeneration_points(Q, R):
    """Irreducible factors of the prolongation-coefficient gcd with their roots in 0 < |z| < R."""
    R = Fraction(R)
    g = _deep_gcd(Q)
    if g is None or g.degree <= 0:
        return []
    hits = []
    for fac, _ in g.factor():
        if fac.degree == 1 and fac[0] == 0:
            continue
        for root in isolate_roots(list(fac.coeffs)):
            side = modulus_vs_radius(root, R)
            if side is None:
                raise BoundaryUndecided(f"a root of {fac} has modulus too close to {R}")
            if side < 0:
                hits.append(ScanHit(fac, root.box))
    return hits


# transport and conjugation

def transport_clear_poles(Q0, D):
    """Q1(z, X) = Q0(z, D(z^(q^j)) X_{i,j}) for every function variable."""
    if Q0.kind.kind != "sigma":
        raise PreconditionFailed("transport is defined for sigma relations")
    q = Q0.kind.q
    shifted = {}
    terms = {}
    for e, c in Q0.poly.terms.items():
        acc = c
        for v, k in zip(Q0.poly.vars, e):
            if not k or split_var(v)[0] == CONSTANT_LABEL:
                continue
            j = split_var(v)[1]
            if j not in shifted:
                shifted[j] = D.compose_power(q ** j)
            acc = acc * shifted[j] ** k
        terms[e] = acc
    return RelationPoly(MultiPoly(Q0.poly.vars, terms), Q0.kind, Q0.labels, Q0.field or D.field)


def conjugate_object(x, tau):
    """Apply tau coefficient-wise to a scalar, Poly, RatFunc, series, operator or relation."""
    from .ore import OreOperator
    from .series import PowerSeries

    def scalar(c):
        if isinstance(c, NFElem):
            if c.field != tau.field:
                raise AutomorphismFieldMismatch("object and automorphism live in different fields")
            return tau(c)
        return c

    def poly(p):
        if p.field is not None and p.field != tau.field:
            raise AutomorphismFieldMismatch("object and automorphism live in different fields")
        return Poly([scalar(c) for c in p.coeffs], p.field)

    if isinstance(x, (int, Fraction, NFElem)):
        return scalar(x)
    if isinstance(x, Poly):
        return poly(x)
    if isinstance(x, RatFunc):
        return RatFunc(poly(x.num), poly(x.den))
    if isinstance(x, PowerSeries):
        if x.field is not None and x.field != tau.field:
            raise AutomorphismFieldMismatch("series and automorphism live in different fields")
        return x.map(scalar)
    if isinstance(x, RelationPoly):
        return x.map_coeffs(poly)
    if isinstance(x, OreOperator):
        return x._new([RatFunc(poly(c.num), poly(c.den)) for c in x.coeffs])
    raise TypeError(f"cannot conjugate {type(x).__name__}")


# Groebner bases over K(z)

GROEBNER_MAX_VARS = 6
GROEBNER_MAX_GENS = 12


def _order_key(order, nvars):
    """Sort key on exponent tuples: 'lex' or ('block', k) eliminating the first k variables."""
    if order == "lex":
        return lambda e: e
    if isinstance(order, tuple) and order[0] == "block":
        k = order[1]
        return lambda e: (sum(e[:k]), e[:k], sum(e[k:]), e[k:])
    if order == "grevlex":
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    raise ValueError(f"unknown monomial order {order!r}")


def _as_ratfunc_poly(p, field=None):
    return p.map_coeffs(lambda c: c if isinstance(c, RatFunc) else RatFunc.of(c, field))


class _GB:
    def __init__(self, variables, key):
        self.vars = tuple(variables)
        self.key = key

    def lead(self, p):
        e = max(p.terms, key=self.key)
        return e, p.terms[e]

    def monic(self, p):
        _, c = self.lead(p)
        inv = c.inverse()
        return p.map_coeffs(lambda x: x * inv)

    def reduce(self, p, basis):
        """Full reduction of p by basis (list of monic polys)."""
        rem = MultiPoly(self.vars)
        p = MultiPoly(self.vars, dict(p.terms))
        leads = [(self.lead(g)[0], g) for g in basis]
        while p.terms:
            e, c = self.lead(p)
            for le, g in leads:
                if all(x >= y for x, y in zip(e, le)):
                    shift = tuple(x - y for x, y in zip(e, le))
                    mono = MultiPoly(self.vars, {shift: c})
                    p = p - mono * g
                    break
            else:
                rem = rem + MultiPoly(self.vars, {e: c})
                del p.terms[e]
        return rem

    def spoly(self, f, g):
        ef, cf = self.lead(f)
        eg, cg = self.lead(g)
        lcm = tuple(max(a, b) for a, b in zip(ef, eg))
        mf = MultiPoly(self.vars, {tuple(a - b for a, b in zip(lcm, ef)): cf.inverse()})
        mg = MultiPoly(self.vars, {tuple(a - b for a, b in zip(lcm, eg)): cg.inverse()})
        return mf * f - mg * g


def buchberger(gens, variables, order="lex"):
    """Reduced Groebner basis (monic over K(z)) of the ideal generated by ``gens``.

    ``gens`` are MultiPolys in ``variables`` whose coefficients are Poly or
    RatFunc in z. Variables are ordered as listed (first is largest).
    """
    if len(variables) > GROEBNER_MAX_VARS or len(gens) > GROEBNER_MAX_GENS:
        raise SizeGuardExceeded(f"at most {GROEBNER_MAX_VARS} variables and {GROEBNER_MAX_GENS} generators")
    key = _order_key(order, len(variables))
    gb = _GB(variables, key)
    polys = [_as_ratfunc_poly(g.rename(variables)) for g in gens]
    polys = [gb.monic(p) for p in polys if not p.is_zero()]
    basis = []
    for p in polys:
        r = gb.reduce(p, basis)
        if not r.is_zero():
            basis.append(gb.monic(r))
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    steps = 0
    while pairs:
        i, j = pairs.pop(0)
        ei, ej = gb.lead(basis[i])[0], gb.lead(basis[j])[0]
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue  # coprime leading monomials
        r = gb.reduce(gb.spoly(basis[i], basis[j]), basis)
        steps += 1
        if steps > 2000:
            raise SizeGuardExceeded("Buchberger iteration limit reached")
        if not r.is_zero():
            basis.append(gb.monic(r))
            n = len(basis) - 1
            pairs.extend((n, k) for k in range(n))
    # minimize and interreduce
    basis.sort(key=lambda p: key(gb.lead(p)[0]))
    minimal = []
    for p in basis:
        e = gb.lead(p)[0]
        if not any(all(x >= y for x, y in zip(e, gb.lead(g)[0])) for g in minimal):
            minimal = [g for g in minimal if not all(x >= y for x, y in zip(gb.lead(g)[0], e))]
            minimal.append(p)
    reduced = []
    for i, p in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lead_e, lead_c = gb.lead(p)
        tail = MultiPoly(gb.vars, {e: c for e, c in p.terms.items() if e != lead_e})
        reduced.append(MultiPoly(gb.vars, {lead_e: lead_c}) + gb.reduce(tail, others))
    reduced.sort(key=lambda p: key(gb.lead(p)[0]))
    return reduced


def groebner_reduce(p, basis, variables, order="lex"):
    gb = _GB(variables, _order_key(order, len(variables)))
    return gb.reduce(_as_ratfunc_poly(p.rename(variables)), basis)


def s_polynomial(f, g, variables, order="lex"):
    gb = _GB(variables, _order_key(order, len(variables)))
    return gb.spoly(f, g)


def leading_term(p, variables, order="lex"):
    return _GB(variables, _order_key(order, len(variables))).lead(p)


def clear_denominators(p):
    """Polynomial coefficients in z with no common factor, leading coefficient monic in z."""
    from math import lcm
    den = None
    for c in p.terms.values():
        den = c.den if den is None else den * c.den // den.gcd(c.den)
    out = p.map_coeffs(lambda c: (c * RatFunc.of(den)).num)
    g = None
    for c in out.terms.values():
        g = c if g is None else g.gcd(c)
    out = out.map_coeffs(lambda c: c // g)
    lead = out.terms[max(out.terms)]
    lc = lead.lc()
    inv = lc.inverse() if isinstance(lc, NFElem) else 1 / Fraction(lc)
    return out.map_coeffs(lambda c: c * inv)


@dataclass
class EliminationResult:
    bad_set: Poly
    basis: list
    cleared: list
    eliminant: list
    variables: tuple


def elimination_bad_set(gens, variables, keep):
    """Groebner basis eliminating all variables except the last ``keep`` ones.

    ``variables`` lists the eliminated variables first. The bad-set
    polynomial is the squarefree product of the leading coefficients (in z)
    of the cleared basis; for alpha off its roots evaluation commutes with
    elimination.
    """
    nelim = len(variables) - keep
    basis = buchberger(gens, variables, ("block", nelim))
    key = _order_key(("block", nelim), len(variables))
    cleared = [clear_denominators(p) for p in basis]
    field = None
    prod = None
    for p in cleared:
        e = max(p.terms, key=key)
        lc = p.terms[e]
        field = field or lc.field
        prod = lc if prod is None else prod * lc
    if prod is None or prod.degree <= 0:
        bad = Poly([1], field)
    else:
        bad = Poly([1], field)
        for fac, _ in prod.factor():
            bad = bad * fac
    elim = [p for p in cleared if all(sum(e[:nelim]) == 0 for e in p.terms)]
    return EliminationResult(bad.monic(), basis, cleared, elim, tuple(variables))


# ideal presentations

@dataclass
class IdealPresentation:
    generators: list
    linear_forms: list
    kind: ProlongationKind
    bounds: dict = dc_field(default_factory=dict)


def prolong_ideal(P, depth, prolong_generators=False):
    """Generators plus Theta^k of the linear forms (and optionally of the generators) up to ``depth``."""
    def depth_of(r):
        return max(r.depths().values(), default=0)

    out = list(P.generators)
    seeds = list(P.linear_forms)
    if prolong_generators:
        seeds += [g.theta() for g in P.generators]
    for cur in seeds:
        while depth_of(cur) <= depth:
            out.append(cur)
            cur = cur.theta()
    return out


def _linear_coeff(Q, v):
    """Coefficient of X_v in Q, and Q with that term removed; Q must be linear in X_v."""
    coeff = None
    rest = {}
    for mono, c in Q.monomials():
        k = mono.get(v, 0)
        if k > 1:
            raise PreconditionFailed(f"relation is not linear in {v}")
        key = tuple(sorted(mono.items()))
        if k == 1:
            if len(mono) > 1:
                raise PreconditionFailed(f"{v} appears in a mixed monomial")
            coeff = c
        else:
            rest[key] = c
    return coeff, rest


def compose_relation(Q, label=None):
    """Combine Q with Theta(Q) to eliminate X_{label,1}, giving a relation of depth 2.

    Q must be linear in X_{label,1}. The result is divided by its content.
    """
    label = label or Q.labels[0]
    v = var_name(label, 1)
    TQ = Q.theta()
    a, _ = _linear_coeff(Q, v)
    b, _ = _linear_coeff(TQ, v)
    if a is None or b is None:
        raise PreconditionFailed(f"{v} does not occur in the relation")
    out = Q * b - TQ * a
    poly = out.poly.map_coeffs(lambda c: c)
    out = RelationPoly(MultiPoly(poly.vars, {e: c for e, c in poly.terms.items() if not c.is_zero()}),
                       Q.kind, Q.labels, Q.field)
    return out.primitive()


# descent

def descend_relation(ws, funcs, alpha, zero_set, i0, N=256):
    """Relation over Q from a relation sum w_i h_i = 0 with coefficients in a number field.

    Coefficients are expanded on the power basis of the field; a component
    keeping w_{i0}(alpha) != 0 is returned (indices are 0-based).
    """
    field = next((w.field for w in ws if w.field is not None), None)
    alpha = Fraction(alpha) if not isinstance(alpha, NFElem) else alpha
    if isinstance(alpha, NFElem):
        if not alpha.is_rational():
            raise PreconditionFailed("alpha must lie in the base field Q")
        alpha = alpha.rational()
    series = [_series_of(h) for h in funcs]
    total = Poly([], field)
    for w, s in zip(ws, series):
        total = total + (w * s.poly(N)).truncate(N)
    if not total.is_zero():
        raise PreconditionFailed("the input relation does not hold")
    for i in zero_set:
        if ws[i](alpha) != 0:
            raise PreconditionFailed(f"w_{i} does not vanish at alpha")
    if ws[i0](alpha) == 0:
        raise PreconditionFailed(f"w_{i0} vanishes at alpha")
    if field is None:
        return list(ws)
    deg = field.degree
    comps = []
    for t in range(deg):
        comp = []
        for w in ws:
            coeffs = [(c.coords[t] if isinstance(c, NFElem) else (Fraction(c) if t == 0 else Fraction(0)))
                      for c in w.coeffs]
            comp.append(Poly(coeffs))
        comps.append(comp)
    for comp in comps:
        if comp[i0](alpha) != 0:
            check = Poly([])
            for w, s in zip(comp, series):
                check = check + (w * s.poly(N)).truncate(N)
            if not check.is_zero():
                raise NoComponentWitness("component relation fails; inputs are inconsistent")
            return comp
    raise NoComponentWitness("no component keeps w_i0(alpha) != 0")


# constructive decomposition

@dataclass
class Decomposition:
    R1: RatFunc
    R2: RatFunc
    g: object
    steps: list
    note: str = "no algebraic value detected within bounds"

    def __iter__(self):
        return iter((self.R1, self.R2, self.g))

    def check(self, f, N):
        """f = R1 + R2 g mod z^N, compared after multiplying by a common denominator."""
        s = _series_of(f)
        D = self.R1.den * self.R2.den // self.R1.den.gcd(self.R2.den)
        lhs = (s.poly(N) * D).truncate(N)
        rhs = (self.R1 * RatFunc.of(D)).num.truncate(N)
        if self.g is not None:
            rhs = rhs + ((self.R2 * RatFunc.of(D)).num * _series_of(self.g).poly(N)).truncate(N)
        return lhs == rhs


def _orbit(alpha, value):
    """Conjugate pairs (tau(alpha), tau(value)) over the full Galois orbit of alpha."""
    if not isinstance(alpha, NFElem) or alpha.is_rational():
        a = alpha.rational() if isinstance(alpha, NFElem) else Fraction(alpha)
        v = value.rational() if isinstance(value, NFElem) and value.is_rational() else value
        return [(a, v)]
    pairs = []
    for tau in automorphisms(alpha.field):
        a = tau(alpha)
        if all(a != p for p, _ in pairs):
            pairs.append((a, tau(value) if isinstance(value, NFElem) else value))
    mp = alpha.minpoly_rational()
    if len(pairs) != len(mp) - 1:
        raise PreconditionFailed("the field of alpha does not contain all its conjugates")
    return pairs


def _rational_poly(p):
    """Poly over a number field with rational coefficients -> Poly over Q."""
    return Poly([c.rational() if isinstance(c, NFElem) else c for c in p.coeffs])


def decompose_function(f, R, values, N=256, cap=8):
    """f = R1 + R2 g with g free of the supplied algebraic values.

    ``values`` are (alpha, f(alpha)) pairs with 0 < |alpha| < R. Each Galois
    orbit is removed with h = sum_tau (f - tau(v))/(z - tau(alpha)), giving
    f = delta h + gamma with delta = P/P' and gamma = delta * sum tau(v)/(z - tau(alpha)),
    where P is the minimal polynomial of alpha.
    """
    from .evalnum import check_algebraic_value
    from .mahler import MahlerFunction, DegreeBounds, guess_linear_sigma_relation, point_ball
    from .series import PowerSeries
    R = Fraction(R)
    for alpha, v in values:
        if point_ball(alpha).abs_upper(64) >= R:
            raise PreconditionFailed("supplied point outside the disk of radius R")
        try:
            if check_algebraic_value(f, alpha, v, Fraction(1, 10 ** 30)) == "refuted":
                raise ValueNotAttained(f"f({alpha}) differs from {v}")
        except NoBoundAvailable:
            pass
    one = RatFunc.of(Poly([1]))
    rel0 = guess_linear_sigma_relation([f], DegreeBounds(0, 8, 256), inhomogeneous=True)
    if rel0:
        r = rel0[0]
        R1 = RatFunc(-r.inhom, r.coeffs[0][0])
        return Decomposition(R1, RatFunc.of(Poly([])), None, ["rational function"])
    R1, R2 = RatFunc.of(Poly([])), one
    cur = f
    pending = list(values)
    steps = []
    done = []
    while pending:
        if len(steps) >= cap:
            raise IterationCapExceeded(f"more than {cap} orbit steps")
        alpha, v = pending.pop(0)
        orbit = _orbit(alpha, v)
        P = Poly([1])
        for a, _ in orbit:
            P = P * (Poly.z(1, a.field if isinstance(a, NFElem) else None) - a)
        P = _rational_poly(P)
        dP = P.derivative()
        field = alpha.field if isinstance(alpha, NFElem) else None
        Nnum = Poly([], field)
        for a, va in orbit:
            rest = Poly([1], field)
            for b, _ in orbit:
                if b != a:
                    rest = rest * (Poly.z(1, field) - b)
            Nnum = Nnum + rest * va
        Nnum = _rational_poly(Nnum)
        delta = RatFunc(P, dP)
        gamma = RatFunc(Nnum, dP)
        s = _series_of(cur)
        h_series = (s * dP - PowerSeries.from_poly(Nnum)) * PowerSeries.from_ratfunc(RatFunc(Poly([1]), P))
        g = _transform_mahler(cur, gamma, delta, h_series)
        # f = R1 + R2 * (gamma + delta * g)
        R1 = R1 + R2 * gamma
        R2 = R2 * delta
        steps.append({"orbit": [str(a) for a, _ in orbit], "delta": str(delta), "gamma": str(gamma)})
        done.extend(a for a, _ in orbit)
        # carry the remaining values over to g
        carried = []
        for beta, w in pending:
            if any(beta == a for a in done):
                continue
            d_b = delta(beta)
            if d_b == 0:
                raise PreconditionFailed("a remaining point is a root of the orbit polynomial")
            carried.append((beta, (w - gamma(beta)) * (d_b.inverse() if isinstance(d_b, NFElem) else 1 / d_b)))
        pending = carried
        cur = g
    return Decomposition(R1, R2, cur, steps)


def _transform_mahler(f, gamma, delta, g_series):
    """MahlerFunction for g = (f - gamma)/delta with its transformed equation."""
    from .mahler import MahlerFunction
    from .ore import SigmaOp
    L = getattr(f, "annihilator", None)
    if L is None:
        return MahlerFunction(f.q, g_series, name="g")
    q = f.q
    inh = RatFunc.of(f.inhom) if f.inhom is not None else RatFunc.of(Poly([], L.field))
    coeffs = []
    for i, a in enumerate(L.coeffs):
        inh = inh + a * gamma.compose_power(q ** i)
        coeffs.append(a * delta.compose_power(q ** i))
    # clear denominators
    den = inh.den
    for c in coeffs:
        den = den * c.den // den.gcd(c.den)
    scale = RatFunc.of(den)
    polys = [(c * scale).num for c in coeffs]
    inh_poly = (inh * scale).num
    op = SigmaOp(q, polys, L.field)
    return MahlerFunction(q, g_series, op, inh_poly, name="g")
