"""Factorization over Q and Q(t) delegated to sympy.

Inputs and outputs are ascending coefficient lists of Fractions or NFElems;
sympy objects never leave this module.
"""

import threading
from fractions import Fraction

import sympy as sp

_y = sp.Symbol("y")
_DOMAINS = {}
_LOCK = threading.Lock()


def _frac(c):
    return Fraction(int(c.numerator), int(c.denominator))


def _domain(field):
    key = field.minpoly
    with _LOCK:
        dom = _DOMAINS.get(key)
    if dom is not None:
        return dom
    x = sp.Symbol("x")
    mp = sum(sp.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(field.minpoly))
    dom = sp.QQ.algebraic_field(sp.CRootOf(sp.Poly(mp, x), 0))
    got = [_frac(c) for c in dom.mod.to_list()]
    if list(reversed(got)) != list(field.minpoly):
        raise RuntimeError("sympy chose a different defining polynomial")
    with _LOCK:
        _DOMAINS[key] = dom
    return dom


def _to_anp(dom, x):
    return dom([sp.QQ(c.numerator, c.denominator) for c in reversed(x.coords)])


def _from_anp(field, a):
    lst = a.to_list() if hasattr(a, "to_list") else list(a)
    coords = [_frac(c) for c in reversed(lst)]
    return field.element(coords)


def factor_rational(coeffs):
    """Irreducible factors over Q of an ascending rational list: [(monic factor, mult)]."""
    p = sp.Poly([sp.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in reversed(coeffs)],
                _y, domain=sp.QQ)
    _, facs = p.factor_list()
    out = []
    for f, m in facs:
        lst = [_frac(c) for c in reversed(f.all_coeffs())]
        lc = lst[-1]
        out.append(([c / lc for c in lst], m))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return out


def factor_over_field(coeffs, field):
    """Irreducible monic factors over ``field`` of a polynomial with NFElem/rational coefficients."""
    if field is None or field.degree == 1:
        rat = [Fraction(c.coords[0]) if hasattr(c, "coords") else Fraction(c) for c in coeffs]
        facs = factor_rational(rat)
        if field is None:
            return facs
        return [([field(c) for c in f], m) for f, m in facs]
    dom = _domain(field)
    elems = [c if hasattr(c, "coords") else field(c) for c in coeffs]
    p = sp.Poly([_to_anp(dom, c) for c in reversed(elems)], _y, domain=dom)
    _, facs = p.factor_list()
    out = []
    for f, m in facs:
        rep = f.rep.to_list()
        lst = [_from_anp(field, a) for a in reversed(rep)]
        lc = lst[-1]
        out.append(([c / lc for c in lst], m))
    out.sort(key=lambda fm: (len(fm[0]), [c.coords for c in fm[0]]))
    return out


def roots_in_field(coeffs, field):
    """Roots lying in ``field`` of a polynomial with coefficients in ``field``."""
    roots = []
    for f, _ in factor_over_field(coeffs, field):
        if len(f) == 2:
            roots.append(-f[0] if hasattr(f[0], "coords") else field(-f[0]))
    return roots


def element_minpoly(x):
    """Minimal polynomial over Q of a number-field element, ascending and monic."""
    field = x.field
    d = field.degree
    # characteristic polynomial of multiplication by x, then its irreducible part vanishing at x
    cols = []
    basis = [field.element([1 if i == j else 0 for i in range(d)]) for j in range(d)]
    for b in basis:
        cols.append((x * b).coords)
    m = sp.Matrix(d, d, lambda i, j: sp.Rational(cols[j][i].numerator, cols[j][i].denominator))
    charpoly = m.charpoly(_y)
    for f, _ in sp.factor_list(charpoly.as_expr(), _y)[1]:
        fp = sp.Poly(f, _y)
        lst = [_frac(sp.QQ.convert(c)) for c in reversed(fp.all_coeffs())]
        lc = lst[-1]
        lst = [c / lc for c in lst]
        acc = field(0)
        for c in reversed(lst):
            acc = acc * x + c
        if acc.is_zero():
            return lst
    raise RuntimeError("no factor of the characteristic polynomial vanishes")


def norm_poly(coeffs, field):
    """Norm over Q of a polynomial in z with number-field coefficients.

    Its roots contain the roots of every conjugate of the input polynomial.
    """
    t, z = sp.symbols("t z")
    mp = sum(sp.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(field.minpoly))
    expr = 0
    for k, c in enumerate(coeffs):
        cc = c.coords if hasattr(c, "coords") else (Fraction(c),)
        expr += sum(sp.Rational(x.numerator, x.denominator) * t ** i for i, x in enumerate(cc)) * z ** k
    res = sp.Poly(sp.resultant(mp, expr, t), z)
    return [_frac(sp.QQ.convert(c)) for c in reversed(res.all_coeffs())]
