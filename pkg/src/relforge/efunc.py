"""E-functions with exact coefficients, annihilators and factorial tail bounds.

Each corpus entry carries a bound |c_n| <= C K^n / n!, proved from the
closed form of its coefficients (see the ``bound_note`` of each entry).
"""

from fractions import Fraction
from math import comb, factorial

from .errors import NoRelationWithinBounds, TruncationTooSmall, UnknownCorpusEntry
from .evalnum import CoefficientBound
from .ore import DeltaOp, companion_system, direct_sum
from .polyring import Poly
from .series import PowerSeries


class EFunction:
    """Series sum c_n z^n with an annihilating DeltaOp and a coefficient bound."""

    def __init__(self, name, series, annihilator, bound, bound_note="", notes=""):
        self.name = name
        self.series = series
        self.annihilator = annihilator
        self.bound = bound
        self.bound_note = bound_note
        self.notes = notes
        self.field = series.field

    def __repr__(self):
        return f"EFunction({self.name})"

    def tail_bound(self, N, r):
        return self.bound.tail(N, Fraction(r))

    def check_annihilator(self, N=200):
        from .ore import apply_operator
        return apply_operator(self.annihilator, self.series, N).is_zero_mod(N)


def _fact_series(rule, name):
    return PowerSeries.from_function(rule, name=name)


def _exp_coeff(n):
    return Fraction(1, factorial(n))


def _j0_coeff(n):
    if n % 2:
        return Fraction(0)
    m = n // 2
    return Fraction((-1) ** m, factorial(m) ** 2 * 4 ** m)


def _bessel_f_coeff(n):
    """Coefficients of J0^2 - (z - 1) J0', written out term by term."""
    if n % 2 == 0:
        m = n // 2
        first = Fraction((-1) ** m * factorial(2 * m), factorial(m) ** 4 * 2 ** (2 * m))
        second = Fraction(0) if m == 0 else Fraction((-1) ** m, factorial(m) * factorial(m - 1) * 2 ** (2 * m - 1))
        return first - second
    m = (n - 1) // 2
    return -Fraction((-1) ** m, factorial(m + 1) * factorial(m) * 2 ** (2 * m + 1))


def _shifted_exp_coeff(n):
    return Fraction(n - 1, factorial(n))


def exp_function():
    return EFunction("exp", _fact_series(_exp_coeff, "exp"), DeltaOp([-1, 1]),
                     CoefficientBound(Fraction(1), Fraction(1), 0, "closed form", "factorial"),
                     "c_n = 1/n!")


def j0_function():
    z = Poly.z(1)
    return EFunction("J0", _fact_series(_j0_coeff, "J0"), DeltaOp([z, 1, z]),
                     CoefficientBound(Fraction(1), Fraction(1), 0, "closed form", "factorial"),
                     "n! |c_n| = binom(2m, m)/4^m <= 1 for n = 2m")


# order 5 is forced: J0^2 needs order 3 and J0' order 2; found by bounded
# guessing (degree <= 11) and checked against the series mod z^400
_BESSEL_F_OPERATOR = [
    "36*z^10-72*z^9+276*z^8-144*z^7-112*z^6+272*z^5-152*z^4-232*z^3+112*z^2-12",
    "36*z^11-72*z^10+69*z^9+126*z^8-262*z^7+164*z^6+55*z^5-30*z^4-125*z^3+326*z^2-15*z-24",
    "27*z^10-126*z^9+426*z^8-288*z^7+89*z^6+466*z^5-347*z^4+162*z^3+43*z^2+24*z-12",
    "45*z^11-90*z^10+102*z^9+6*z^8-59*z^7+91*z^6+11*z^5+89*z^4-93*z^3+204*z^2-24*z",
    "18*z^10-54*z^9+132*z^8-105*z^7+102*z^6+77*z^5-72*z^4+108*z^3-10*z^2",
    "9*z^11-18*z^10+33*z^9-21*z^8+17*z^7+11*z^6-9*z^5+12*z^4-z^3",
]


def bessel_f_function():
    return EFunction("bessel_f", _fact_series(_bessel_f_coeff, "bessel_f"), DeltaOp(_BESSEL_F_OPERATOR),
                     CoefficientBound(Fraction(2), Fraction(2), 0, "closed form", "factorial"),
                     "n! |c_n| <= binom(2m,m)^2/4^m + m binom(2m,m)/2^(2m-1) <= 2 * 2^n; odd n: <= 1",
                     "equals J0^2 - (z-1) J0'")


def shifted_exp_function():
    z = Poly.z(1)
    return EFunction("zm1exp", _fact_series(_shifted_exp_coeff, "zm1exp"), DeltaOp([-z, z - 1]),
                     CoefficientBound(Fraction(1), Fraction(2), 0, "closed form", "factorial"),
                     "n! |c_n| = |n - 1| <= 2^n", "(z-1) e^z")


def poly_exp_function(p, name=None):
    """P(z) e^z for a rational polynomial P."""
    p = p if isinstance(p, Poly) else Poly(p)
    coeffs = list(p.coeffs)

    def rule(n):
        return sum((c * Fraction(1, factorial(n - k)) for k, c in enumerate(coeffs) if k <= n), Fraction(0))

    C = sum((abs(c) * factorial(k) for k, c in enumerate(coeffs)), Fraction(0))
    L = DeltaOp([-(p + p.derivative()), p])
    return EFunction(name or f"({p})*exp", _fact_series(rule, name), L,
                     CoefficientBound(C, Fraction(2), 0, "closed form", "factorial"),
                     "n!/(n-k)! = k! binom(n,k) <= k! 2^n")


_CORPUS = {
    "exp": exp_function,
    "J0": j0_function,
    "bessel_f": bessel_f_function,
    "zm1exp": shifted_exp_function,
}


def corpus_names():
    return sorted(_CORPUS)


def get_efunction(name):
    try:
        return _CORPUS[name]()
    except KeyError:
        raise UnknownCorpusEntry(f"unknown E-function {name!r}") from None


def efunction_series(name, N=None):
    """PowerSeries of a corpus E-function (or of an EFunction), forcing N terms when given."""
    f = name if isinstance(name, EFunction) else get_efunction(name)
    if N is not None:
        f.series.coeffs(N)
    return f.series


def guess_delta_operator(series, m, d, N):
    """Least-order operator sum p_j(z) d^j/dz^j with deg p_j <= d killing the series mod z^N."""
    from .mahler import _solve_columns
    for order in range(1, m + 1):
        ncols = (order + 1) * (d + 1)
        if N < ncols + 8:
            raise TruncationTooSmall("truncation too small for the requested bounds")
        N2 = 2 * N
        columns = []
        for j in range(order + 1):
            dj = series.derivative(j).coeffs(N2)
            for k in range(d + 1):
                columns.append([Fraction(0)] * k + dj[: N2 - k])
        basis = _solve_columns(columns, N, N2)
        if basis:
            v = basis[0]
            coeffs = [Poly(v[j * (d + 1): (j + 1) * (d + 1)]) for j in range(order + 1)]
            return DeltaOp(coeffs).primitive()
    raise NoRelationWithinBounds(f"no operator of order <= {m} with degree <= {d}")


def build_prolongation_system(funcs):
    """Direct sum of companion systems; labels 'name.j'. Returns (system, laurent_flag)."""
    systems = []
    for f in funcs:
        A = companion_system(f.annihilator)
        A.labels = [f"{f.name}.{j}" for j in range(A.dim)]
        systems.append(A)
    S = systems[0] if len(systems) == 1 else direct_sum(systems)
    return S, S.is_laurent()
