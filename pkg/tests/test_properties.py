"""Randomized algebraic laws, 200 derandomized cases per suite."""
from fractions import Fraction

import mpmath
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from relforge.numberfield import make_number_field
from relforge.ore import DeltaOp, SigmaOp, apply_operator, companion_system, right_divide
from relforge.polyring import MultiPoly, Poly, RatFunc
from relforge.relations import (
    SIGMA,
    RelationPoly,
    buchberger,
    descend_relation,
    ev_alpha,
    groebner_reduce,
    s_polynomial,
)
from relforge.series import PowerSeries

PROPS = settings(max_examples=200, derandomize=True, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow])

z = Poly.z()
SQRT2 = make_number_field([-2, 0, 1])
GOLDEN = make_number_field([-1, -1, 1])

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)
ints = st.integers(-4, 4)


def polys(max_deg=2, elems=small):
    return st.lists(elems, min_size=0, max_size=max_deg + 1).map(Poly)


def nonzero_polys(max_deg=2):
    return polys(max_deg).filter(lambda p: not p.is_zero())


def operators(kind, max_order=2):
    coeffs = st.lists(polys(2), min_size=1, max_size=max_order + 1)
    if kind == "sigma":
        return coeffs.map(lambda c: SigmaOp(2, c))
    return coeffs.map(DeltaOp)


def series_polys():
    return st.lists(ints, min_size=1, max_size=8).map(Poly)


kinds = st.sampled_from(["sigma", "delta"])


# skew-algebra laws

@PROPS
@given(kinds, st.data())
def test_skew_product_is_associative(kind, data):
    A, B, C = (data.draw(operators(kind)) for _ in range(3))
    assert (A * B) * C == A * (B * C)


@PROPS
@given(kinds, st.data())
def test_skew_product_distributes(kind, data):
    A, B, C = (data.draw(operators(kind)) for _ in range(3))
    assert A * (B + C) == A * B + A * C
    assert (B + C) * A == B * A + C * A


@PROPS
@given(kinds, st.data(), series_polys())
def test_product_acts_as_composition(kind, data, f):
    A, B = data.draw(operators(kind, 1)), data.draw(operators(kind, 1))
    s = PowerSeries.from_poly(f)
    N = 48
    lhs = apply_operator(A * B, s, N)
    # B f is a polynomial of degree < N, so its truncation is exact
    inner = PowerSeries.from_poly(apply_operator(B, s, N).poly(N))
    rhs = apply_operator(A, inner, N)
    assert lhs.coeffs(N) == rhs.coeffs(N)


# right division

@PROPS
@given(kinds, st.data())
def test_right_division_recomposes(kind, data):
    A = data.draw(operators(kind, 3))
    B = data.draw(operators(kind, 2))
    assume(not B.is_zero())
    q, r = right_divide(A, B)
    assert q * B + r == A
    assert r.order < B.order


# companion systems

@PROPS
@given(st.lists(polys(2), min_size=1, max_size=3), st.fractions(min_value=1, max_value=5, max_denominator=4),
       series_polys())
def test_companion_matches_operator(low, lead, f):
    L = SigmaOp(2, low + [Poly([lead])])
    m = L.order
    A = companion_system(L)
    # det A = (-1)^m a_0 / a_m
    assert A.det() == RatFunc.of(Poly([(-1) ** m])) * L.coeff(0) / L.lc()
    Y = [RatFunc.of(f.compose_power(2 ** j)) for j in range(m)]
    shifted = [RatFunc.of(f.compose_power(2 ** (j + 1))) for j in range(m)]
    Lf = sum((L.coeff(j) * RatFunc.of(f.compose_power(2 ** j)) for j in range(m + 1)),
             RatFunc.of(Poly([])))
    for i, row in enumerate(A.entries):
        residual = shifted[i] - sum((a * y for a, y in zip(row, Y)), RatFunc.of(Poly([])))
        assert residual == (Lf / L.lc() if i == m - 1 else RatFunc.of(Poly([])))
    N = f.degree * 2 ** m + 8
    applied = apply_operator(L, PowerSeries.from_poly(f), N).coeffs(N)
    assert applied == PowerSeries.from_poly(Lf.num).coeffs(N)


# evaluation at a point

def relation_polys():
    mono = st.sampled_from([(), (("f.0", 1),), (("f.1", 1),), (("f.0", 1), ("f.1", 1)), (("f.0", 2),)])
    return st.dictionaries(mono, polys(2), min_size=1, max_size=4).map(
        lambda t: RelationPoly.from_terms(t, SIGMA(2), labels=["f"]))


@PROPS
@given(relation_polys(), relation_polys(), small)
def test_ev_alpha_is_a_ring_homomorphism(P, Q, alpha):
    assert ev_alpha(P * Q, alpha) == ev_alpha(P, alpha) * ev_alpha(Q, alpha)
    assert ev_alpha(P + Q, alpha) == ev_alpha(P, alpha) + ev_alpha(Q, alpha)


@PROPS
@given(relation_polys(), st.sampled_from([SQRT2, GOLDEN]), ints, ints)
def test_ev_alpha_at_algebraic_points(P, K, a, b):
    alpha = K.element([Fraction(a, 2), Fraction(b, 3)])
    lifted = P.map_coeffs(lambda c: c.over(K))
    left = ev_alpha(lifted * lifted, alpha)
    assert left == ev_alpha(lifted, alpha) * ev_alpha(lifted, alpha)


# Groebner bases

VARS = ["X1", "X2"]


def multipolys():
    expo = st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)])
    coeff = st.lists(st.integers(-2, 2), min_size=1, max_size=2).map(Poly).filter(lambda p: not p.is_zero())
    return st.dictionaries(expo, coeff, min_size=1, max_size=3).map(lambda t: MultiPoly(VARS, t))


@settings(max_examples=200, derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(multipolys(), multipolys())
def test_groebner_s_polynomials_reduce_to_zero(f, g):
    basis = buchberger([f, g], VARS)
    for p in basis:
        assert not p.is_zero()
    for i in range(len(basis)):
        for j in range(i):
            s = s_polynomial(basis[i], basis[j], VARS)
            assert groebner_reduce(s, basis, VARS).is_zero()
    for gen in (f, g):
        assert groebner_reduce(gen, basis, VARS).is_zero()


# descent to the rationals

@PROPS
@given(series_polys(), series_polys(), nonzero_polys(2), polys(2), st.integers(1, 4),
       st.integers(-3, 3), st.integers(1, 3))
def test_descent_returns_a_rational_relation(h1, h2, u1, u2, u3, a, b):
    # h3 is chosen so that u1 h1 + u2 h2 + u3 h3 = 0 exactly
    h3 = -(u1 * h1 + u2 * h2) * Fraction(1, u3)
    series = [PowerSeries.from_poly(h) for h in (h1, h2, h3)]
    u = [u1, u2, Poly([u3])]
    c = SQRT2.element([Fraction(a), Fraction(b)])
    scaled = [Poly([c * x for x in p.coeffs], SQRT2) for p in u]
    out = descend_relation(scaled, series, 0, [], 2, 64)
    assert all(p.field is None for p in out)
    ratio = out[2].coeffs[0] / u3
    assert ratio != 0
    assert out == [p * ratio for p in u]


# ball enclosures

def _value(K, x):
    with mpmath.workdps(80):
        roots = {"sqrt2": mpmath.sqrt(2), "golden": (1 + mpmath.sqrt(5)) / 2}
        t = roots["sqrt2" if K is SQRT2 else "golden"]
        return sum(mpmath.mpf(c.numerator) / c.denominator * t ** k for k, c in enumerate(x.coords))


def _contains(ball, v):
    with mpmath.workdps(80):
        x = Fraction(mpmath.nstr(v, 70))
    eps = Fraction(1, 10 ** 60)
    return ball.re.lo - eps <= x <= ball.re.hi + eps


@PROPS
@given(st.sampled_from([SQRT2, GOLDEN]), small, small, small, small)
def test_ball_arithmetic_encloses_exact_values(K, a, b, c, d):
    x = K.element([a, b])
    y = K.element([c, d])
    w = Fraction(1, 2 ** 70)
    bx, by = x.embed(w), y.embed(w)
    for exact, ball in ((x + y, bx + by), (x * y, bx * by), (x - y, bx - by)):
        assert _contains(ball, _value(K, exact))
        assert ball.intersects(exact.embed(w))
    if y != 0:
        assert _contains(bx / by, _value(K, x / y))
