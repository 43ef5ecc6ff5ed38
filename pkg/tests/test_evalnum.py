from fractions import Fraction

import mpmath
import pytest

from relforge.balls import ComplexBall
from relforge.errors import NoBoundAvailable, OrbitHitsSingularity
from relforge.evalnum import (
    CoefficientBound,
    check_algebraic_value,
    eval_ball,
    evaluate,
    pullback_expression,
)
from relforge.numberfield import make_number_field
from relforge.series import PowerSeries

from conftest import baum_sweet_term, tm3_term

SQRT5 = make_number_field([-5, 0, 1])
PHI = (1 - SQRT5.gen()) / 2
SQRT2 = make_number_field([-2, 0, 1])
HALF_SQRT2 = SQRT2.gen() / 2


def _mp_sum(term, x, n):
    with mpmath.workdps(80):
        w = mpmath.mpf(x.numerator) / x.denominator
        return mpmath.fsum(term(k) * w ** k for k in range(n))


def _meets(ball, value, digits=60):
    with mpmath.workdps(digits + 10):
        x = Fraction(mpmath.nstr(value, digits + 5))
    eps = Fraction(1, 10 ** digits)
    return ball.re.lo <= x + eps and x - eps <= ball.re.hi


def test_pullback_depth_zero_is_identity(ws):
    f = ws.function("tm3")
    r, coeffs, points = pullback_expression(f, Fraction(1, 2), 0)
    assert r == 0 and coeffs == {0: 1} and points == {0: Fraction(1, 2)}


def test_tm3_pullback_agrees_with_direct_sum(ws):
    f = ws.function("tm3")
    alpha = Fraction(1, 2)
    r, coeffs, points = pullback_expression(f, alpha, 2)
    assert set(coeffs) == {2}
    assert points[2] == alpha ** 9
    width = Fraction(1, 10 ** 30)
    inner = eval_ball(f, points[2], width / 100, depth=0)
    ball = ComplexBall(r) + ComplexBall(coeffs[2]) * inner
    direct = eval_ball(f, alpha, width, depth=0)
    assert ball.intersects(direct)
    # independent oracle: float summation of the digit-defined sequence
    assert _meets(direct, _mp_sum(tm3_term, alpha, 260), 60)


def test_pullback_hits_singularity(ws):
    f = ws.function("geom2")
    with pytest.raises(OrbitHitsSingularity) as info:
        pullback_expression(f, HALF_SQRT2, 2)
    assert info.value.ell == 1


def test_baum_sweet_direct_and_deep_agree(ws):
    f = ws.function("bs")
    width = Fraction(1, 10 ** 30)
    direct = evaluate(f, Fraction(1, 3), width, depth=0)
    deep = evaluate(f, Fraction(1, 3), width, depth=3)
    assert direct.ball.width <= width and deep.ball.width <= width
    assert direct.ball.intersects(deep.ball)
    assert deep.method.startswith("pullback(k=3")
    assert _meets(direct.ball, _mp_sum(baum_sweet_term, Fraction(1, 3), 200), 60)


def test_tm3_value_at_phi(ws):
    f = ws.function("tm3")
    ball = eval_ball(f, PHI, Fraction(1, 10 ** 30))
    assert ball.intersects((SQRT5.gen() - 1) / 4)
    with mpmath.workdps(60):
        assert _meets(ball, (mpmath.sqrt(5) - 1) / 4, 40)


def test_check_algebraic_value(ws):
    tm3 = ws.function("tm3")
    assert check_algebraic_value(tm3, PHI, (SQRT5.gen() - 1) / 4, Fraction(1, 10 ** 40)) == "consistent"
    assert check_algebraic_value(tm3, Fraction(1, 2), 0, Fraction(1, 10 ** 20)) == "refuted"
    assert check_algebraic_value(ws.function("bs"), Fraction(1, 3), 1, Fraction(1, 10 ** 20)) == "refuted"


def test_bessel_identity_at_one(ws):
    f = eval_ball(ws.function("bessel_f"), 1, Fraction(1, 10 ** 22))
    j = eval_ball(ws.function("J0"), 1, Fraction(1, 10 ** 22))
    diff = f - j * j
    assert diff.width <= Fraction(1, 10 ** 20)
    assert diff.contains_zero()
    with mpmath.workdps(50):
        assert _meets(j, mpmath.besselj(0, 1), 22)


def test_tail_bound_soundness():
    bound = CoefficientBound(Fraction(1), Fraction(1))
    s = PowerSeries.from_function(lambda n: Fraction((-1) ** n, n + 1))
    for N in (8, 16, 32):
        x = Fraction(1, 3)
        partial = sum(s.coeffs(N)[k] * x ** k for k in range(N))
        partial2 = sum(s.coeffs(2 * N)[k] * x ** k for k in range(2 * N))
        t1, t2 = bound.tail(N, x), bound.tail(2 * N, x)
        outer = ComplexBall.around(partial, 0, t1)
        inner = ComplexBall.around(partial2, 0, t2)
        assert outer.contains(inner)


def test_no_bound_outside_disk(ws):
    with pytest.raises(NoBoundAvailable):
        eval_ball(ws.function("bs"), Fraction(3, 2), Fraction(1, 10 ** 5), depth=0)


def test_degeneration_values_are_consistent(ws):
    from relforge.relations import DegenerationReport, detect_degeneration
    for name, alpha in (("tm3", PHI), ("synthetic", HALF_SQRT2)):
        rel = ws.relation(name)
        rep = detect_degeneration(rel.relation, rel.functions, alpha)
        assert isinstance(rep, DegenerationReport)
        value = rep.solve_for("f")
        assert check_algebraic_value(rel.functions["f"], alpha, value, Fraction(1, 10 ** 40)) == "consistent"
