from fractions import Fraction

import mpmath
import pytest

from relforge.balls import ComplexBall
from relforge.errors import AutomorphismFieldMismatch, NotIrreducible, NotMonic
from relforge.numberfield import (
    automorphisms,
    conjugate_element,
    embed,
    make_number_field,
)


def _encloses(ball, ref, digits=60):
    """True when the real ball meets a tiny bracket around the mpmath value."""
    with mpmath.workdps(digits + 10):
        x = Fraction(mpmath.nstr(ref, digits + 5))
    eps = Fraction(1, 10 ** digits)
    return ball.re.lo <= x + eps and x - eps <= ball.re.hi and ball.im.contains_zero()


def test_golden_field_roots_match_numeric_roots():
    K = make_number_field([-1, -1, 1])
    expected = sorted(float(r.real) for r in mpmath.polyroots([1, -1, -1]))
    centres = sorted(float(b.center[0]) for b in K.embeddings)
    assert K.degree == 2
    for got, want in zip(centres, expected):
        assert abs(got - want) < 1e-12
    a, b = K.embeddings
    assert not a.intersects(b)


def test_linear_field_is_rationals():
    K = make_number_field([-3, 1])
    assert K.degree == 1
    assert K.gen() == 3
    assert K.gen().is_rational()


def test_reducible_and_non_monic_rejected():
    with pytest.raises(NotIrreducible):
        make_number_field([-1, 0, 1])
    with pytest.raises(NotMonic):
        make_number_field([-1, 0, 2])


def test_sqrt5_embedding():
    K = make_number_field([-5, 0, 1])
    t = K.gen()
    ball = embed(t, Fraction(1, 10 ** 20))
    assert ball.width <= Fraction(1, 10 ** 20)
    with mpmath.workdps(80):
        assert _encloses(ball, mpmath.sqrt(5))


def test_rational_embeds_exactly():
    b = embed(Fraction(1, 3), Fraction(1, 10 ** 10))
    assert b.is_exact()
    assert b.re.lo == Fraction(1, 3)


def test_phi_embedding():
    K = make_number_field([-5, 0, 1])
    t = K.gen()
    assert t.embed().center[0] > 0
    phi = (1 - t) / 2
    ball = phi.embed(Fraction(1, 10 ** 30))
    with mpmath.workdps(80):
        assert _encloses(ball, (1 - mpmath.sqrt(5)) / 2)


def test_sqrt5_conjugation():
    K = make_number_field([-5, 0, 1])
    t = K.gen()
    auts = automorphisms(K)
    assert len(auts) == 2
    assert auts[0].is_identity()
    tau = auts[1]
    assert conjugate_element(t, tau) == -t
    assert conjugate_element(Fraction(2, 7), tau) == Fraction(2, 7)
    phi = (1 - t) / 2
    assert conjugate_element(conjugate_element(phi, tau), tau) == phi
    assert tau.compose(tau).is_identity()


def test_conjugation_rejects_foreign_field():
    K = make_number_field([-5, 0, 1])
    L = make_number_field([-2, 0, 1])
    with pytest.raises(AutomorphismFieldMismatch):
        conjugate_element(L.gen(), automorphisms(K)[1])


def test_inverse_and_minpoly():
    K = make_number_field([-1, -1, 0, 0, 0, 0, 1])
    x = K.gen() ** 3 + 2 * K.gen() - 1
    assert x * x.inverse() == 1
    mp = x.minpoly_rational()
    acc = K(0)
    for c in reversed(mp):
        acc = acc * x + c
    assert acc.is_zero()


def test_ball_arithmetic_contains_exact_results():
    a = ComplexBall.around(Fraction(1, 3), Fraction(1, 5), Fraction(1, 100))
    b = ComplexBall.around(Fraction(-2, 7), 0, Fraction(1, 1000))
    p = a * b
    assert p.contains((Fraction(1, 3) * Fraction(-2, 7), Fraction(1, 5) * Fraction(-2, 7)))
    s = a + b
    assert s.contains((Fraction(1, 3) - Fraction(2, 7), Fraction(1, 5)))
