from fractions import Fraction

import mpmath
import pytest
import sympy

from relforge.errors import BoundaryUndecided, DivisionByZeroPolynomial, ZeroPolynomial
from relforge.numberfield import make_number_field
from relforge.polyring import (
    INFINITY,
    Poly,
    RatFunc,
    has_root_in_punctured_disk,
    min_root_modulus_bound,
)

z = Poly.z()


def _numeric_min_modulus(coeffs):
    roots = mpmath.polyroots(list(reversed([float(c) for c in coeffs])), maxsteps=200, extraprec=200)
    mods = [abs(r) for r in roots if abs(r) > 1e-30]
    return min(mods) if mods else None


def test_golden_polynomial_bound():
    p = z ** 2 - z - 1
    b = min_root_modulus_bound(p, 8)
    true = _numeric_min_modulus(p.coeffs)
    assert Fraction(6, 10) <= b <= Fraction(619, 1000)
    assert b <= Fraction(str(true))


def test_monomial_has_infinite_bound():
    assert min_root_modulus_bound(z ** 5) == INFINITY


def test_linear_bound_is_tight():
    b = min_root_modulus_bound(1 - 2 * z)
    assert Fraction(49, 100) < b <= Fraction(1, 2)


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        min_root_modulus_bound(Poly([]))


def test_bound_monotone_in_iterations():
    p = Poly([3, -7, 2, 5, -1])
    bounds = [min_root_modulus_bound(p, k) for k in range(6)]
    assert bounds == sorted(bounds)
    assert bounds[-1] <= Fraction(str(_numeric_min_modulus(p.coeffs)))


def test_punctured_disk_decisions():
    p = z ** 2 - z - 1
    assert has_root_in_punctured_disk(p, Fraction(7, 10))
    assert not has_root_in_punctured_disk(p, Fraction(1, 2))
    assert not has_root_in_punctured_disk(z ** 3, Fraction(1, 3))


def test_root_on_circle_is_undecided():
    with pytest.raises(BoundaryUndecided):
        has_root_in_punctured_disk(1 - 2 * z, Fraction(1, 2))


def test_disk_decision_over_number_field():
    K = make_number_field([-5, 0, 1])
    phi = (1 - K.gen()) / 2
    p = Poly([-phi, 1])
    assert has_root_in_punctured_disk(p, Fraction(7, 10))
    assert not has_root_in_punctured_disk(p, Fraction(6, 10))


def test_factor_with_small_root_detected():
    a = Fraction(1, 3)
    q = Poly([5, 1, 2])
    assert has_root_in_punctured_disk(Poly([-a, 1]) * q, Fraction(1, 2))


def test_division_and_gcd_against_sympy():
    x = sympy.Symbol("x")
    a = Poly([1, -3, 0, 2, 7])
    b = Poly([2, 1, -1])
    quo, rem = divmod(a, b)
    sq, sr = sympy.div(sympy.Poly(list(reversed(a.coeffs)), x), sympy.Poly(list(reversed(b.coeffs)), x))
    assert [Fraction(str(c)) for c in reversed(sq.all_coeffs())] == list(quo.coeffs)
    assert [Fraction(str(c)) for c in reversed(sr.all_coeffs())] == list(rem.coeffs)
    g = (a * b).gcd(b * (z + 3))
    assert g == b.monic()


def test_ratfunc_reduction():
    r = RatFunc(z ** 2 - 1, 2 * z - 2)
    assert r.num == (z + 1) / 2
    assert r.den == Poly([1])
    a, b = z ** 2 + 1, z - 3
    assert RatFunc(a, b) * RatFunc(b, a) == 1
    with pytest.raises(DivisionByZeroPolynomial):
        RatFunc(z, Poly([]))
