from fractions import Fraction

import pytest

from relforge.errors import (
    AutomorphismFieldMismatch,
    PreconditionFailed,
    SizeGuardExceeded,
    TruncationTooSmall,
)
from relforge.grammar import parse_multipoly
from relforge.mahler import MahlerFunction
from relforge.numberfield import automorphisms, make_number_field
from relforge.polyring import MultiPoly, Poly, RatFunc
from relforge.relations import (
    DELTA,
    SIGMA,
    DegenerationReport,
    IdealPresentation,
    NotDegenerate,
    RelationPoly,
    buchberger,
    compose_relation,
    conjugate_object,
    decompose_function,
    descend_relation,
    detect_degeneration,
    elimination_bad_set,
    ev_alpha,
    groebner_reduce,
    guess_algebraic_relations,
    prolong_ideal,
    scan_degeneration_points,
    transport_clear_poles,
    verify_relation,
)
from relforge.series import PowerSeries, exp_series

from conftest import brute_force_ideal_span, in_span

z = Poly.z()
SQRT5 = make_number_field([-5, 0, 1])
PHI = (1 - SQRT5.gen()) / 2
SQRT2 = make_number_field([-2, 0, 1])
HALF_SQRT2 = SQRT2.gen() / 2
GAUSS = make_number_field([1, 0, 1])


def _rel(terms, kind, field=None):
    """RelationPoly from {tuple of (var, exp): coeff}."""
    return RelationPoly.from_terms(terms, kind, field=field)


def _tm3_rel(const=None):
    return _rel({(): const if const is not None else z ** 2,
                 (("f.0", 1),): z ** 3 - 1,
                 (("f.1", 1),): (1 - z ** 3) * (1 + z - z ** 2)}, SIGMA(3))


def test_verify_tm3(ws):
    f = {"f": ws.function("tm3")}
    assert verify_relation(_tm3_rel(), f, 243).passed
    res = verify_relation(_tm3_rel(z ** 3), f, 243)
    assert not res.passed and res.first_failure == 2
    with pytest.raises(TruncationTooSmall):
        verify_relation(_tm3_rel(), f, 3)


def test_compose_relation_tm3(ws):
    composed = compose_relation(_tm3_rel())
    assert composed.depths() == {"f": 2}
    assert composed == ws.relation("tm3_depth2").relation.primitive()
    assert verify_relation(composed, {"f": ws.function("tm3")}, 729).passed
    with pytest.raises(PreconditionFailed):
        compose_relation(_rel({(("f.0", 1),): Poly([1]), (): Poly([1])}, SIGMA(3)))


def test_verify_bessel(ws):
    rel = ws.relation("bessel")
    assert verify_relation(rel.relation, rel.functions, 200).passed


def test_guess_pair_relation(ws):
    funcs = {"f": ws.function("bs"), "g": ws.function("bsg")}
    rels = guess_algebraic_relations(funcs, SIGMA(2), 1, 2, 0, 256)
    assert len(rels) == 1
    expected = _rel({(("f.0", 1), ("g.1", 1)): Poly([1]), (("f.1", 1), ("g.0", 1)): Poly([1]), (): Poly([-2])},
                    SIGMA(2))
    got = rels[0].poly
    assert got == expected.poly or got == (-expected).poly


def test_guess_bessel_relation(ws):
    funcs = {"J0": ws.function("J0"), "f": ws.function("bessel_f")}
    target = _rel({(("f.0", 1), ): Poly([1]), (("J0.0", 2),): Poly([-1]), (("J0.1", 1),): z - 1}, DELTA)
    rels = guess_algebraic_relations(funcs, DELTA, 1, 2, 1, 96)
    assert any(r.poly == target.poly or r.poly == (-target).poly for r in rels)
    for r in rels:
        assert verify_relation(r, funcs, 300).passed


def test_guess_exp_relation():
    rels = guess_algebraic_relations({"e": exp_series()}, DELTA, 1, 1, 0, 64, inhomogeneous=False)
    assert len(rels) == 1
    p = rels[0].poly
    expected = _rel({(("e.1", 1),): Poly([1]), (("e.0", 1),): Poly([-1])}, DELTA).poly
    assert p == expected or p == -expected


def test_ev_alpha():
    Q = _rel({(("f.1", 1),): z - 1}, SIGMA(2))
    assert ev_alpha(Q, 1).is_zero()
    ev = ev_alpha(_tm3_rel(), Fraction(1, 2))
    coeff = ev.terms[tuple(int(v == "f.1") for v in ev.vars)]
    assert coeff == Fraction(35, 32)


def test_ev_alpha_is_multiplicative():
    Q1 = _tm3_rel()
    Q2 = _rel({(("f.0", 2),): z + 3, (("f.1", 1),): z ** 2}, SIGMA(3))
    for alpha in (Fraction(1, 2), Fraction(-3, 7), Fraction(2)):
        assert ev_alpha(Q1 * Q2, alpha) == ev_alpha(Q1, alpha) * ev_alpha(Q2, alpha)


def test_tm3_degenerates_at_phi(ws):
    rel = ws.relation("tm3")
    rep = detect_degeneration(rel.relation, rel.functions, PHI)
    assert isinstance(rep, DegenerationReport)
    value = rep.solve_for("f")
    assert value == PHI ** 2 / (1 - PHI ** 3)
    assert value == (SQRT5.gen() - 1) / 4
    assert rep.consistency.contains_zero()


def test_tm3_not_degenerate_at_half(ws):
    rel = ws.relation("tm3")
    rep = detect_degeneration(rel.relation, rel.functions, Fraction(1, 2))
    assert isinstance(rep, NotDegenerate)
    assert rep.witness[1] == Fraction(35, 32)


def test_h_relation_degenerates_at_third(ws):
    rel = ws.relation("bsrs")
    rep = detect_degeneration(rel.relation, rel.functions, Fraction(1, 3))
    assert isinstance(rep, DegenerationReport)
    vs = rep.P.vars
    fg = tuple(int(v in ("f.0", "g.0")) for v in vs)
    h = tuple(int(v == "h.0") for v in vs)
    assert rep.P.terms == {fg: Fraction(1), h: Fraction(-1)}
    assert rep.consistency.contains_zero()


def test_scans(ws):
    hits = scan_degeneration_points(ws.relation("tm3").relation, Fraction(99, 100))
    assert len(hits) == 1
    assert hits[0].factor.monic() == (z ** 2 - z - 1)
    assert hits[0].box.contains(hits[0].box.center)
    assert abs(float(hits[0].box.center[0]) + 0.6180339887) < 1e-9
    assert scan_degeneration_points(ws.relation("bs").relation, Fraction(99, 100)) == []
    hh = scan_degeneration_points(ws.relation("bsrs").relation, Fraction(99, 100))
    assert [h.factor.monic() for h in hh] == [z - Fraction(1, 3)]


def test_transport():
    Q = _rel({(("f.0", 1), ("f.1", 1)): Poly([1])}, SIGMA(2))
    assert transport_clear_poles(Q, Poly([1])) == Q
    T = transport_clear_poles(Q, 1 - 2 * z)
    assert list(T.poly.terms.values()) == [(1 - 2 * z) * (1 - 2 * z ** 2)]


def test_transport_recovers_baum_sweet(ws):
    bs = ws.function("bs")
    D = 1 - 2 * z
    Dq, Dqq = D.compose_power(2), D.compose_power(4)
    # relation for F = D f: Dq Dqq F - z D Dqq sigma F - D Dq sigma^2 F = 0
    Q0 = _rel({(("f.0", 1),): Dq * Dqq, (("f.1", 1),): -z * D * Dqq, (("f.2", 1),): -D * Dq}, SIGMA(2))
    F = bs.series * PowerSeries.from_poly(D)
    assert verify_relation(Q0, {"f": F}, 256).passed
    Q1 = transport_clear_poles(Q0, D)
    assert verify_relation(Q1, {"f": bs}, 256).passed


def test_buchberger_examples():
    X = ("X2", "X1")
    g = parse_multipoly("(z-1)*X2 - X1", X)
    basis = buchberger([g], X)
    assert len(basis) == 1
    b = parse_multipoly("X1^2 - z", ("X1", "X2")), parse_multipoly("X1*X2 - 1", ("X1", "X2"))
    basis = buchberger(list(b), ("X1", "X2"))
    target = parse_multipoly("z*X2^2 - 1", ("X1", "X2"))
    assert groebner_reduce(target, basis, ("X1", "X2")).is_zero()
    assert any(set(p.used_vars()) == {"X2"} for p in basis)
    with pytest.raises(SizeGuardExceeded):
        names = tuple(f"X{i}" for i in range(7))
        buchberger([MultiPoly.var(names, "X0", Poly([1]))], names)


def test_principal_ideal_basis_is_generator():
    X = ("X1", "X2")
    g = parse_multipoly("(z+2)*X1^2 + X2 - 3*z", X)
    basis = buchberger([g, g * parse_multipoly("X1 + z", X)], X)
    assert len(basis) == 1
    assert groebner_reduce(g, basis, X).is_zero()


def test_elimination_bad_set_toy():
    X = ("X2", "X1")
    g = parse_multipoly("(z-1)*X2 - X1", X)
    res = elimination_bad_set([g], X, 1)
    assert res.bad_set == z - 1
    # at alpha = 1 the evaluated ideal contains -X1, while the eliminated ideal is zero
    ev1 = g.map_coeffs(lambda c: c(1))
    monos, rows = brute_force_ideal_span([ev1], X, 2)
    target = MultiPoly(X, {(0, 1): Fraction(1)})
    assert in_span(target, rows, monos)
    assert res.eliminant == []
    # off the root X1 alone is not in the evaluated ideal
    ev2 = g.map_coeffs(lambda c: c(2))
    monos, rows = brute_force_ideal_span([ev2], X, 2)
    assert not in_span(target, rows, monos)


def test_elimination_constant_coefficients():
    X = ("X2", "X1")
    res = elimination_bad_set([parse_multipoly("X2^2 - X1", X), parse_multipoly("X2 - 2", X)], X, 1)
    assert res.bad_set == Poly([1])


def test_two_generator_toy_off_bad_set():
    X = ("X2", "X1")
    gens = [parse_multipoly("(z-1)*X2 - X1", X), parse_multipoly("X2^2 - z", X)]
    res = elimination_bad_set(gens, X, 1)
    assert (res.bad_set % (z - 1)).is_zero()
    # at alpha = 2 the eliminant evaluates into the evaluated ideal and generates its X1-part
    alpha = 2
    evg = [g.map_coeffs(lambda c: c(alpha)) for g in gens]
    elim = [p.map_coeffs(lambda c: c(alpha)) for p in res.eliminant]
    assert elim
    monos, rows = brute_force_ideal_span(evg, X, 3)
    for p in elim:
        assert in_span(p, rows, monos)
    x1_only = [e for e in monos if e[0] == 0]
    monos1, rows1 = brute_force_ideal_span(elim, X, 3)
    # every X1-only element of degree <= 2 in the evaluated ideal lies in the eliminant's span
    for e in x1_only:
        if sum(e) <= 2:
            t = MultiPoly(X, {e: Fraction(1)})
            assert in_span(t, rows, monos) == in_span(t, rows1, monos1)


def test_prolong_ideal_exp():
    L = _rel({(("e.1", 1),): Poly([1]), (("e.0", 1),): Poly([-1])}, DELTA)
    P = IdealPresentation([], [L], DELTA)
    out = prolong_ideal(P, 2)
    assert len(out) == 2
    second = _rel({(("e.2", 1),): Poly([1]), (("e.1", 1),): Poly([-1])}, DELTA)
    assert out[1].poly == second.poly
    combo = out[0] + out[1]
    assert combo.poly == _rel({(("e.2", 1),): Poly([1]), (("e.0", 1),): Poly([-1])}, DELTA).poly
    for r in out:
        assert verify_relation(r, {"e": exp_series()}, 100).passed
    assert prolong_ideal(IdealPresentation([L], [], DELTA), 0) == [L]


def test_prolong_pair_relation(ws):
    rel = ws.relation("pair")
    P = IdealPresentation([rel.relation], [], SIGMA(2))
    out = prolong_ideal(P, 2, prolong_generators=True)
    assert len(out) == 2
    assert out[1].depths() == {"f": 2, "g": 2}
    for r in out:
        assert verify_relation(r, rel.functions, 256).passed


def test_descend_over_gaussian_field():
    i = GAUSS.gen()
    h1 = PowerSeries.from_ratfunc(RatFunc(Poly([1]), 1 - z))
    h2 = PowerSeries.from_ratfunc(RatFunc(Poly([1]), 1 - 2 * z))
    w1 = Poly([i, -i])
    w2 = Poly([-i, 2 * i])
    out = descend_relation([w1, w2], [h1, h2], 1, [0], 1)
    assert out == [1 - z, -(1 - 2 * z)]


def test_descend_rational_input_unchanged():
    h1 = PowerSeries.from_ratfunc(RatFunc(Poly([1]), 1 - z))
    h2 = PowerSeries.from_ratfunc(RatFunc(Poly([1]), 1 - 2 * z))
    ws_ = [1 - z, 2 * z - 1]
    assert descend_relation(ws_, [h1, h2], 1, [0], 1) == ws_


def test_descend_tm3_scaled(ws):
    t = SQRT5.gen()
    f = ws.function("tm3").series
    one = PowerSeries.from_poly(Poly([1]))
    base = [z ** 2, z ** 3 - 1, (1 - z ** 3) * (1 + z - z ** 2)]
    scaled = [Poly([c * t for c in p.coeffs]) for p in base]
    out = descend_relation(scaled, [one, f.map(lambda c: c), f.sigma(3)], Fraction(1, 2), [], 1)
    assert out == base


def test_descend_inconsistent_input():
    h = PowerSeries.from_ratfunc(RatFunc(Poly([1]), 1 - z))
    with pytest.raises(PreconditionFailed):
        descend_relation([Poly([1]), Poly([1])], [h, h], 0, [], 0, 32)


def test_conjugation():
    tau = automorphisms(SQRT5)[1]
    s = PowerSeries.from_function(lambda n: Fraction(n, 3))
    assert conjugate_object(s, tau).coeffs(10) == s.coeffs(10)
    t = SQRT5.gen()
    Q = _tm3_rel().map_coeffs(lambda c: Poly([x * t for x in c.coeffs], SQRT5))
    Qc = conjugate_object(Q, tau)
    assert Qc.poly == Q.map_coeffs(lambda c: -c).poly
    with pytest.raises(AutomorphismFieldMismatch):
        conjugate_object(Poly([SQRT2.gen()]), tau)


def test_conjugate_points_of_synthetic(ws):
    rel = ws.relation("synthetic")
    tau = automorphisms(SQRT2)[1]
    values = []
    for alpha in (HALF_SQRT2, tau(HALF_SQRT2)):
        rep = detect_degeneration(rel.relation, rel.functions, alpha)
        values.append(rep.solve_for("f"))
    assert values[0] == HALF_SQRT2
    assert values[1] == tau(values[0])


def test_decompose_rational_function(ws):
    geom2 = ws.function("geom2")
    dec = decompose_function(geom2, Fraction(2, 5), [])
    assert dec.R1 == RatFunc(Poly([1]), 1 - 2 * z)
    assert dec.R2.is_zero() and dec.g is None
    assert dec.check(geom2, 256)


def test_decompose_synthetic(ws):
    f = ws.function("synthetic")
    dec = decompose_function(f, 1, [(HALF_SQRT2, HALF_SQRT2)])
    assert len(dec.steps) == 1
    assert dec.check(f, 256)
    assert dec.R1 == RatFunc(Poly([Fraction(1, 2)]), z)


def test_decompose_tm3(ws):
    f = ws.function("tm3")
    value = PHI ** 2 / (1 - PHI ** 3)
    dec = decompose_function(f, Fraction(99, 100), [(PHI, value)])
    assert dec.check(f, 365)
    assert isinstance(dec.g, MahlerFunction)
    assert dec.g.relation_holds(200)
