"""Acceptance checks; each prints one PASS/FAIL line (run with -s to see them)."""
import subprocess
import sys
import time
from fractions import Fraction
from math import factorial
from pathlib import Path

from relforge.corpus import Workspace
from relforge.evalnum import eval_ball
from relforge.grammar import parse_multipoly
from relforge.mahler import (
    companion_with_constant,
    is_regular_point,
    make_level_R,
    minimal_operator,
    multiplicity_bound,
    reduce_multiplicity_step,
    remove_singularities,
)
from relforge.numberfield import make_number_field
from relforge.ore import SigmaOp
from relforge.polyring import MultiPoly, Poly, RatFunc, has_root_in_punctured_disk
from relforge.relations import (
    DegenerationReport,
    compose_relation,
    decompose_function,
    detect_degeneration,
    elimination_bad_set,
    verify_relation,
)
from relforge.series import PowerSeries

from conftest import brute_force_ideal_span, in_span

z = Poly.z()
SQRT5 = make_number_field([-5, 0, 1])
PHI = (1 - SQRT5.gen()) / 2
SQRT2 = make_number_field([-2, 0, 1])
HALF_SQRT2 = SQRT2.gen() / 2
TESTS = Path(__file__).parent


def report(n, ok, detail=""):
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {n} failed: {detail}"


def _pole_order(r, alpha):
    lin = Poly([-alpha, 1], alpha.field)

    def mult(p):
        p = p.over(alpha.field)
        k = 0
        while not p.is_zero() and p(alpha) == 0:
            p = p // lin
            k += 1
        return k
    return mult(r.den) - mult(r.num)


def test_c01_tm3_relation_exact():
    start = time.perf_counter()
    ws = Workspace()
    rel = ws.relation("tm3")
    res = verify_relation(rel.relation, rel.functions, 729)
    elapsed = time.perf_counter() - start
    report(1, res.passed and elapsed < 10, f"mod z^729 verified={res.passed} in {elapsed:.2f}s")


def test_c02_tm3_degeneration_at_phi():
    ws = Workspace()
    rel = ws.relation("tm3")
    rep = detect_degeneration(rel.relation, rel.functions, PHI)
    closed = PHI ** 2 / (1 - PHI ** 3)
    target = (SQRT5.gen() - 1) / 4
    ok = isinstance(rep, DegenerationReport) and rep.solve_for("f") == closed and closed == target
    ball = eval_ball(rel.functions["f"], PHI, Fraction(1, 10 ** 40))
    ok = ok and ball.width <= Fraction(1, 10 ** 40) and ball.contains(target.embed(Fraction(1, 10 ** 60)))
    report(2, ok, f"f(phi) = {closed}, ball width {float(ball.width):.1e}")


def test_c03_depth_two_relation():
    ws = Workspace()
    rel = ws.relation("tm3")
    composed = compose_relation(rel.relation)
    stored = ws.relation("tm3_depth2").relation.primitive()
    terms = {tuple(sorted(m)): c for m, c in composed.monomials()}
    const, f0, f2 = terms[()], terms[("f.0",)], terms[("f.2",)]
    # dividing through by -(f.0 coefficient) gives N/(1 - z^9) and the sigma^2 coefficient
    scale = RatFunc(Poly([1]), -f0)
    ok = (composed == stored
          and f0 == z ** 9 - 1
          and RatFunc(const, Poly([1])) * scale == RatFunc(z ** 2 + z ** 5 + z ** 6 + z ** 7, 1 - z ** 9)
          and RatFunc(f2, Poly([1])) * scale == RatFunc((1 + z - z ** 2) * (1 + z ** 3 - z ** 6), Poly([1]))
          and verify_relation(composed, rel.functions, 729).passed)
    report(3, ok, f"composed: {composed}")


def test_c04_minimal_operators():
    ws = Workspace()
    results = []
    for name, expected in (("bs", SigmaOp(2, [1, -z, -1])), ("rs", SigmaOp(2, [1, z - 1, -2 * z]))):
        start = time.perf_counter()
        L, cert = minimal_operator(ws.function(name), 1)
        elapsed = time.perf_counter() - start
        ok = (L == expected and cert.lower_orders_excluded == [0, 1]
              and cert.status.startswith("proved") and elapsed < 30)
        results.append((name, ok, elapsed))
    detail = ", ".join(f"{n} {'ok' if ok else 'wrong'} {t:.2f}s" for n, ok, t in results)
    report(4, all(ok for _, ok, _ in results), detail)


def test_c05_pair_relation():
    ws = Workspace()
    rel = ws.relation("pair")
    f, g = ws.function("bs"), ws.function("bsg")
    N = 512
    a, b = f.series, g.series
    lhs = (a * b.sigma(2) + a.sigma(2) * b).coeffs(N)
    direct = lhs == [Fraction(2)] + [Fraction(0)] * (N - 1)
    res = verify_relation(rel.relation, rel.functions, N)
    report(5, direct and res.passed and f.series[0] == 1, f"f g(z^2) + f(z^2) g - 2 = 0 mod z^{N}")


def test_c06_bessel_relation():
    ws = Workspace()
    rel = ws.relation("bessel")
    res = verify_relation(rel.relation, rel.functions, 200)
    diff = eval_ball(ws.function("bessel_f"), 1, Fraction(1, 10 ** 22)) - \
        eval_ball(ws.function("J0"), 1, Fraction(1, 10 ** 22)) ** 2
    ok = res.passed and diff.width <= Fraction(1, 10 ** 20) and diff.contains_zero()
    report(6, ok, f"mod z^200 verified={res.passed}, ball width {float(diff.width):.1e}")


def test_c07_reld_at_one():
    ws = Workspace()
    rel = ws.relation("reld")
    rep = detect_degeneration(rel.relation, rel.functions, 1)
    ok = isinstance(rep, DegenerationReport) and rep.P.used_vars() == ["f.0"] and len(rep.P.terms) == 1
    ball = eval_ball(ws.function("zm1exp"), 1, Fraction(1, 10 ** 20))
    ok = ok and ball.width <= Fraction(1, 10 ** 20) and ball.contains_zero()
    # the stored series is sum (n-1)/n! z^n
    s = ws.function("zm1exp").series.coeffs(12)
    ok = ok and s == [Fraction(n - 1, factorial(n)) for n in range(12)]
    report(7, ok, f"P = {rep.P}")


def test_c08_elimination_bad_set():
    X = ("X2", "X1")
    g = parse_multipoly("(z-1)*X2 - X1", X)
    res = elimination_bad_set([g], X, 1)
    target = MultiPoly(X, {(0, 1): Fraction(1)})
    verdicts = {}
    for alpha in (1, 2, -1, Fraction(1, 2)):
        monos, rows = brute_force_ideal_span([g.map_coeffs(lambda c: c(alpha))], X, 2)
        # the eliminated ideal is zero, so X1 may enter the evaluated ideal only on the bad set
        verdicts[alpha] = in_span(target, rows, monos)
    ok = (res.bad_set == z - 1 and res.eliminant == []
          and verdicts[1] and not any(v for a, v in verdicts.items() if a != 1))
    report(8, ok, f"bad set {res.bad_set}")


def test_c09_disk_and_singularities():
    p = z ** 2 - z - 1
    inside = has_root_in_punctured_disk(p, Fraction(7, 10))
    outside = has_root_in_punctured_disk(p, Fraction(1, 2))
    ws = Workspace()
    L = make_level_R(ws.function("tm3"), 1)
    out, s = remove_singularities(L, Fraction(9, 10))
    samples = [Fraction(k, 12) for k in range(1, 11)] + [-Fraction(k, 12) for k in range(1, 11)]
    regular = all(is_regular_point(out, a) for a in samples)
    ok = inside is True and outside is False and s == 1 and regular
    report(9, ok, f"disk 0.7={inside}, 0.5={outside}, s={s}, regular at {len(samples)} points={regular}")


def test_c10_property_suites():
    import test_properties
    suites = [getattr(test_properties, n) for n in dir(test_properties) if n.startswith("test_")]
    sizes = [fn._hypothesis_internal_use_settings.max_examples for fn in suites]
    seeded = all(fn._hypothesis_internal_use_settings.derandomize for fn in suites)
    start = time.perf_counter()
    out = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(TESTS),
                          f"--ignore={TESTS / 'test_acceptance.py'}"],
                         capture_output=True, text=True, cwd=TESTS.parent)
    elapsed = time.perf_counter() - start
    tail = out.stdout.strip().splitlines()[-1] if out.stdout.strip() else out.stderr[-200:]
    ok = out.returncode == 0 and min(sizes) >= 200 and seeded and elapsed < 300
    report(10, ok, f"{len(suites)} property suites x >= {min(sizes)} cases; rest of suite: {tail} ({elapsed:.0f}s)")


def test_c11_multiplicity_reduction():
    ws = Workspace()
    tm3 = ws.function("tm3")
    A = companion_with_constant(tm3.annihilator, tm3.inhom)
    bound = multiplicity_bound(A, PHI, [1, tm3])
    B, g = reduce_multiplicity_step(A, 1, PHI, PHI ** 2 / (1 - PHI ** 3), tm3)
    zK = Poly([0, 1], SQRT5)
    detA = A.det()
    detA = RatFunc(detA.num.over(SQRT5), detA.den.over(SQRT5))
    identity = B.det() * RatFunc(zK ** 3 - PHI, Poly([1], SQRT5)) == detA * RatFunc(zK - PHI, Poly([1], SQRT5))
    before, after = _pole_order(detA, PHI), _pole_order(B.det(), PHI)
    ok = bound == 1 and identity and after < before
    report(11, ok, f"bound={bound}, det pole order {before} -> {after}")


def test_c12_decompose_synthetic():
    ws = Workspace()
    f = ws.function("synthetic")
    dec = decompose_function(f, 1, [(HALF_SQRT2, HALF_SQRT2), (-HALF_SQRT2, -HALF_SQRT2)])
    N = 256
    R1, R2 = dec.R1, dec.R2
    # f = R1 + R2 g, compared coefficientwise after clearing the common denominator
    den = R1.den * R2.den // R1.den.gcd(R2.den)
    fK = f.series.map(lambda c: SQRT2(c), SQRT2)
    lhs = (fK * PowerSeries.from_poly(den.over(SQRT2))).coeffs(N)
    a = (R1.num * (den // R1.den)).over(SQRT2)
    b = (R2.num * (den // R2.den)).over(SQRT2)
    rhs = (PowerSeries.from_poly(a) + PowerSeries.from_poly(b) * dec.g.series.map(lambda c: SQRT2(c), SQRT2))
    ok = lhs == rhs.coeffs(N) and dec.check(f, N)
    report(12, ok, f"R1 = {R1}, R2 = {R2}, checked mod z^{N}")
