"""Certified evaluation of Mahler functions and E-functions at algebraic points.

Mahler functions are first pulled back along their functional equation so
that the remaining evaluation points are tiny; the series are then summed
directly with an explicit tail bound.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .balls import ComplexBall, RealInterval
from .errors import NoBoundAvailable, OrbitHitsSingularity, PreconditionFailed
from .numberfield import NFElem

INNER_RADIUS = Fraction(1, 2 ** 16)


@dataclass
class CoefficientBound:
    """|c_n| <= C * rho^n for n >= n0 (geometric) or |c_n| <= C * rho^n / n! (factorial)."""

    C: Fraction
    rho: Fraction
    n0: int = 0
    provenance: str = "user-supplied"
    kind: str = "geometric"

    def tail(self, N, r):
        """Upper bound for sum_{n >= N} |c_n| r^n, or None when it cannot be bounded."""
        N = max(N, self.n0)
        x = self.rho * r
        if self.kind == "factorial":
            ratio = x / (N + 1)
            if ratio >= 1:
                return None
            return self.C * x ** N / factorial(N) / (1 - ratio)
        if x >= 1:
            return None
        return self.C * x ** N / (1 - x)

    def describe(self):
        form = "C*rho^n/n!" if self.kind == "factorial" else "C*rho^n"
        return f"{self.provenance} {form} C={self.C} rho={self.rho} n0={self.n0}"


def _abs_upper(c):
    if isinstance(c, NFElem):
        return c.embed(Fraction(1, 2 ** 40)).abs_upper(64)
    return abs(Fraction(c))


def _abs_lower(c):
    if isinstance(c, NFElem):
        return c.embed(Fraction(1, 2 ** 40)).abs_lower(64)
    return abs(Fraction(c))


def equation_bound(f):
    """Geometric bound derived from inhom + sum a_i f(z^(q^i)) = 0 with a_0(0) != 0.

    With rho >= 2 chosen so that sum_{j>=1} |a_0j| rho^(-j) <= |a_00|/2 and n0
    past the inhomogeneous term and past the point where the sigma terms
    contribute at most |a_00|/2, induction on the recurrence gives
    |c_n| <= C rho^n with C fixed by the first n0 coefficients.
    """
    L = f.annihilator
    if L is None:
        raise NoBoundAvailable("no functional equation available")
    a = L.num
    if a[0][0] == 0:
        raise NoBoundAvailable("a_0(0) = 0")
    a00 = _abs_lower(a[0][0])
    rho = Fraction(2)
    while sum(_abs_upper(c) / rho ** j for j, c in enumerate(a[0].coeffs) if j) > a00 / 2:
        rho *= 2
    A1 = sum(_abs_upper(c) for p in a[1:] for c in p.coeffs)
    n0 = _even_safe(A1, rho, a00)
    if f.inhom is not None and not f.inhom.is_zero():
        n0 = max(n0, f.inhom.degree + 1)
    coeffs = f.series.coeffs(n0)
    C = max((_abs_upper(c) / rho ** n for n, c in enumerate(coeffs)), default=Fraction(0))
    return CoefficientBound(C, rho, 0, "equation-derived")


def _even_safe(A1, rho, a00):
    """Least k with A1 * rho^(-floor(k/2)) <= a00/2; the condition persists for larger k."""
    k = 1
    while A1 > a00 / 2 * rho ** (k // 2):
        k += 1
    return k


def coefficient_bound(f):
    """Best available CoefficientBound for f."""
    bound = getattr(f, "bound", None)
    if bound is not None:
        return bound
    automaton = getattr(f, "automaton", None)
    if automaton is not None:
        C = max(_abs_upper(o) for o in automaton.output)
        return CoefficientBound(C, Fraction(1), 0, "automaton")
    if getattr(f, "annihilator", None) is not None and hasattr(f, "q"):
        return equation_bound(f)
    raise NoBoundAvailable(f"no coefficient bound for {getattr(f, 'name', f)!r}")


def _series(f):
    return getattr(f, "series", f)


def _ball(x, width):
    if isinstance(x, NFElem):
        return x.embed(width)
    return ComplexBall(Fraction(x))


def _inflate(b, r):
    return ComplexBall(RealInterval(b.re.lo - r, b.re.hi + r), RealInterval(b.im.lo - r, b.im.hi + r))


def pullback_expression(f, alpha, k):
    """Exact r and c_j with f(alpha) = r + sum_j c_j f(alpha^(q^j)).

    The equation inhom + sum_i a_i f(z^(q^i)) = 0 is unfolded k times; every
    unfolding at level l needs a_0(alpha^(q^l)) != 0. Returns (r, coeffs,
    points) where ``coeffs`` maps the level j to c_j and points[j] is
    alpha^(q^j).
    """
    L = f.annihilator
    if L is None:
        if k == 0:
            return Fraction(0) * alpha, {0: alpha ** 0}, {0: alpha}
        raise PreconditionFailed("pullback needs a functional equation")
    q = f.q
    a = L.num
    m = L.order
    one = alpha ** 0
    r = one * 0
    coeffs = {0: one}
    points = {0: alpha}
    for lev in range(m + k + 1):
        if lev not in points:
            points[lev] = points[lev - 1] ** q
    for lev in range(k):
        x = points[lev]
        a0 = a[0](x)
        if a0 == 0:
            raise OrbitHitsSingularity(f"a_0 vanishes at alpha^(q^{lev})", lev)
        c = coeffs.pop(lev, None)
        if c is None or c == 0:
            continue
        inv = a0.inverse() if isinstance(a0, NFElem) else 1 / a0
        scale = -c * inv
        if f.inhom is not None and not f.inhom.is_zero():
            r = r + scale * f.inhom(x)
        for i in range(1, m + 1):
            coeffs[lev + i] = coeffs.get(lev + i, one * 0) + scale * a[i](x)
    coeffs = {j: c for j, c in coeffs.items() if c != 0}
    return r, coeffs, {j: points[j] for j in coeffs}


@dataclass
class EvalReport:
    ball: ComplexBall
    depth: int
    truncation: int
    bound: CoefficientBound

    @property
    def method(self):
        return f"pullback(k={self.depth},N={self.truncation})" if self.depth else f"direct(N={self.truncation})"

    def to_json(self, point=None):
        d = {"ball": self.ball.to_json(), "method": self.method, "bound": self.bound.describe()}
        if point is not None:
            d["point"] = point
        if self.bound.provenance == "heuristic":
            d["certified"] = False
        return d


def _auto_depth(f, alpha, bound):
    if getattr(f, "annihilator", None) is None or not hasattr(f, "q") or bound.kind == "factorial":
        return 0
    target = min(INNER_RADIUS, 1 / (2 * bound.rho))
    r = _ball(alpha, Fraction(1, 2 ** 64)).abs_upper(96)
    k = 0
    while r > target:
        r = r ** f.q
        if r.denominator.bit_length() > 2048:
            r = Fraction(r.numerator * 2 ** 1024 // r.denominator + 1, 2 ** 1024)
        k += 1
    return k


def _sum_at(series, bound, w, budget, bits):
    """Ball for sum c_n w^n with total error at most ``budget`` beyond rounding."""
    wu = w.abs_upper(bits)
    N = 1
    while True:
        t = bound.tail(N, wu)
        if t is not None and t <= budget:
            break
        N *= 2 if N < 64 else 1
        N += 0 if N < 64 else 32
        if N > 1 << 16:
            raise NoBoundAvailable("series converges too slowly for the requested width")
    # shrink N back while the tail stays within budget
    lo = N // 2
    while lo > 1:
        t = bound.tail(lo, wu)
        if t is None or t > budget:
            break
        N = lo
        lo = N // 2
    t = bound.tail(N, wu)
    coeffs = series.coeffs(N)
    acc = ComplexBall(0)
    for c in reversed(coeffs):
        acc = (acc * w + _ball(c, Fraction(1, 2 ** bits))).round_out(bits)
    return _inflate(acc, t), N


def evaluate(f, alpha, width, depth=None):
    """EvalReport with a ball of width <= ``width`` containing f(alpha)."""
    width = Fraction(width)
    bound = coefficient_bound(f)
    if depth is None:
        depth = _auto_depth(f, alpha, bound)
    if depth == 0:
        r, coeffs, points = 0 * alpha, {0: alpha ** 0}, {0: alpha}
    else:
        r, coeffs, points = pullback_expression(f, alpha, depth)
    series = _series(f)
    bits = max(64, width.denominator.bit_length() - width.numerator.bit_length() + 32)
    for _ in range(8):
        eps = Fraction(1, 2 ** bits)
        total = _ball(r, eps)
        trunc = 0
        for j, c in coeffs.items():
            cb = _ball(c, eps)
            budget = width / (8 * (len(coeffs)) * (cb.abs_upper(64) + 1))
            w = _ball(points[j], eps)
            if w.abs_upper(64) >= 1 and bound.kind != "factorial":
                raise NoBoundAvailable("evaluation point not inside the unit disk")
            s, N = _sum_at(series, bound, w, budget, bits)
            trunc = max(trunc, N)
            total = total + cb * s
        if total.width <= width:
            return EvalReport(total, depth, trunc, bound)
        bits += bits // 2
    raise NoBoundAvailable("could not reach the requested width")


def eval_ball(f, alpha, width, depth=None):
    """Ball of width <= ``width`` containing f(alpha)."""
    return evaluate(f, alpha, width, depth).ball


def check_algebraic_value(f, alpha, candidate, width):
    """'refuted' when f(alpha) certainly differs from ``candidate``, else 'consistent'."""
    b = eval_ball(f, alpha, width)
    c = _ball(candidate, Fraction(width) / 4)
    return "consistent" if b.intersects(c) else "refuted"
