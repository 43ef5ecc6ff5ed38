"""Certified isolation of the complex roots of a squarefree polynomial.

Roots are first approximated with mpmath, then each approximation is
certified by a Krawczyk test on a square box: if the Krawczyk image lies in
the interior of the box and the Newton-like map contracts, the box contains
exactly one root. Boxes are pairwise disjoint, so a degree-n polynomial with
n certified boxes has all of its roots accounted for.
"""

from fractions import Fraction

import mpmath

from .balls import ComplexBall, RealInterval
from .errors import RelforgeError


class RootIsolationFailed(RelforgeError):
    pass


def mpf_to_fraction(x):
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    sign, m, e, _ = x._mpf_
    m = -int(m) if sign else int(m)
    e = int(e)
    if e >= 0:
        return Fraction(m * 2 ** e)
    return Fraction(m, 2 ** -e)


def _coeff_ball(c, width):
    if isinstance(c, (int, Fraction)):
        return ComplexBall(Fraction(c))
    return c.embed(width)


def _coeff_mp(c, width):
    b = _coeff_ball(c, width)
    re = mpmath.mpf(b.re.mid.numerator) / b.re.mid.denominator
    im = mpmath.mpf(b.im.mid.numerator) / b.im.mid.denominator
    return mpmath.mpc(re, im)


def _horner_ball(coeffs, z):
    acc = ComplexBall(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _derivative(coeffs):
    return [c * k for k, c in enumerate(coeffs)][1:]


def _krawczyk(cballs, dballs, center, radius):
    """Return True if the box ``center +/- radius`` provably holds exactly one root."""
    cx, cy = center
    z0 = ComplexBall(cx, cy)
    box = ComplexBall.around(cx, cy, radius)
    p0 = _horner_ball(cballs, z0)
    dp0 = _horner_ball(dballs, z0)
    try:
        y = ComplexBall(*dp0.center).inverse()
    except ZeroDivisionError:
        return False
    y = ComplexBall(y.re.mid, y.im.mid)
    dpb = _horner_ball(dballs, box)
    contraction = ComplexBall(1) - y * dpb
    if contraction.abs_upper() >= 1:
        return False
    k = z0 - y * p0 + contraction * (box - z0)
    inner = ComplexBall.around(cx, cy, radius)
    return (inner.re.lo < k.re.lo and k.re.hi < inner.re.hi
            and inner.im.lo < k.im.lo and k.im.hi < inner.im.hi)


def _mp_roots(coeffs, dps):
    with mpmath.workdps(dps):
        cs = [_coeff_mp(c, Fraction(1, 2 ** (4 * dps))) for c in reversed(coeffs)]
        for steps in (100, 400, 2000):
            try:
                return [mpmath.mpc(r) for r in mpmath.polyroots(cs, maxsteps=steps, extraprec=4 * dps)]
            except mpmath.libmp.NoConvergence:
                continue
    raise RootIsolationFailed("numeric root finder did not converge")


def _newton(coeffs, z, dps, iters=8):
    with mpmath.workdps(dps):
        cs = [_coeff_mp(c, Fraction(1, 2 ** (4 * dps))) for c in coeffs]
        ds = [cs[k] * k for k in range(1, len(cs))]
        for _ in range(iters):
            p = mpmath.polyval(list(reversed(cs)), z)
            dp = mpmath.polyval(list(reversed(ds)), z)
            if dp == 0:
                break
            z = z - p / dp
        return z


def _key(root):
    arg = mpmath.arg(root)
    if arg <= -mpmath.pi:
        arg = mpmath.pi
    return (float(arg) if abs(arg) > 1e-30 else 0.0, float(abs(root)))


class IsolatedRoot:
    """A complex root of a fixed polynomial held by a certified isolating box."""

    def __init__(self, coeffs, approx, box):
        self._coeffs = coeffs
        self.approx = approx
        self.box = box

    def __repr__(self):
        return f"IsolatedRoot({self.box!r})"

    def refine(self, width):
        """Return a certified box of width <= ``width`` inside the current box."""
        width = Fraction(width)
        if self.box.width <= width:
            return self.box
        digits = max(30, int(-mpmath.log10(mpmath.mpf(width.numerator) / width.denominator)) + 30)
        z = _newton(self._coeffs, self.approx, digits)
        cx = mpf_to_fraction(z.real)
        cy = mpf_to_fraction(z.imag)
        r = width / 2
        cballs = [_coeff_ball(c, Fraction(1, 10 ** (2 * digits))) for c in self._coeffs]
        dballs = [_coeff_ball(c, Fraction(1, 10 ** (2 * digits))) for c in _derivative(self._coeffs)]
        for _ in range(6):
            cand = ComplexBall.around(cx, cy, r)
            if self.box.contains(cand) and _krawczyk(cballs, dballs, (cx, cy), r):
                self.box = cand
                self.approx = z
                return cand
            r /= 2
        raise RootIsolationFailed("could not refine root box")


def isolate_roots(coeffs, dps=60):
    """Certified isolating boxes for all roots of a squarefree polynomial.

    ``coeffs`` is ascending; entries are rationals or number-field elements
    (anything with ``embed(width)``). Returned list is sorted by argument in
    (-pi, pi], then by modulus.
    """
    coeffs = list(coeffs)
    n = len(coeffs) - 1
    if n < 1:
        return []
    approx = _mp_roots(coeffs, dps)
    approx.sort(key=_key)
    cballs = [_coeff_ball(c, Fraction(1, 10 ** (2 * dps))) for c in coeffs]
    dballs = [_coeff_ball(c, Fraction(1, 10 ** (2 * dps))) for c in _derivative(coeffs)]
    out = []
    for i, z in enumerate(approx):
        sep = min((abs(z - w) for j, w in enumerate(approx) if j != i), default=mpmath.mpf(1))
        if sep == 0:
            raise RootIsolationFailed("polynomial is not squarefree")
        cx = mpf_to_fraction(z.real)
        cy = mpf_to_fraction(z.imag)
        r = min(mpf_to_fraction(sep) / 4, Fraction(1, 10 ** 20) * (1 + abs(cx) + abs(cy)))
        for _ in range(40):
            if _krawczyk(cballs, dballs, (cx, cy), r):
                break
            r /= 4
        else:
            raise RootIsolationFailed(f"Krawczyk test failed near {mpmath.nstr(z, 15)}")
        out.append(IsolatedRoot(coeffs, z, ComplexBall.around(cx, cy, r)))
    for i in range(n):
        for j in range(i + 1, n):
            if out[i].box.intersects(out[j].box):
                raise RootIsolationFailed("isolating boxes overlap")
    return out


def modulus_vs_radius(root, radius, max_refine=12):
    """Compare |root| with ``radius``: returns -1 (inside), +1 (outside).

    Returns None if refinement cannot separate them (modulus equal to radius,
    or extremely close).
    """
    radius = Fraction(radius)
    w = root.box.width
    for _ in range(max_refine):
        b = root.box
        if b.abs_upper(bits=128) < radius:
            return -1
        if b.abs_lower(bits=128) > radius:
            return 1
        w = w / 2 ** 16
        try:
            root.refine(w)
        except RootIsolationFailed:
            return None
    return None


def real_interval_of(ball):
    return RealInterval(ball.re.lo, ball.re.hi)
