"""Multiplication kernels for integer and rational coefficient lists.

Kronecker substitution packs a coefficient list into one big integer, so a
single CPython bignum product replaces the quadratic double loop.
"""

from fractions import Fraction
from math import gcd, lcm

_KRONECKER_MIN = 24


def _pack(coeffs, k):
    # little-endian signed digits in base 2**k
    acc = 0
    for c in reversed(coeffs):
        acc = (acc << k) + c
    return acc


def _unpack(value, k, n):
    nbytes = (k * n + 7) // 8 + 1
    raw = (value % (1 << (8 * nbytes))).to_bytes(nbytes, "little")
    kb = k // 8
    half = 1 << (k - 1)
    full = 1 << k
    out = []
    carry = 0
    for i in range(n):
        v = int.from_bytes(raw[i * kb:(i + 1) * kb], "little") + carry
        if v >= half:
            v -= full
            carry = 1
        else:
            carry = 0
        out.append(v)
    return out


def mul_int(a, b):
    """Product of two integer coefficient lists (ascending)."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_MIN:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bound = ma * mb * min(len(a), len(b))
    k = bound.bit_length() + 2
    k = (k + 7) // 8 * 8
    return _unpack(_pack(a, k) * _pack(b, k), k, len(a) + len(b) - 1)


def _clear(coeffs):
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def mul_frac(a, b):
    """Product of two Fraction coefficient lists (ascending)."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_MIN:
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return out
    ia, da = _clear(a)
    ib, db = _clear(b)
    d = da * db
    prod = mul_int(ia, ib)
    out = []
    for c in prod:
        g = gcd(c, d)
        out.append(Fraction(c // g, d // g) if g != 1 else Fraction(c, d))
    return out


def mul_generic(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def mul_any(a, b):
    """Dispatch on coefficient type; falls back to the schoolbook product."""
    if not a or not b:
        return []
    if all(type(x) is Fraction for x in a) and all(type(x) is Fraction for x in b):
        return mul_frac(a, b)
    if all(type(x) is int for x in a) and all(type(x) is int for x in b):
        return mul_int(a, b)
    return mul_generic(a, b, Fraction(0))


def mul_trunc(a, b, n):
    """Product truncated to the first n coefficients."""
    return mul_any(a[:n], b[:n])[:n]
