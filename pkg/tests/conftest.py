import re
from fractions import Fraction
from itertools import product

import pytest

from relforge.corpus import Workspace
from relforge.linalg import rank
from relforge.polyring import MultiPoly


def digits(n, base):
    out = []
    while n:
        out.append(n % base)
        n //= base
    return out


def tm3_term(n):
    """Parity of the number of digits 2 in base 3."""
    return digits(n, 3).count(2) % 2


def baum_sweet_term(n):
    """1 iff every maximal run of zeros in binary has even length; n = 0 counts as the empty word."""
    runs = re.findall("0+", bin(n)[2:]) if n else []
    return int(all(len(r) % 2 == 0 for r in runs))


def rudin_shapiro_term(n):
    """(-1)^(number of overlapping occurrences of 11 in binary)."""
    b = bin(n)[2:] if n else ""
    count = sum(1 for i in range(len(b) - 1) if b[i:i + 2] == "11")
    return (-1) ** count


@pytest.fixture(scope="session")
def ws():
    return Workspace()


def brute_force_ideal_span(gens, variables, degree):
    """Rational row space of multiples m*g with deg(m*g) <= degree."""
    monos = [e for e in product(range(degree + 1), repeat=len(variables)) if sum(e) <= degree]
    rows = []
    for g in gens:
        for e in monos:
            m = MultiPoly(variables, {e: Fraction(1)}) * g
            if m.total_degree() <= degree:
                rows.append(m)
    return monos, rows


def in_span(target, rows, monos):
    vec = lambda p: [p.terms.get(e, Fraction(0)) for e in monos]
    base = [vec(r) for r in rows]
    return rank(base + [vec(target)], len(monos)) == rank(base, len(monos))
