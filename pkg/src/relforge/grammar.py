"""Text grammar for polynomials and rational functions in z.

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" natural)?
    atom   := integer | "t" | "z" | "(" expr ")"

``t`` is the generator of the coefficient number field. Rationals are
written as quotients, e.g. ``3/4``. Printing produces a canonical form that
parses back to the same object.
"""

import re
from fractions import Fraction

from .errors import DivisionByZeroPolynomial, ExpressionSyntaxError, FieldTooSmall
from .numberfield import NFElem, format_univariate

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, field, var):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.field = field
        self.var = var

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ExpressionSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ExpressionSyntaxError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroPolynomial(f"division by zero at position {tok[2]}")
                value = value / rhs
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            value = self.unary()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise ExpressionSyntaxError("exponent must be a natural number", tok[2])
            return base ** int(tok[1])
        return base

    def atom(self):
        from .polyring import Poly, RatFunc
        tok = self.take()
        kind, value, pos = tok
        if kind == "int":
            return RatFunc.of(Poly([Fraction(int(value))], self.field))
        if kind == "name":
            if value == self.var:
                return RatFunc.of(Poly.z(1, self.field))
            if value == "t":
                if self.field is None:
                    raise FieldTooSmall(f"generator t used without a number field (position {pos})")
                return RatFunc.of(Poly([self.field.gen()], self.field))
            raise ExpressionSyntaxError(f"unknown symbol {value!r}", pos)
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", pos)
        raise ExpressionSyntaxError(f"unexpected {value!r}", pos)


def parse_ratfunc(text, field=None, var="z"):
    """Parse to a :class:`RatFunc` (always)."""
    return _Parser(text, field, var).parse()


def parse_expression(text, field=None, var="z"):
    """Parse text to a Poly when the denominator is constant, else a RatFunc."""
    r = parse_ratfunc(text, field, var)
    if r.is_poly():
        return r.num * (1 / r.den.lc() if not isinstance(r.den.lc(), NFElem) else r.den.lc().inverse())
    return r


def parse_univariate(text, var="x"):
    """Ascending rational coefficients of a polynomial in ``var``."""
    p = parse_expression(text, None, var)
    from .polyring import RatFunc
    if isinstance(p, RatFunc):
        raise ExpressionSyntaxError("expected a polynomial", 0)
    return list(p.coeffs)


def parse_scalar(text, field=None):
    """Parse a constant expression (may use t) to a Fraction or NFElem."""
    p = parse_expression(text, field)
    from .polyring import RatFunc
    if isinstance(p, RatFunc) or p.degree > 0:
        raise ExpressionSyntaxError("expected a constant", 0)
    return p[0]


def _coeff_text(c):
    """(sign, body) for a scalar coefficient; body is '' for 1."""
    if isinstance(c, NFElem):
        if c.is_rational():
            c = c.coords[0]
        else:
            nz = [x for x in c.coords if x != 0]
            if len(nz) == 1:
                s = format_univariate(c.coords, "t")
                if s.startswith("-"):
                    return "-", s[1:]
                return "+", s
            return "+", "(" + format_univariate(c.coords, "t") + ")"
    c = Fraction(c)
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if a == 1:
        return sign, ""
    return sign, str(a)


def format_poly(p, var="z"):
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign, body = _coeff_text(c)
        if k == 0:
            text = body or "1"
        else:
            mono = var if k == 1 else f"{var}^{k}"
            text = f"{body}*{mono}" if body else mono
        parts.append((sign, text))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += sign + text
    return out


def _is_atomic(p):
    nz = [c for c in p.coeffs if c != 0]
    return len(nz) == 1


def format_ratfunc(r, var="z"):
    if r.den.degree == 0:
        return format_poly(r.num, var)
    num = format_poly(r.num, var)
    if not _is_atomic(r.num) or "/" in num:
        num = f"({num})"
    den = format_poly(r.den, var)
    if not _is_atomic(r.den) or r.den.coeffs[-1] != 1:
        den = f"({den})"
    return f"{num}/{den}"


def format_coefficient(c, var="z"):
    """Text for a Poly/RatFunc/scalar coefficient."""
    from .polyring import Poly, RatFunc
    if isinstance(c, RatFunc):
        return format_ratfunc(c, var)
    if isinstance(c, Poly):
        return format_poly(c, var)
    if isinstance(c, NFElem):
        return format_univariate(c.coords, "t")
    return str(Fraction(c))


def format_multipoly(m):
    if not m.terms:
        return "0"
    parts = []
    for e in sorted(m.terms, reverse=True):
        c = m.terms[e]
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(m.vars, e) if k)
        ct = format_coefficient(c)
        if mono:
            if ct == "1":
                parts.append(mono)
            elif ct == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({ct})*{mono}")
        else:
            parts.append(f"({ct})" if any(ch in ct[1:] for ch in "+-") else ct)
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


class _MultiParser(_Parser):
    """Same grammar with extra variable names; division only by nonzero constants."""

    def __init__(self, text, field, variables):
        super().__init__(text, field, "z")
        self.variables = tuple(variables)

    def _const(self, c):
        from .polyring import MultiPoly
        return MultiPoly.constant(self.variables, c)

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
                continue
            zero = (0,) * len(self.variables)
            if set(rhs.terms) - {zero}:
                raise ExpressionSyntaxError("division by a non-constant", tok[2])
            c = rhs.terms.get(zero)
            if c is None:
                raise DivisionByZeroPolynomial(f"division by zero at position {tok[2]}")
            if c.degree > 0:
                raise ExpressionSyntaxError("division by a polynomial in z", tok[2])
            inv = c[0].inverse() if isinstance(c[0], NFElem) else 1 / c[0]
            value = value * inv
        return value

    def atom(self):
        from .polyring import MultiPoly, Poly
        tok = self.peek()
        if tok[0] == "name" and tok[1] in self.variables:
            self.take()
            return MultiPoly.var(self.variables, tok[1], Poly([1], self.field))
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        r = super().atom()
        return self._const(r.num)


def parse_multipoly(text, variables, field=None):
    """Parse a polynomial in z and the given variable names to a MultiPoly with Poly coefficients."""
    from .polyring import Poly
    if "z" in variables or "t" in variables:
        raise ExpressionSyntaxError("z and t are reserved names", 0)
    p = _MultiParser(text, field, variables).parse()
    return p.map_coeffs(lambda c: c if isinstance(c, Poly) else Poly([c], field))
