"""Exact linear algebra over any field whose elements support + - * / and truth testing.

Works for Fraction, NFElem and RatFunc entries alike.
"""

from fractions import Fraction


class Echelon:
    """Incrementally maintained row echelon form.

    Rows are added one at a time; each is reduced against the current pivots
    and kept only if it is independent. ``full_rank`` tells callers when
    further rows cannot change the row space.
    """

    def __init__(self, ncols, one=Fraction(1)):
        self.ncols = ncols
        self.one = one
        self.rows = {}  # pivot column -> row with 1 at the pivot

    @property
    def rank(self):
        return len(self.rows)

    def full_rank(self):
        return len(self.rows) == self.ncols

    def add(self, row):
        """Reduce ``row`` and insert it; returns True when the rank increased."""
        row = list(row)
        for col in range(self.ncols):
            c = row[col]
            if not c:
                continue
            piv = self.rows.get(col)
            if piv is None:
                inv = 1 / c if not hasattr(c, "inverse") else c.inverse()
                row = [x * inv if x else x for x in row]
                row[col] = self.one
                self.rows[col] = row
                return True
            for k in range(col, self.ncols):
                p = piv[k]
                if p:
                    row[k] = row[k] - c * p
        return False

    def rref(self):
        """Reduced echelon rows sorted by pivot column."""
        cols = sorted(self.rows)
        rows = {c: list(self.rows[c]) for c in cols}
        for c in reversed(cols):
            r = rows[c]
            for c2 in cols:
                if c2 >= c:
                    break
                r2 = rows[c2]
                f = r2[c]
                if f:
                    for k in range(c, self.ncols):
                        if r[k]:
                            r2[k] = r2[k] - f * r[k]
        return [rows[c] for c in cols], cols

    def nullspace(self, zero=Fraction(0)):
        """Basis of the right kernel; each vector has a 1 at its free column."""
        rows, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in set(pivots)]
        basis = []
        for f in free:
            v = [zero] * self.ncols
            v[f] = self.one
            for r, p in zip(rows, pivots):
                if r[f]:
                    v[p] = -r[f]
            basis.append(v)
        return basis


def nullspace(matrix, ncols=None, zero=Fraction(0), one=Fraction(1)):
    """Right kernel of a list of rows."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    e = Echelon(ncols, one)
    for row in matrix:
        e.add(row)
        if e.full_rank():
            return []
    return e.nullspace(zero)


def rank(matrix, ncols=None, one=Fraction(1)):
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    e = Echelon(ncols, one)
    for row in matrix:
        e.add(row)
    return e.rank


def det(matrix, one=Fraction(1)):
    """Determinant by Gaussian elimination."""
    n = len(matrix)
    a = [list(r) for r in matrix]
    result = one
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            return one - one
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        inv = 1 / p if not hasattr(p, "inverse") else p.inverse()
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f = f * inv
                for k in range(col, n):
                    if a[col][k]:
                        a[r][k] = a[r][k] - f * a[col][k]
    return result


def inverse(matrix, one=Fraction(1)):
    """Matrix inverse by Gauss-Jordan; raises ZeroDivisionError when singular."""
    n = len(matrix)
    zero = one - one
    a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(matrix)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        inv = 1 / p if not hasattr(p, "inverse") else p.inverse()
        a[col] = [x * inv if x else x for x in a[col]]
        for r in range(n):
            if r != col:
                f = a[r][col]
                if f:
                    a[r] = [x - f * y if y else x for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def matmul(a, b, zero=Fraction(0)):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = zero
            for k in range(m):
                x, y = a[i][k], b[k][j]
                if x and y:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out
