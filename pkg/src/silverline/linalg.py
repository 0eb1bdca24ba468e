"""Small exact linear algebra over any field whose elements support + - * /.

Entries may be ``Fraction`` or ``FieldElement``; ints are promoted on the fly
by the arithmetic of the element types themselves.
"""
from __future__ import annotations

from fractions import Fraction


def _is_zero(x) -> bool:
    return x == 0


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = a[i]
        out.append([sum((row[k] * b[k][j] for k in range(m) if row[k] != 0), 0 * b[0][j]) for j in range(p)])
    return out


def mat_vec(a, v):
    return [sum((row[k] * v[k] for k in range(len(v))), 0 * v[0]) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def rref(a, one=Fraction(1)):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [[x * one for x in r] for r in a]
    if not rows:
        return rows, []
    n, m = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if not _is_zero(rows[i][c])), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows, pivots


def rank(a, one=Fraction(1)) -> int:
    return len(rref(a, one)[1])


def nullspace(a, one=Fraction(1)):
    """Basis of {x : a x = 0}, one vector per free column."""
    m = len(a[0])
    rows, pivots = rref(a, one)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [0 * one for _ in range(m)]
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        basis.append(v)
    return basis


def solve(a, b, one=Fraction(1)):
    """Unique solution of ``a x = b`` (raises ValueError if singular)."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    rows, pivots = rref(aug, one)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [rows[i][n] for i in range(n)]


def inverse(a, one=Fraction(1)):
    n = len(a)
    aug = [list(a[i]) + [one if i == j else 0 * one for j in range(n)] for i in range(n)]
    rows, pivots = rref(aug, one)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [r[n:] for r in rows]


def det_int(a) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    m = [list(map(int, r)) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
