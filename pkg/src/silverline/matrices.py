"""Non-negative integer matrices, companion forms, Perron data and conjugations."""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .errors import (
    IncompatibleFieldError,
    NoDecompositionError,
    NotFoundError,
    PreconditionError,
    SingularError,
    UnsupportedDegreeError,
)
from .numfield import FieldElement, field_sign
from .polynomials import (
    MAX_FACTOR_DEGREE,
    IntPolynomial,
    SilverPolynomial,
    count_real_roots,
    factor,
)
from .reals import AlgebraicReal


class IntMatrix:
    """Square integer matrix; immutable, rows stored as tuples."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *_):
        raise AttributeError("matrices are immutable")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"{type(self).__name__}({[list(r) for r in self.rows]})"

    def tolist(self):
        return [list(r) for r in self.rows]

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.rows for x in r)

    def transpose(self) -> "IntMatrix":
        return _wrap([list(c) for c in zip(*self.rows)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        cols = list(zip(*other.rows))
        return _wrap([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])

    def __add__(self, other):
        return _wrap([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def apply(self, v):
        return [sum((a * x for a, x in zip(r, v)), 0 * v[0]) for r in self.rows]

    def apply_left(self, v):
        """Row vector times matrix."""
        n = self.n
        return [sum((v[i] * self.rows[i][j] for i in range(n)), 0 * v[0]) for j in range(n)]

    def power(self, k: int) -> "IntMatrix":
        result = _wrap(linalg.identity(self.n))
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> int:
        return linalg.det_int(self.rows)

    def to_json(self) -> str:
        return json.dumps([[str(x) for x in r] for r in self.rows])

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return _wrap([[int(x) for x in r] for r in data])


class NonNegIntMatrix(IntMatrix):
    """Integer matrix with every entry >= 0 (checked at construction)."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows)
        if not self.is_nonnegative():
            raise ValueError("non-negative matrix has a negative entry")


def _wrap(rows) -> IntMatrix:
    m = IntMatrix(rows)
    return NonNegIntMatrix(m.rows) if m.is_nonnegative() else m


class CompanionForm(enum.Enum):
    DW = "dw"
    DW_TRANSPOSE = "dwt"
    P = "p"
    P_TRANSPOSE = "pt"


def _cvec(p: IntPolynomial) -> list:
    """c_1..c_N with P = X^N - sum c_j X^{N-j}."""
    if not p.is_monic() or p.degree < 1:
        raise PreconditionError(f"{p} must be monic with degree >= 1")
    n = p.degree
    return [-p[n - j] for j in range(1, n + 1)]


def _as_poly(p) -> IntPolynomial:
    return p.poly if isinstance(p, SilverPolynomial) else p


def companion(p, form: CompanionForm = CompanionForm.DW) -> IntMatrix:
    p = _as_poly(p)
    form = CompanionForm(form)
    c = _cvec(p)
    n = len(c)
    if form in (CompanionForm.DW, CompanionForm.DW_TRANSPOSE):
        rows = [[0] * n for _ in range(n)]
        rows[0] = list(c)
        for i in range(1, n):
            rows[i][i - 1] = 1
    else:
        rows = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i][i + 1] = 1
        rows[n - 1] = list(reversed(c))
    m = _wrap(rows)
    if form in (CompanionForm.DW_TRANSPOSE, CompanionForm.P_TRANSPOSE):
        m = m.transpose()
    return m


# -- graph structure ------------------------------------------------------------------


def _reach(adj, start) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_irreducible_matrix(m: IntMatrix) -> bool:
    """Strong connectivity of the graph with an edge i -> j when m_ij > 0."""
    n = m.n
    fwd = [[j for j in range(n) if m[i, j] > 0] for i in range(n)]
    bwd = [[j for j in range(n) if m[j, i] > 0] for i in range(n)]
    return len(_reach(fwd, 0)) == n and len(_reach(bwd, 0)) == n


def _pattern(m: IntMatrix) -> list:
    """Row bitmasks of the positivity pattern."""
    return [sum(1 << j for j, x in enumerate(r) if x > 0) for r in m.rows]


def _pattern_mul(a: list, b: list) -> list:
    out = []
    for row in a:
        acc, j = 0, 0
        while row:
            if row & 1:
                acc |= b[j]
            row >>= 1
            j += 1
        out.append(acc)
    return out


def pattern_power(m: IntMatrix, k: int) -> list:
    n = m.n
    result = [1 << i for i in range(n)]
    base = _pattern(m)
    while k:
        if k & 1:
            result = _pattern_mul(result, base)
        base = _pattern_mul(base, base)
        k >>= 1
    return result


def primitivity_exponent_bound(n: int) -> int:
    return n * n - 2 * n + 2


def is_primitive(m: IntMatrix) -> bool:
    """Positivity of the pattern of M^(N^2 - 2N + 2), via repeated squaring."""
    if not m.is_nonnegative():
        raise PreconditionError("primitivity is defined for non-negative matrices")
    full = (1 << m.n) - 1
    return all(r == full for r in pattern_power(m, primitivity_exponent_bound(m.n)))


def primitivity_index(m: IntMatrix, limit: int | None = None):
    """Smallest k with M^k entrywise positive, or None up to ``limit``."""
    limit = primitivity_exponent_bound(m.n) if limit is None else limit
    full = (1 << m.n) - 1
    base = _pattern(m)
    cur = base
    for k in range(1, limit + 1):
        if all(r == full for r in cur):
            return k
        cur = _pattern_mul(cur, base)
    return None


def period(m: IntMatrix) -> int:
    """Index of imprimitivity of an irreducible matrix (gcd of cycle lengths).

    Uses BFS levels from vertex 0: the gcd of level[u] + 1 - level[v] over all
    edges u -> v equals the gcd of the return times.
    """
    if not is_irreducible_matrix(m):
        raise PreconditionError("period is defined for irreducible matrices")
    n = m.n
    level = {0: 0}
    queue = [0]
    for u in queue:
        for v in range(n):
            if m[u, v] > 0 and v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    g = 0
    for u in range(n):
        for v in range(n):
            if m[u, v] > 0:
                g = gcd(g, level[u] + 1 - level[v])
    return g


def silver_primitivity_by_gcd(p: SilverPolynomial):
    """(primitive?, d) where d is the gcd of the indices j with b_j = 1."""
    d = 0
    for j in p.indices:
        d = gcd(d, j)
    return d == 1, d


def decompose_nonprimitive(p: SilverPolynomial):
    """Return (Q, d) with P(X) = Q(X^d) and Q's companion primitive."""
    primitive, d = silver_primitivity_by_gcd(p)
    if primitive:
        raise NoDecompositionError(f"{p} already has a primitive companion matrix")
    q = SilverPolynomial(p.bits[d - 1 :: d])
    assert q.poly.substitute_power(d) == p.poly
    return q, d


# -- characteristic polynomial and Perron data ---------------------------------------


def characteristic_polynomial(m: IntMatrix) -> IntPolynomial:
    """det(X I - M) by the Faddeev-LeVerrier recursion (exact)."""
    n = m.n
    a = [[Fraction(x) for x in r] for r in m.rows]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]  # M_0 = 0
    c_prev = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = linalg.mat_mul(a, mk) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        mk = [[am[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        amk = linalg.mat_mul(a, mk)
        c_prev = -sum(amk[i][i] for i in range(n)) / k
        coeffs[n - k] = c_prev
    assert all(c.denominator == 1 for c in coeffs)
    return IntPolynomial(int(c) for c in coeffs)


@dataclass(frozen=True)
class PerronData:
    rho: AlgebraicReal
    right_vector: tuple  # FieldElements, first entry normalised to 1
    left_vector: tuple
    minimal_factor: IntPolynomial
    collatz_wielandt: tuple  # rational (lower, upper) bounds from the iteration

    def right_decimals(self, digits: int = 12):
        return [e.decimal(self.rho, digits) for e in self.right_vector]

    def left_decimals(self, digits: int = 12):
        return [e.decimal(self.rho, digits) for e in self.left_vector]


def collatz_wielandt_bounds(m: IntMatrix, steps: int = 60):
    """Rational bounds min (Mx)_i/x_i <= rho <= max (Mx)_i/x_i along an exact power iteration.

    The iteration runs on M + I, which is primitive whenever M is irreducible,
    so the bounds converge; vectors are kept as integers and rescaled by their
    gcd.
    """
    n = m.n
    x = [1] * n
    shifted = m + _wrap(linalg.identity(n))
    best_lo, best_hi = Fraction(0), None
    for _ in range(steps):
        mx = m.apply(x)
        if all(v > 0 for v in x):
            lo = min(Fraction(a, b) for a, b in zip(mx, x))
            hi = max(Fraction(a, b) for a, b in zip(mx, x))
            best_lo = max(best_lo, lo)
            best_hi = hi if best_hi is None else min(best_hi, hi)
        x = shifted.apply(x)
        g = 0
        for v in x:
            g = gcd(g, v)
        x = [v // g for v in x]
    return best_lo, best_hi


def _isolate_largest_root(p: IntPolynomial, lo: Fraction, hi: Fraction):
    """Interval (a, b] holding exactly the largest real root of ``p`` inside (lo, hi]."""
    a, b = lo, hi
    while count_real_roots(p, a, b) > 1:
        mid = (a + b) / 2
        if count_real_roots(p, mid, b) >= 1:
            a = mid
        else:
            b = mid
    return a, b


def perron(m: IntMatrix, width=Fraction(1, 10**20)) -> PerronData:
    """Certified spectral radius and exact positive eigenvectors of an irreducible matrix."""
    if not m.is_nonnegative():
        raise PreconditionError("Perron data need a non-negative matrix")
    if not is_irreducible_matrix(m):
        raise PreconditionError("Perron data need an irreducible matrix")
    lo, hi = collatz_wielandt_bounds(m)
    chi = characteristic_polynomial(m)
    if chi.degree > MAX_FACTOR_DEGREE:
        raise UnsupportedDegreeError(f"matrix size {m.n} exceeds the factorisation cap")
    factors = sorted(set(factor(chi)), key=lambda f: f.coeffs)
    # rho is the largest real root of chi, and it lies in [lo, hi]
    lo_open = lo - Fraction(1, 10**6)
    squarefree = IntPolynomial([1])
    for f in factors:
        squarefree = squarefree * f
    a, b = _isolate_largest_root(squarefree, lo_open, hi)
    owner = next(f for f in factors if count_real_roots(f, a, b) == 1)
    if owner.degree == 1:
        value = Fraction(-owner[0])
        rho = AlgebraicReal(owner, value - width / 2, value + width / 2)
    else:
        rho = AlgebraicReal(owner, a, b).refine(width)
    one = FieldElement.from_int(owner, 1)
    r = FieldElement.generator(owner)
    shifted = [[one * x - (r if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(m.rows)]
    right = _positive_kernel_vector(shifted, one, rho)
    left = _positive_kernel_vector(linalg.transpose(shifted), one, rho)
    return PerronData(rho, tuple(right), tuple(left), owner, (lo, hi))


def _positive_kernel_vector(a, one, rho):
    kernel = linalg.nullspace(a, one)
    if len(kernel) != 1:
        raise AssertionError("Perron eigenvalue must be simple")
    v = kernel[0]
    v = [x / v[0] for x in v]
    if any(field_sign(x, rho) <= 0 for x in v):
        raise AssertionError("Perron vector must be strictly positive")
    return v


def companion_perron_vectors(p, form: CompanionForm, rho: FieldElement):
    """Closed-form right eigenvectors of the four companion forms.

    DW: (rho^{N-1}, ..., rho, 1); P: (1/rho^{N-1}, ..., 1/rho, 1);
    P^tr: T times the P vector; DW^tr: the P^tr vector reversed.
    Returned unnormalised, as FieldElements in Q(rho).
    """
    p = _as_poly(p)
    form = CompanionForm(form)
    n = p.degree
    if form is CompanionForm.DW:
        return [rho ** (n - 1 - i) for i in range(n)]
    vp = [rho ** (-(n - 1 - i)) for i in range(n)]
    if form is CompanionForm.P:
        return vp
    t = conjugation_T(p)
    vpt = [sum((t[i, j] * vp[j] for j in range(n)), 0 * rho) for i in range(n)]
    if form is CompanionForm.P_TRANSPOSE:
        return vpt
    return list(reversed(vpt))


# -- conjugations -------------------------------------------------------------------------


def conjugation_T(p) -> IntMatrix:
    """The anti-triangular matrix T with T C_P = C_P^tr T."""
    p = _as_poly(p)
    c = _cvec(p)
    n = len(c)
    if c[-1] == 0:
        raise SingularError("constant coefficient is zero; T would be singular")
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        for j in range(1, n):
            if i + j >= n:
                rows[i - 1][j - 1] = c[2 * n - i - j - 1]
    rows[n - 1][n - 1] = 1
    t = IntMatrix(rows)
    cp = companion(p, CompanionForm.P)
    assert t @ cp == cp.transpose() @ t
    return _wrap(rows)


def _candidates(n: int, budget: int):
    seen = 0
    for i in range(n):
        yield [1 if k == i else 0 for k in range(n)]
        seen += 1
    for i in range(n):
        for j in range(i + 1, n):
            if seen >= budget:
                return
            yield [1 if k in (i, j) else 0 for k in range(n)]
            seen += 1
    # small non-negative combinations with entries up to 2
    for vec in itertools.product(range(3), repeat=n):
        if seen >= budget:
            return
        if max(vec) == 2:
            yield list(vec)
            seen += 1


def krylov_W(a: IntMatrix, direction: str = "row"):
    """Krylov matrix with W A = C_P W (row) or A W = W C_P^tr (column).

    Returns (W, u) for the first non-negative integer u in the deterministic
    search order (basis vectors, pair sums, entries <= 2) whose Krylov
    matrix is invertible; the budget is 2 N^2 candidates.
    """
    if direction not in ("row", "column"):
        raise ValueError("direction must be 'row' or 'column'")
    n = a.n
    chi = characteristic_polynomial(a)
    cp = companion(chi, CompanionForm.P)
    budget = 2 * n * n
    src = a.transpose() if direction == "row" else a
    for u in _candidates(n, budget):
        vecs = [u]
        for _ in range(n - 1):
            vecs.append(src.apply(vecs[-1]))
        w = IntMatrix(vecs) if direction == "row" else IntMatrix(list(zip(*vecs)))
        if w.det() == 0:
            continue
        if direction == "row":
            assert w @ a == cp @ w
        else:
            assert a @ w == w @ cp.transpose()
        return _wrap(w.rows), tuple(u)
    raise NotFoundError(f"no Krylov vector found among {budget} candidates", budget=budget)


def intertwiner(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Non-negative integer M = W_hat(B) T W(A), invertible, with B M = M A."""
    chi_a, chi_b = characteristic_polynomial(a), characteristic_polynomial(b)
    if chi_a != chi_b:
        raise IncompatibleFieldError(f"characteristic polynomials differ: {chi_a} vs {chi_b}")
    if chi_a[0] == 0:
        raise SingularError("b_N must be nonzero")
    if any(c < 0 for c in _cvec(chi_a)):
        raise PreconditionError("characteristic polynomial must have the form X^N - sum b_j X^(N-j), b_j >= 0")
    w, _ = krylov_W(a, "row")
    w_hat, _ = krylov_W(b, "column")
    t = conjugation_T(chi_a)
    m = w_hat @ t @ w
    assert b @ m == m @ a
    assert m.det() != 0
    return m
