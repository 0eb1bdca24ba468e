"""Integer polynomials, silver polynomials, Sturm sequences and factorisation.

Coefficients are stored lowest degree first everywhere.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Iterable, Sequence

import mpmath

from .errors import InvalidDegreeError, PreconditionError, UnsupportedDegreeError

MAX_FACTOR_DEGREE = 12


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple

    def __init__(self, coeffs: Iterable[int]):
        cs = _trim(int(c) for c in coeffs)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * n + [c])

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        # zero polynomial gets degree -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[k] + other[k] for k in range(n))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        out = IntPolynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod_monic(self, divisor: "IntPolynomial"):
        """Exact division with remainder by a monic integer polynomial."""
        if not divisor.is_monic():
            raise PreconditionError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if len(rem) - 1 < d:
            return IntPolynomial([]), self
        quot = [0] * (len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c:
                quot[k - d] = c
                for j, b in enumerate(divisor.coeffs):
                    rem[k - d + j] -= c * b
        return IntPolynomial(quot), IntPolynomial(rem)

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def substitute_power(self, d: int) -> "IntPolynomial":
        """Return ``P(X**d)``."""
        out = [0] * (d * self.degree + 1)
        for k, c in enumerate(self.coeffs):
            out[d * k] = c
        return IntPolynomial(out)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = _gcd(g, c)
        return g

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text) -> "IntPolynomial":
        data = json.loads(text) if isinstance(text, str) else text
        return cls(int(c) for c in data)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


# -- rational polynomial helpers (lists of Fractions, lowest first) ------------


def _qrem(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    a = _trim(Fraction(c) for c in a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lead
        shift = len(a) - len(b)
        for j, c in enumerate(b):
            a[shift + j] -= f * c
        a = _trim(a)
    return a


def _qgcd(a, b) -> list:
    a, b = _trim(Fraction(c) for c in a), _trim(Fraction(c) for c in b)
    while b:
        a, b = b, _qrem(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def is_square_free(p: IntPolynomial) -> bool:
    return len(_qgcd(p.coeffs, p.derivative().coeffs)) <= 1


@lru_cache(maxsize=256)
def _sturm_chain(coeffs: tuple) -> tuple:
    p0 = [Fraction(c) for c in coeffs]
    p1 = [Fraction(k * c) for k, c in enumerate(coeffs) if k]
    chain = [p0, p1]
    while True:
        r = _qrem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return tuple(tuple(p) for p in chain)


def _eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_changes(chain, x) -> int:
    signs = [s for s in (_eval(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def count_real_roots(p: IntPolynomial, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(lo, hi]``."""
    chain = _sturm_chain(p.coeffs)
    return _sign_changes(chain, Fraction(lo)) - _sign_changes(chain, Fraction(hi))


def count_roots_closed(p: IntPolynomial, lo, hi) -> int:
    """Distinct real roots in ``[lo, hi]``."""
    extra = 1 if p(Fraction(lo)) == 0 else 0
    return count_real_roots(p, lo, hi) + extra


def cauchy_bound(p: IntPolynomial) -> int:
    lead = abs(p.leading)
    return 1 + max((abs(c) for c in p.coeffs[:-1]), default=0) // lead + 1


# -- silver polynomials ---------------------------------------------------------


@dataclass(frozen=True)
class SilverPolynomial:
    """``X^N - sum_j b_j X^{N-j}`` with bits ``b_1..b_N`` in {0, 1}."""

    bits: tuple

    def __init__(self, bits: Iterable[int]):
        bits = tuple(int(b) for b in bits)
        if len(bits) < 2:
            raise InvalidDegreeError(f"silver polynomials have degree >= 2, got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("silver bits must be 0 or 1")
        if bits[-1] != 1:
            raise ValueError("b_N must equal 1")
        if sum(bits) < 2:
            raise ValueError("at least two bits must be set")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, s: str) -> "SilverPolynomial":
        return cls(int(ch) for ch in s.strip())

    @classmethod
    def distinguished(cls, n: int) -> "SilverPolynomial":
        return cls([1] * n)

    @classmethod
    def from_poly(cls, p: IntPolynomial) -> "SilverPolynomial":
        if not p.is_monic():
            raise ValueError(f"{p} is not monic")
        n = p.degree
        return cls(-p[n - j] for j in range(1, n + 1))

    @property
    def degree(self) -> int:
        return len(self.bits)

    @property
    def indices(self) -> tuple:
        """Labels ``j`` with ``b_j = 1``."""
        return tuple(j for j, b in enumerate(self.bits, start=1) if b)

    @property
    def is_distinguished(self) -> bool:
        return all(self.bits)

    @property
    def poly(self) -> IntPolynomial:
        n = self.degree
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for j, b in enumerate(self.bits, start=1):
            coeffs[n - j] -= b
        return IntPolynomial(coeffs)

    def __str__(self) -> str:
        return str(self.poly)


def enumerate_silver_polynomials(n: int) -> list:
    """All silver polynomials of degree ``n`` in lexicographic order of ``(b_1..b_N)``."""
    if n < 2:
        raise InvalidDegreeError(f"degree must be >= 2, got {n}")
    out = []
    for head in itertools.product((0, 1), repeat=n - 1):
        if any(head):
            out.append(SilverPolynomial(head + (1,)))
    return out


# -- factorisation ---------------------------------------------------------------


def mignotte_bound(p: IntPolynomial, k: int, j: int) -> int:
    """Bound on |coefficient j| of any integer factor of degree ``k``."""
    norm2 = isqrt(sum(c * c for c in p.coeffs)) + 1
    return comb(k, j) * norm2


def _numeric_roots(p: IntPolynomial, dps: int = 60):
    with mpmath.workdps(dps):
        return mpmath.polyroots(
            [int(c) for c in reversed(p.coeffs)], maxsteps=400, extraprec=4 * dps
        )


def _find_factor(p: IntPolynomial):
    """Smallest-degree monic integer factor of the monic ``p`` (or None)."""
    n = p.degree
    if p[0] == 0:
        return IntPolynomial([0, 1])
    roots = _numeric_roots(p)
    with mpmath.workdps(60):
        for k in range(1, n // 2 + 1):
            for subset in itertools.combinations(range(n), k):
                prod = [mpmath.mpc(1)]
                for i in subset:
                    r = roots[i]
                    nxt = [mpmath.mpc(0)] * (len(prod) + 1)
                    for t, c in enumerate(prod):
                        nxt[t + 1] += c
                        nxt[t] -= c * r
                    prod = nxt
                cand = []
                ok = True
                for j, c in enumerate(prod):
                    if abs(c.imag) > mpmath.mpf(10) ** -20:
                        ok = False
                        break
                    ci = int(mpmath.nint(c.real))
                    if abs(c.real - ci) > mpmath.mpf(10) ** -20 or abs(ci) > mignotte_bound(p, k, j):
                        ok = False
                        break
                    cand.append(ci)
                if not ok:
                    continue
                q = IntPolynomial(cand)
                _, r = p.divmod_monic(q)
                if r.is_zero():
                    return q
    return None


@lru_cache(maxsize=1024)
def _factor_cached(coeffs: tuple, max_degree: int) -> tuple:
    p = IntPolynomial(coeffs)
    if p.degree > max_degree:
        raise UnsupportedDegreeError(
            f"degree {p.degree} exceeds the factorisation cap {max_degree}"
        )
    if p.degree <= 1:
        return (p,)
    f = _find_factor(p)
    if f is None:
        return (p,)
    q, r = p.divmod_monic(f)
    assert r.is_zero()
    return tuple(sorted(_factor_cached(f.coeffs, max_degree) + _factor_cached(q.coeffs, max_degree),
                        key=lambda g: (g.degree, g.coeffs)))


def factor(p: IntPolynomial, max_degree: int = MAX_FACTOR_DEGREE) -> list:
    """Monic irreducible factors of a monic integer polynomial, with multiplicity.

    Candidate factors are products over subsets of numerically isolated roots;
    every candidate is confirmed by exact division, so a returned factorisation
    is always exact.
    """
    if not p.is_monic():
        raise PreconditionError(f"{p} is not monic")
    if p.degree < 1:
        raise InvalidDegreeError("factorisation needs degree >= 1")
    return list(_factor_cached(p.coeffs, max_degree))


def is_irreducible(p: IntPolynomial, max_degree: int = MAX_FACTOR_DEGREE) -> bool:
    return len(factor(p, max_degree)) == 1


def is_distinguished_poly(p: IntPolynomial) -> bool:
    try:
        return SilverPolynomial.from_poly(p).is_distinguished
    except ValueError:
        return False
