"""sigma-integers: bit representations, normal forms, ordering and successors.

A representation stores its bits highest power first, so ``(1, 0, 1)`` is
sigma^2 + 1.  Leading zeros are trimmed; the empty tuple is the integer 0,
whose degree is -infinity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterator, Sequence

import numpy as np

from .errors import PreconditionError
from .numfield import FieldElement, field_sign
from .polynomials import IntPolynomial, SilverPolynomial
from .reals import AlgebraicReal

NEG_INF = float("-inf")


@dataclass(frozen=True)
class SigmaIntRep:
    bits: tuple

    def __init__(self, bits: Sequence[int] = ()):
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("sigma-integer bits must be 0 or 1")
        k = 0
        while k < len(bits) and bits[k] == 0:
            k += 1
        object.__setattr__(self, "bits", bits[k:])

    @classmethod
    def from_string(cls, s: str) -> "SigmaIntRep":
        s = s.strip()
        return cls(()) if s in ("", "0") else cls(int(ch) for ch in s)

    @property
    def degree(self):
        return len(self.bits) - 1 if self.bits else NEG_INF

    @property
    def is_empty(self) -> bool:
        return not self.bits

    def bit(self, d: int) -> int:
        """Coefficient of sigma^d."""
        n = len(self.bits) - 1
        return self.bits[n - d] if 0 <= d <= n else 0

    def __str__(self) -> str:
        return "".join(map(str, self.bits)) if self.bits else "0"

    def __len__(self) -> int:
        return len(self.bits)


EMPTY = SigmaIntRep(())


class NormalForm(SigmaIntRep):
    """A representation in which no N consecutive bits are all ones."""

    def __init__(self, bits: Sequence[int] = (), N: int = 2):
        super().__init__(bits)
        if N < 2:
            raise PreconditionError("window N must be >= 2")
        object.__setattr__(self, "N", N)
        if not is_normal_form(self, N):
            raise PreconditionError(f"{self} is not in normal form for N={N}")

    def __eq__(self, other):
        if isinstance(other, NormalForm):
            return self.bits == other.bits and self.N == other.N
        return NotImplemented

    def __hash__(self):
        return hash((self.bits, self.N))

    def __repr__(self):
        return f"NormalForm('{self}', N={self.N})"


def _bits_of(rep) -> tuple:
    return rep.bits if isinstance(rep, SigmaIntRep) else SigmaIntRep(rep).bits


def _modulus(base) -> IntPolynomial:
    if isinstance(base, AlgebraicReal):
        return base.defining
    if isinstance(base, SilverPolynomial):
        return base.poly
    return base


def value_of(rep, base) -> FieldElement:
    """Exact value sum c_i sigma^{n-i} in Q(sigma); ``base`` is a root, polynomial or modulus."""
    bits = _bits_of(rep)
    mod = _modulus(base)
    return FieldElement.from_poly(mod, list(reversed(bits)) or [0])


def value_interval(rep, root: AlgebraicReal, width=Fraction(1, 10**30)):
    """Rational enclosure of the value; works for reducible defining polynomials too."""
    bits = _bits_of(rep)
    r = root.refine(width)
    lo = hi = Fraction(0)
    for b in bits:
        lo, hi = lo * r.lo, hi * r.hi
        lo += b
        hi += b
    return lo, hi


def inflate(rep) -> SigmaIntRep:
    """Multiplication by sigma: append a zero bit."""
    bits = _bits_of(rep)
    out = bits + (0,) if bits else ()
    if isinstance(rep, NormalForm):
        return NormalForm(out, rep.N)
    return SigmaIntRep(out)


def is_normal_form(rep, N: int) -> bool:
    if N < 2:
        raise PreconditionError("window N must be >= 2")
    run = 0
    for b in _bits_of(rep):
        run = run + 1 if b else 0
        if run >= N:
            return False
    return True


def _from_degrees(terms: dict) -> tuple:
    """Bits tuple from a {degree: bit} mapping."""
    if not terms:
        return ()
    top = max(terms)
    return tuple(terms.get(d, 0) for d in range(top, -1, -1))


def _normalize(bits: tuple, N: int) -> tuple:
    k0 = 0
    while k0 < len(bits) and bits[k0] == 0:
        k0 += 1
    bits = bits[k0:]
    if not bits:
        return ()
    n = len(bits) - 1
    run, k = 0, None
    for i, b in enumerate(bits):
        run = run + 1 if b else 0
        if run == N:
            k = i - N + 1
            break
    if k is None:
        return bits
    # sigma^{n-k} + ... + sigma^{n-k-N+1} = sigma^{n-k+1}
    tail = _normalize(bits[k + N :], N)
    if k == 0:
        head = (1,)
    else:
        head = _normalize(bits[: k - 1] + (1,), N)
    shift = n - k + 1  # degree of the new top coefficient of the head
    terms = {}
    hdeg = len(head) - 1
    for i, b in enumerate(head):
        if b:
            terms[shift + hdeg - i] = 1
    tdeg = len(tail) - 1
    for i, b in enumerate(tail):
        if b:
            terms[tdeg - i] = 1
    out = _from_degrees(terms)
    return out


def to_normal_form(rep, N: int) -> NormalForm:
    """Value-preserving normal form for the distinguished base of degree N.

    Follows the existence proof: locate the leftmost all-ones window of
    length N, carry it into one higher power, and normalise the two pieces
    on either side; the pieces are separated by at least N-1 zeros, so their
    concatenation is normal.
    """
    if N < 2:
        raise PreconditionError("window N must be >= 2")
    return NormalForm(_normalize(_bits_of(rep), N), N)


def _require_normal(rep, N):
    if not is_normal_form(rep, N):
        raise PreconditionError(f"{SigmaIntRep(_bits_of(rep))} is not in normal form for N={N}")


def compare(a, b, N: int) -> int:
    """Order of two normal forms: degree first, then the first differing bit."""
    _require_normal(a, N)
    _require_normal(b, N)
    x, y = _bits_of(a), _bits_of(b)
    if len(x) != len(y):
        return 1 if len(x) > len(y) else -1
    for c, d in zip(x, y):
        if c != d:
            return 1 if c > d else -1
    return 0


def largest_of_degree(n: int, N: int) -> NormalForm:
    """Largest normal form of degree n: blocks of N-1 ones split by zeros, then r ones."""
    if N < 2:
        raise PreconditionError("window N must be >= 2")
    if n < 0:
        return NormalForm((), N)
    k_star, r = divmod(n + 1, N)
    bits = ([1] * (N - 1) + [0]) * k_star + [1] * r
    return NormalForm(bits, N)


def gap_length(m: int, N: int, modulus: IntPolynomial) -> FieldElement:
    """Closed-form gap rho^m - largest_of_degree(m-1): 1 or sum_{i=1}^{N-r} rho^{-i}."""
    if m == 0:
        return FieldElement.from_int(modulus, 1)
    r = m % N
    if r == 0:
        return FieldElement.from_int(modulus, 1)
    inv = FieldElement.generator(modulus).inverse()
    total = FieldElement.from_int(modulus, 0)
    p = FieldElement.from_int(modulus, 1)
    for _ in range(N - r):
        p = p * inv
        total = total + p
    return total


def _successor_bits(y: tuple, N: int):
    """Return (successor bits, m): y with its degree < m part replaced by rho^m."""
    n = len(y) - 1

    def bit(d):
        return y[n - d] if 0 <= d <= n else 0

    for m in range(0, n + 2):
        if bit(m):
            continue
        low = tuple(bit(d) for d in range(m - 1, -1, -1))
        if m > 0 and low != largest_of_degree(m - 1, N).bits:
            continue
        high = tuple(bit(d) for d in range(n, m, -1))
        cand = high + (1,) + (0,) * m
        if is_normal_form(cand, N):
            return SigmaIntRep(cand).bits, m
    raise AssertionError("no successor found; input must be a normal form")


def successor(x, N: int, modulus: IntPolynomial | None = None):
    """Least normal form above ``x`` and the exact difference.

    The successor replaces the maximal lower block (a largest-of-degree
    pattern) together with the zero above it by one higher power; the gap is
    1 or sum_{i=1}^{N-r} rho^{-i} with r = m mod N.
    """
    _require_normal(x, N)
    modulus = modulus or SilverPolynomial.distinguished(N).poly
    bits, m = _successor_bits(_bits_of(x), N)
    return NormalForm(bits, N), gap_length(m, N, modulus)


def iter_integers(N: int) -> Iterator[NormalForm]:
    x = NormalForm((), N)
    while True:
        yield x
        x, _ = successor(x, N)


def enumerate_integers(N: int, count: int) -> list:
    if count < 1:
        raise PreconditionError("count must be >= 1")
    return list(itertools.islice(iter_integers(N), count))


def enumerate_with_gaps(N: int, count: int):
    """First ``count`` integers together with the ``count - 1`` successor gaps."""
    modulus = SilverPolynomial.distinguished(N).poly
    out, gaps = [NormalForm((), N)], []
    while len(out) < count:
        nxt, d = successor(out[-1], N, modulus)
        out.append(nxt)
        gaps.append(d)
    return out, gaps


def all_reps(max_degree: int) -> Iterator[SigmaIntRep]:
    """Every bit vector of degree <= max_degree (the zero vector once)."""
    yield EMPTY
    for n in range(max_degree + 1):
        for tail in itertools.product((0, 1), repeat=n):
            yield SigmaIntRep((1,) + tail)


def brute_force_integers(base, max_degree: int, root: AlgebraicReal):
    """Sorted distinct values of all bit vectors of degree <= max_degree, exact dedup.

    Only values below sigma^(max_degree + 1) are returned: for the
    distinguished base every integer below that bound has a representation
    of degree <= max_degree, so the list is a complete initial segment.
    """
    mod = _modulus(base)
    seen = {}
    for rep in all_reps(max_degree):
        v = value_of(rep, mod)
        if v not in seen:
            seen[v] = rep
    bound = FieldElement.generator(mod) ** (max_degree + 1)
    values = [v for v in seen if field_sign(bound - v, root) > 0]
    values.sort(key=cmp_to_key(lambda a, b: field_sign(a - b, root)))
    return [(v, seen[v]) for v in values]


# -- minimum-difference scan ------------------------------------------------------------


@dataclass(frozen=True)
class ScanResult:
    degree_bound: int
    minimum: tuple  # certified rational enclosure (lo, hi) of min |q(rho)|
    witness: tuple  # (delta_0, ..., delta_d), lowest degree first
    zero_count: int
    scanned: int
    total: int
    status: str  # "complete" or "partial"
    range_limited: bool = True

    @property
    def minimum_float(self) -> float:
        return float((self.minimum[0] + self.minimum[1]) / 2)


def power_coords(modulus: IntPolynomial, d: int) -> np.ndarray:
    """Integer matrix whose row i is the coordinate vector of rho^i, i = 0..d."""
    x = FieldElement.generator(modulus)
    rows, p = [], FieldElement.from_int(modulus, 1)
    for _ in range(d + 1):
        if p.den != 1:
            raise PreconditionError("modulus must be monic with integer powers")
        rows.append(p.nums)
        p = p * x
    mx = max(abs(v) for r in rows for v in r)
    dtype = np.int64 if mx * 3 ** (d + 1) < 2**62 else object
    return np.array(rows, dtype=dtype)


def q_vectors(d: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows (delta_0..delta_d) in itertools.product order over {-1, 0, 1}."""
    total = 3 ** (d + 1)
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), d + 1), dtype=np.int64)
    for pos in range(d, -1, -1):
        out[:, pos] = idx % 3 - 1
        idx = idx // 3
    return out


def min_difference_scan(p, root: AlgebraicReal, degree_bound: int, budget: int | None = None,
                        chunk: int = 1 << 16, progress=None) -> ScanResult:
    """Minimum of |q(rho)| over nonzero-valued q with coefficients in {-1, 0, 1}.

    Coordinates of q(rho) are integer combinations of the coordinates of
    rho^i, so zero values are detected exactly (all coordinates zero).
    Candidates for the minimum found in floating point are re-evaluated with
    certified intervals before the result is reported.
    """
    mod = _modulus(p)
    if root.defining != mod:
        raise PreconditionError("root must belong to the scanned polynomial")
    d = degree_bound
    total = 3 ** (d + 1)
    limit = total if budget is None else min(total, budget)
    coords = power_coords(mod, d)
    rf = float(root.refine(Fraction(1, 2**80)).midpoint)
    basis = np.array([rf**j for j in range(mod.degree)])
    best = np.inf
    cands = []
    zeros = 0
    tol = 1e-9
    for start in range(0, limit, chunk):
        q = q_vectors(d, start, min(start + chunk, limit))
        c = q @ coords if coords.dtype != object else q.astype(object) @ coords
        nz = np.any(c != 0, axis=1)
        zeros += int((~nz).sum())
        vals = np.abs(c.astype(float) @ basis)
        vals[~nz] = np.inf
        m = float(vals.min()) if len(vals) else np.inf
        if m < best - tol:
            best = m
            cands = []
        sel = np.nonzero(vals <= best + tol)[0]
        cands.extend((start + int(i), tuple(int(v) for v in q[i])) for i in sel)
        if progress:
            progress(min(start + chunk, limit), limit)
    best, witness = None, ()
    for _, qq in sorted(cands):
        fe = FieldElement.from_poly(mod, list(qq))
        if field_sign(fe, root) < 0:
            fe = -fe
        if best is None or field_sign(fe - best, root) < 0:
            best, witness = fe, qq
    best_interval = best.interval(root, 128) if best is not None else (Fraction(0), Fraction(0))
    return ScanResult(
        degree_bound=d,
        minimum=best_interval,
        witness=witness,
        zero_count=zeros,
        scanned=limit,
        total=total,
        status="complete" if limit == total else "partial",
    )
