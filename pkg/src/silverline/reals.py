"""Real algebraic numbers held as (defining polynomial, isolating rational interval)."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError
from .polynomials import IntPolynomial, SilverPolynomial, count_roots_closed, is_square_free


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class AlgebraicReal:
    """The unique real root of ``defining`` in the closed interval ``[lo, hi]``.

    Construction checks isolation with a Sturm count, so an instance always
    denotes exactly one real number.  Refinement returns a new value.
    """

    defining: IntPolynomial
    lo: Fraction
    hi: Fraction

    def __init__(self, defining: IntPolynomial, lo, hi, *, check: bool = True):
        lo, hi = Fraction(lo), Fraction(hi)
        if check:
            if lo >= hi:
                raise PreconditionError(f"empty interval [{lo}, {hi}]")
            if not is_square_free(defining):
                raise PreconditionError(f"{defining} is not square-free")
            n = count_roots_closed(defining, lo, hi)
            if n != 1:
                raise PreconditionError(f"[{lo}, {hi}] holds {n} roots of {defining}, expected 1")
        object.__setattr__(self, "defining", defining)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refine(self, width) -> "AlgebraicReal":
        """Bisect until the interval is no wider than ``width``."""
        width = Fraction(width)
        if width <= 0:
            raise PreconditionError("width must be positive")
        p = self.defining
        lo, hi = self.lo, self.hi
        if p(lo) * p(hi) > 0:
            # isolated by Sturm count but without a sign change at the ends;
            # a square-free root always changes sign, so shrink once via Sturm.
            return self._refine_sturm(width)
        while hi - lo > width:
            if p(lo) == 0:
                hi = lo + width / 2
                break
            if p(hi) == 0:
                lo = hi - width / 2
                break
            mid = (lo + hi) / 2
            pm = p(mid)
            if pm == 0:
                lo, hi = mid - width / 4, mid + width / 4
                break
            if (p(lo) < 0) != (pm < 0):
                hi = mid
            else:
                lo = mid
        if (lo, hi) == (self.lo, self.hi):
            return self
        return AlgebraicReal(p, lo, hi, check=False)

    def _refine_sturm(self, width) -> "AlgebraicReal":
        p = self.defining
        lo, hi = self.lo, self.hi
        while hi - lo > width:
            mid = (lo + hi) / 2
            if count_roots_closed(p, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return AlgebraicReal(p, lo, hi, check=False)

    def __float__(self) -> float:
        return float(self.refine(Fraction(1, 2**60)).midpoint)

    def decimal(self, digits: int) -> str:
        """Decimal expansion truncated (toward zero) after ``digits`` places.

        The interval is refined until both endpoints truncate to the same
        string, so the digits shown are certified.
        """
        r = self.refine(Fraction(1, 10 ** (digits + 2)))
        while True:
            a, b = truncate_decimal(r.lo, digits), truncate_decimal(r.hi, digits)
            if a == b:
                return a
            # a rational root sitting on a truncation boundary: find it exactly
            for x in (r.lo, r.midpoint, r.hi):
                if r.defining(x) == 0:
                    return truncate_decimal(x, digits)
            r = r.refine(r.width / 1000)

    def to_json(self) -> dict:
        return {
            "defining": json.loads(self.defining.to_json()),
            "lo": _frac_str(self.lo),
            "hi": _frac_str(self.hi),
        }

    @classmethod
    def from_json(cls, data) -> "AlgebraicReal":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(IntPolynomial.from_json(data["defining"]), _parse_frac(data["lo"]), _parse_frac(data["hi"]))

    def power_bounds(self, k: int, bits: int):
        """Integer pair ``(a, b)`` with ``a/2^bits <= x^j <= b/2^bits`` for j = 0..k.

        Requires ``lo >= 0``. The interval is refined so that the rounding plus
        interval width keeps the bounds tight to roughly ``bits`` binary digits.
        """
        return _power_bounds(self, k, bits)

    def __repr__(self) -> str:
        return f"AlgebraicReal({self.defining}, {self.lo}, {self.hi})"


@lru_cache(maxsize=64)
def _power_bounds(x: AlgebraicReal, k: int, bits: int):
    if x.lo < 0:
        raise PreconditionError("power bounds need a non-negative interval")
    hi_est = max(Fraction(2), x.hi)
    r = x.refine(Fraction(1, 2 ** (bits + 2 * k + 8)) / max(1, k) / hi_est ** k)
    scale = 2**bits
    lows, highs = [], []
    plo, phi = Fraction(1), Fraction(1)
    for _ in range(k + 1):
        lows.append((plo * scale).__floor__())
        highs.append((phi * scale).__ceil__())
        plo *= r.lo
        phi *= r.hi
    return tuple(lows), tuple(highs)


def truncate_decimal(q: Fraction, digits: int) -> str:
    """Truncate ``q`` toward zero to ``digits`` places; integers print bare."""
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    a = abs(q)
    scaled = a.numerator * 10**digits // a.denominator
    whole, frac = divmod(scaled, 10**digits)
    if a.denominator == 1 or digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def silver_number(p, width=Fraction(1, 10**12)) -> AlgebraicReal:
    """Largest positive root of a silver polynomial, isolated in (1, 2) by exact bisection."""
    if isinstance(p, SilverPolynomial):
        poly = p.poly
    else:
        poly = p
        SilverPolynomial.from_poly(poly)  # validates the shape
    width = Fraction(width)
    lo, hi = Fraction(1), Fraction(2)
    # P(1) = 1 - sum b < 0 and P(2) = 2^N - sum b_j 2^{N-j} >= 1 > 0
    assert poly(lo) < 0 < poly(hi)
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = poly(mid)
        if v == 0:  # cannot happen for irrational roots; keep it exact anyway
            lo, hi = mid - width / 4, mid + width / 4
            break
        if v < 0:
            lo = mid
        else:
            hi = mid
    return AlgebraicReal(poly, lo, hi, check=False)


def real_root_in(p: IntPolynomial, lo, hi, width=Fraction(1, 10**12)) -> AlgebraicReal:
    """Validated root of a square-free polynomial isolated in ``[lo, hi]``."""
    return AlgebraicReal(p, lo, hi).refine(width)


def dresden_bounds(n: int, root: AlgebraicReal) -> dict:
    """Evaluate the classical lower bounds ``2 - 1/N <= rho_N`` and ``2 - 1/(3N) <= rho_N``.

    Each inequality is reported separately; which of them holds depends on N
    (the second one only from N = 4 on), and the caller gets both answers.
    """
    a = Fraction(2) - Fraction(1, n)
    b = Fraction(2) - Fraction(1, 3 * n)
    return {
        "N": n,
        "two_minus_1_over_N": _le_root(a, root),
        "two_minus_1_over_3N": _le_root(b, root),
    }


def _le_root(q: Fraction, root: AlgebraicReal) -> bool:
    """Exact test ``q <= root``."""
    r = root
    while True:
        if q <= r.lo:
            return True
        if q > r.hi:
            return False
        if r.defining(q) == 0:
            return True
        r = r.refine(r.width / 16)
