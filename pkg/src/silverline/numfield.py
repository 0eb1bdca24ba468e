"""Exact arithmetic in Q[X]/(P) for a monic irreducible integer polynomial P.

A ``FieldElement`` stores integer numerators over one positive common
denominator, which keeps the hot loops (reductions, sign tests) in pure
integer arithmetic.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .errors import IncompatibleFieldError, PreconditionError, ReducibleModulusError
from .linalg import nullspace
from .polynomials import IntPolynomial, is_irreducible
from .reals import AlgebraicReal, truncate_decimal


@lru_cache(maxsize=512)
def _checked_modulus(coeffs: tuple) -> bool:
    p = IntPolynomial(coeffs)
    if not p.is_monic() or p.degree < 1:
        raise PreconditionError(f"modulus {p} must be monic of degree >= 1")
    if not is_irreducible(p):
        raise ReducibleModulusError(f"{p} is reducible; coordinate zero-tests would be unsound")
    return True


def _reduce_int(coeffs: list, modulus: tuple) -> list:
    """Reduce an integer coefficient list modulo a monic integer polynomial."""
    n = len(modulus) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, n - 1, -1):
        t = c[k]
        if t:
            c[k] = 0
            base = k - n
            for j in range(n):
                m = modulus[j]
                if m:
                    c[base + j] -= t * m
    c = c[:n]
    c.extend([0] * (n - len(c)))
    return c


class FieldElement:
    """Element of Q(rho) given by coordinates on 1, rho, ..., rho^{N-1}."""

    __slots__ = ("modulus", "nums", "den")

    def __init__(self, modulus: IntPolynomial, coords: Sequence = (), *, check: bool = True):
        if check:
            _checked_modulus(modulus.coeffs)
        n = modulus.degree
        coords = [Fraction(c) for c in coords]
        if len(coords) > n:
            # allow unreduced input; reduce it
            den = 1
            for c in coords:
                den = den * c.denominator // gcd(den, c.denominator)
            nums = _reduce_int([int(c * den) for c in coords], modulus.coeffs)
        else:
            coords = coords + [Fraction(0)] * (n - len(coords))
            den = 1
            for c in coords:
                den = den * c.denominator // gcd(den, c.denominator)
            nums = [int(c * den) for c in coords]
        self.modulus = modulus
        self._set(nums, den)

    def _set(self, nums, den):
        g = den
        for x in nums:
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
        self.nums = tuple(nums)
        self.den = den

    @classmethod
    def _raw(cls, modulus, nums, den) -> "FieldElement":
        obj = cls.__new__(cls)
        obj.modulus = modulus
        if den < 0:
            nums, den = [-x for x in nums], -den
        obj._set(nums, den)
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_int(cls, modulus: IntPolynomial, value) -> "FieldElement":
        return cls(modulus, [Fraction(value)])

    @classmethod
    def generator(cls, modulus: IntPolynomial) -> "FieldElement":
        """The class of X, i.e. the root rho itself."""
        if modulus.degree == 1:
            return cls(modulus, [-modulus[0]])
        return cls(modulus, [0, 1])

    @classmethod
    def from_poly(cls, modulus: IntPolynomial, poly) -> "FieldElement":
        coeffs = poly.coeffs if isinstance(poly, IntPolynomial) else poly
        _checked_modulus(modulus.coeffs)
        if all(isinstance(c, int) for c in coeffs):
            return cls._raw(modulus, _reduce_int(list(coeffs) or [0], modulus.coeffs), 1)
        return cls(modulus, list(coeffs))

    # -- accessors -------------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @property
    def coords(self) -> tuple:
        return tuple(Fraction(x, self.den) for x in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise IncompatibleFieldError(f"moduli differ: {self.modulus} vs {other.modulus}")
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            nums = [q.numerator] + [0] * (self.degree - 1)
            return FieldElement._raw(self.modulus, nums, q.denominator)
        return NotImplemented

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return FieldElement._raw(self.modulus, [a + b for a, b in zip(self.nums, o.nums)], self.den)
        return FieldElement._raw(
            self.modulus,
            [a * o.den + b * self.den for a, b in zip(self.nums, o.nums)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(self.modulus, [-a for a in self.nums], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.nums, o.nums
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElement._raw(self.modulus, _reduce_int(prod, self.modulus.coeffs), self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self._coerce(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        a = _strip([Fraction(x, self.den) for x in self.nums])
        m = [Fraction(c) for c in self.modulus.coeffs]
        # invariant: s_i * a == r_i (mod m); m irreducible so the gcd is a constant
        r0, r1 = m, a
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _strip(_psub(s0, _pmul(q, s1)))
        if not r1:
            raise ReducibleModulusError(f"{self.modulus} shares a factor with the element")
        c, s = r1[0], s1
        return FieldElement(self.modulus, [x / c for x in s], check=False)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            o = self._coerce(other)
        elif isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                return False
            o = other
        else:
            return NotImplemented
        return self.den == o.den and self.nums == o.nums

    def __hash__(self):
        return hash((self.modulus.coeffs, self.nums, self.den))

    def __repr__(self) -> str:
        return f"FieldElement({self.modulus}, {[str(c) for c in self.coords]})"

    def poly_str(self, symbol: str = "r") -> str:
        terms = []
        for k, c in enumerate(self.coords):
            if c:
                mono = "" if k == 0 else (symbol if k == 1 else f"{symbol}^{k}")
                terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms) if terms else "0"

    # -- numerics ----------------------------------------------------------------

    def interval(self, root: AlgebraicReal, bits: int = 64):
        """Rational enclosure (lo, hi) of the value at ``root``."""
        _check_root(self, root)
        lows, highs = _root_powers(root, self.degree - 1, bits)
        lo = hi = 0
        for x, a, b in zip(self.nums, lows, highs):
            if x > 0:
                lo += x * a
                hi += x * b
            elif x < 0:
                lo += x * b
                hi += x * a
        scale = self.den << bits
        return Fraction(lo, scale), Fraction(hi, scale)

    def decimal(self, root: AlgebraicReal, digits: int) -> str:
        """Certified truncated decimal of the value at ``root``."""
        bits = max(64, int(digits * 3.33) + 16)
        while True:
            lo, hi = self.interval(root, bits)
            a, b = truncate_decimal(lo, digits), truncate_decimal(hi, digits)
            if a == b:
                return a
            if lo == hi:
                return a
            rational = self.rational_value()
            if rational is not None:
                return truncate_decimal(rational, digits)
            bits *= 2
            if bits > 1 << 16:
                return a

    def rational_value(self):
        if any(self.nums[1:]):
            return None
        return Fraction(self.nums[0], self.den)

    def to_json(self) -> dict:
        return {
            "modulus": json.loads(self.modulus.to_json()),
            "coords": [f"{c.numerator}/{c.denominator}" for c in self.coords],
        }

    @classmethod
    def from_json(cls, data) -> "FieldElement":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(IntPolynomial.from_json(data["modulus"]), [Fraction(c) for c in data["coords"]])


# -- rational polynomial helpers for the inverse ---------------------------------------


def _strip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _psub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qdivmod(a, b):
    a = _strip(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = f
        for j, c in enumerate(b):
            a[s + j] -= f * c
        a = _strip(a)
    return _strip(q), a


# -- sign and power bounds --------------------------------------------------------------


def _check_root(a: FieldElement, root: AlgebraicReal):
    if root.defining != a.modulus:
        raise IncompatibleFieldError(f"root of {root.defining} does not belong to the field of {a.modulus}")


def _root_powers(root: AlgebraicReal, k: int, bits: int):
    if root.lo >= 0:
        return root.power_bounds(k, bits)
    # general real root: interval powers with rational arithmetic
    r = root.refine(Fraction(1, 2 ** (bits + 4 * k + 8)))
    scale = 2**bits
    lows, highs = [], []
    lo, hi = Fraction(1), Fraction(1)
    for _ in range(k + 1):
        lows.append((lo * scale).__floor__())
        highs.append((hi * scale).__ceil__())
        cands = (lo * r.lo, lo * r.hi, hi * r.lo, hi * r.hi)
        lo, hi = min(cands), max(cands)
    return tuple(lows), tuple(highs)


def field_sign(a: FieldElement, root: AlgebraicReal) -> int:
    """Exact sign of ``a`` evaluated at ``root``.

    Zero is decided from the coordinates (valid because the modulus is the
    minimal polynomial); otherwise the enclosure is tightened until it
    excludes zero, which must eventually happen.
    """
    _check_root(a, root)
    if a.is_zero():
        return 0
    bits = 64
    while True:
        lo, hi = a.interval(root, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def field_compare(a: FieldElement, b: FieldElement, root: AlgebraicReal) -> int:
    return field_sign(a - b, root)


def minimal_polynomial_of_power(p: IntPolynomial, d: int) -> IntPolynomial:
    """Minimal polynomial of rho^d where rho is a root of the irreducible ``p``.

    The powers (rho^d)^k are written in the basis 1..rho^{N-1}; the first
    linear dependency among them gives the answer.
    """
    if d < 1:
        raise PreconditionError("d must be >= 1")
    y = FieldElement.generator(p) ** d
    powers = [FieldElement.from_int(p, 1)]
    for k in range(1, p.degree + 1):
        powers.append(powers[-1] * y)
        cols = [list(e.coords) for e in powers]
        matrix = [list(row) for row in zip(*cols)]  # columns are the powers
        kernel = nullspace(matrix)
        if kernel:
            v = kernel[0]
            lead = v[-1]
            monic = [c / lead for c in v]
            if any(c.denominator != 1 for c in monic):
                raise AssertionError("minimal polynomial of an algebraic integer must be integral")
            return IntPolynomial(int(c) for c in monic)
    raise AssertionError("no dependency found; modulus degree mismatch")
