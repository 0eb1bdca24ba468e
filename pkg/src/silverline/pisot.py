"""Pisot test with a posteriori (Weierstrass/Gershgorin-type) root enclosures.

This is the only place where the library relies on floating arithmetic; it
uses mpmath at high precision and then bounds the error of every computed root
with an inclusion disk, so the verdict is either certified or explicitly
``indeterminate``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .polynomials import IntPolynomial
from .reals import AlgebraicReal

DEFAULT_MARGIN = Fraction(1, 10**6)


@dataclass(frozen=True)
class PisotResult:
    status: str  # "pisot", "not-pisot" or "indeterminate"
    moduli: tuple  # (modulus, radius) of each conjugate other than the root, as floats
    margin: Fraction
    reason: str = ""

    @property
    def is_pisot(self):
        """True/False when certified, None when indeterminate."""
        return {"pisot": True, "not-pisot": False}.get(self.status)

    def __bool__(self) -> bool:
        return self.status == "pisot"


def root_enclosures(p: IntPolynomial, dps: int = 50):
    """Approximate roots with Weierstrass inclusion radii.

    For a monic degree-n polynomial and pairwise distinct approximations
    z_i, every disk |z - z_i| <= n |P(z_i) / prod_{j != i} (z_i - z_j)|
    contains a root, and the union of the disks contains all of them.
    Returns a list of (center, radius) pairs as mpmath numbers.
    """
    coeffs = [int(c) for c in reversed(p.coeffs)]
    n = p.degree
    with mpmath.workdps(dps):
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=2 * dps)
        except mpmath.libmp.NoConvergence:
            roots = mpmath.polyroots(coeffs, maxsteps=2000, extraprec=8 * dps, error=False)
        out = []
        for i, z in enumerate(roots):
            denom = mpmath.mpf(1)
            for j, w in enumerate(roots):
                if i != j:
                    denom *= z - w
            if denom == 0:
                out.append((z, mpmath.inf))
                continue
            val = mpmath.polyval(coeffs, z)
            # inflate slightly to absorb rounding in the residual evaluation
            radius = n * abs(val / denom) * (1 + mpmath.mpf(10) ** (-dps // 2)) + mpmath.mpf(10) ** (-dps + 5)
            out.append((z, radius))
    return out


def is_pisot(p: IntPolynomial, root: AlgebraicReal, margin=DEFAULT_MARGIN, dps: int = 50) -> PisotResult:
    """Decide whether ``root`` is a Pisot number with conjugates given by ``p``.

    The enclosure containing ``root`` is identified by overlap with the exact
    rational interval; every other enclosure must lie strictly inside
    |z| < 1 - margin (Pisot) or any one strictly outside |z| > 1 + margin
    (not Pisot).
    """
    margin = Fraction(margin)
    if root.lo <= 1:
        r = root.refine(Fraction(1, 10**20))
        if r.hi <= 1:
            return PisotResult("not-pisot", (), margin, "root is not greater than 1")
        root = r
    disks = root_enclosures(p, dps)
    with mpmath.workdps(dps):
        rr = root.refine(Fraction(1, 10**30))
        lo, hi = mpmath.mpf(rr.lo.numerator) / rr.lo.denominator, mpmath.mpf(rr.hi.numerator) / rr.hi.denominator
        own = None
        best = mpmath.inf
        for idx, (z, rad) in enumerate(disks):
            dist = abs(z - (lo + hi) / 2)
            if dist < best:
                best, own = dist, idx
        others = [d for i, d in enumerate(disks) if i != own]
        m_lo = 1 - mpmath.mpf(margin.numerator) / margin.denominator
        m_hi = 1 + mpmath.mpf(margin.numerator) / margin.denominator
        moduli = tuple((float(abs(z)), float(r)) for z, r in others)
        all_inside = True
        for z, rad in others:
            mod = abs(z)
            if mod - rad > m_hi:
                return PisotResult("not-pisot", moduli, margin, f"conjugate of modulus {float(mod):.12g} > 1")
            if not mod + rad < m_lo:
                all_inside = False
        if all_inside:
            return PisotResult("pisot", moduli, margin)
        return PisotResult("indeterminate", moduli, margin, "a conjugate modulus lies within the margin of 1")
