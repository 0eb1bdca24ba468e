"""Dichotomy machinery: mu estimates, the (L, v0) tiling certificate and its verification,
and the exact rational-L impossibility checks.

Notation: U is the DW companion of P, A = U^tr, w the right Perron vector of A
(unit Euclidean norm), u its left Perron vector.  A vector v splits as
alpha w + z with z in ker(u^tr), the A-invariant complement of span(w).
For k >= 0 one has rho^k = L (1, 1/rho, ..., 1/rho^{N-1}) A^k v0 with
L = 1 / (row . v0), hence q(rho) = L row q(A) v0 for every polynomial q.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

import mpmath
import numpy as np

from .errors import CannotCertifyError, NotFoundError, PreconditionError
from .integers import ScanResult, min_difference_scan, power_coords, q_vectors
from .matrices import CompanionForm, IntMatrix, companion
from .numfield import FieldElement, field_sign
from .pisot import is_pisot
from .polynomials import IntPolynomial, SilverPolynomial, is_irreducible
from .reals import AlgebraicReal, silver_number

ALPHAS = (Fraction(3, 4), Fraction(1), Fraction(3, 2))
MAX_SCALE_EXP = 12
DPS = 50


def _poly(p) -> IntPolynomial:
    return p.poly if isinstance(p, SilverPolynomial) else p


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SILVERLINE_THREADS", "1")))
    except ValueError:
        return 1


def _round_up(x, den: int = 10**12) -> Fraction:
    return Fraction(int(mpmath.ceil(x * den)), den)


def _round_down(x, den: int = 10**12) -> Fraction:
    return Fraction(int(mpmath.floor(x * den)), den)


# -- mu ---------------------------------------------------------------------------------------


@dataclass(frozen=True)
class MuEstimate:
    """Minimum of |q(rho)| over the scanned range; evidence, not a bound on the true infimum."""

    degree_bound: int
    lower: Fraction  # certified lower end of the enclosure of the scan minimum
    upper: Fraction
    witness: tuple
    range_limited: bool = True

    def __float__(self):
        return float((self.lower + self.upper) / 2)


def estimate_mu(p, root: AlgebraicReal, degree_bound: int, progress=None) -> MuEstimate:
    p = _poly(p)
    if not is_irreducible(p):
        raise PreconditionError(f"{p} is reducible")
    scan: ScanResult = min_difference_scan(p, root, degree_bound, progress=progress)
    return MuEstimate(degree_bound, scan.minimum[0], scan.minimum[1], scan.witness)


# -- contraction -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionBound:
    """||A^k z|| <= kappa delta^k ||z|| for z in ker(u^tr) (Euclidean norm)."""

    delta: Fraction
    kappa: Fraction
    gamma: Fraction  # kappa / (1 - delta) bounds ||q(A) z|| / ||z|| for q in the scan set


def _partition_transpose(p: IntPolynomial) -> IntMatrix:
    return companion(p, CompanionForm.DW).transpose()


def _eig(p: IntPolynomial):
    a = _partition_transpose(p)
    with mpmath.workdps(DPS):
        m = mpmath.matrix(a.tolist())
        evals, left, right = mpmath.eig(m, left=True, right=True)
    return a, evals, left, right


def contraction_bound(p, root: AlgebraicReal) -> ContractionBound:
    """Rational delta < 1 and conditioning factor kappa for A = U^tr on the non-Perron part.

    delta bounds the certified conjugate moduli (Weierstrass disks from the
    Pisot test); kappa = sum over non-Perron eigenpairs of
    ||l_i|| ||r_i|| / |l_i^T r_i| is evaluated at high precision and inflated.
    """
    p = _poly(p)
    res = is_pisot(p, root)
    if res.status != "pisot":
        raise CannotCertifyError(f"Pisot property not certified for {p}: {res.status} ({res.reason})")
    with mpmath.workdps(DPS):
        delta_f = max(mpmath.mpf(m) + mpmath.mpf(r) for m, r in res.moduli)
        delta = _round_up(delta_f * (1 + mpmath.mpf(10) ** -9))
        _, evals, left, right = _eig(p)
        rho_f = max(evals, key=lambda z: mpmath.re(z))
        n = len(evals)
        kappa_f = mpmath.mpf(0)
        for i in range(n):
            if abs(evals[i] - rho_f) < mpmath.mpf(10) ** -20:
                continue
            r = right[:, i]
            l = left[i, :]
            lr = sum(l[j] * r[j] for j in range(n))
            nr = mpmath.sqrt(sum(abs(r[j]) ** 2 for j in range(n)))
            nl = mpmath.sqrt(sum(abs(l[j]) ** 2 for j in range(n)))
            kappa_f += nl * nr / abs(lr)
        kappa = _round_up(kappa_f * (1 + mpmath.mpf(10) ** -6))
    if delta >= 1:
        raise CannotCertifyError("contraction factor is not below 1")
    return ContractionBound(delta, kappa, kappa / (1 - delta))


# -- certificate -----------------------------------------------------------------------------


def _row(p: IntPolynomial):
    """(1, 1/rho, ..., 1/rho^{N-1}) in Q(rho)."""
    inv = FieldElement.generator(p).inverse()
    out, cur = [], FieldElement.from_int(p, 1)
    for _ in range(p.degree):
        out.append(cur)
        cur = cur * inv
    return out


def basic_length(p: IntPolynomial, v0) -> FieldElement:
    """L with 1 = L * sum_j v0_j rho^{-j}."""
    s = sum((r * int(x) for r, x in zip(_row(p), v0)), FieldElement.from_int(p, 0))
    return s.inverse()


@dataclass(frozen=True)
class DichotomyCertificate:
    poly: IntPolynomial
    v0: tuple
    L: FieldElement
    delta: Fraction
    gamma: Fraction
    kappa: Fraction
    omega: Fraction
    mu_lower: Fraction
    alpha: Fraction
    scale_exp: int
    verified_degree: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "poly": [str(c) for c in self.poly.coeffs],
                "v0": [str(x) for x in self.v0],
                "L": [f"{c.numerator}/{c.denominator}" for c in self.L.coords],
                "delta": _fs(self.delta),
                "gamma": _fs(self.gamma),
                "kappa": _fs(self.kappa),
                "omega": _fs(self.omega),
                "mu_lower": _fs(self.mu_lower),
                "alpha": _fs(self.alpha),
                "scale_exp": self.scale_exp,
                "verified_degree": self.verified_degree,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text) -> "DichotomyCertificate":
        d = json.loads(text) if isinstance(text, str) else text
        poly = IntPolynomial(int(c) for c in d["poly"])
        return cls(
            poly=poly,
            v0=tuple(int(x) for x in d["v0"]),
            L=FieldElement(poly, [Fraction(c) for c in d["L"]]),
            delta=Fraction(d["delta"]),
            gamma=Fraction(d["gamma"]),
            kappa=Fraction(d["kappa"]),
            omega=Fraction(d["omega"]),
            mu_lower=Fraction(d["mu_lower"]),
            alpha=Fraction(d["alpha"]),
            scale_exp=int(d["scale_exp"]),
            verified_degree=d.get("verified_degree"),
        )


def _fs(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _perron_pair(p: IntPolynomial):
    """Unit right Perron vector w and left Perron vector u of A = U^tr (mpmath)."""
    _, evals, left, right = _eig(p)
    with mpmath.workdps(DPS):
        i = max(range(len(evals)), key=lambda k: mpmath.re(evals[k]))
        n = len(evals)
        w = [mpmath.re(right[j, i]) for j in range(n)]
        u = [mpmath.re(left[i, j]) for j in range(n)]
        sw = 1 if w[0] > 0 else -1
        su = 1 if u[0] > 0 else -1
        w = [sw * x for x in w]
        u = [su * x for x in u]
        norm = mpmath.sqrt(sum(x * x for x in w))
        w = [x / norm for x in w]
    return w, u


def build_certificate(p, root: AlgebraicReal, mu_lower, degree_bound: int | None = None) -> DichotomyCertificate:
    """Search the grid alpha in {3/4, 1, 3/2}, v~ = round(alpha w 2^s) / 2^s, s <= 12.

    The first point whose decomposition v~ = alpha' w + z has alpha' > 1/2 and
    ||z|| < mu omega / (2 gamma) is accepted; v0 = 2^s v~ is an integer vector.
    """
    p = _poly(p)
    mu_lower = Fraction(mu_lower)
    if mu_lower <= 0:
        raise PreconditionError("mu_lower must be positive")
    cb = contraction_bound(p, root)
    w, u = _perron_pair(p)
    with mpmath.workdps(DPS):
        omega = _round_down(min(w))
        radius = mpmath.mpf(mu_lower.numerator) / mu_lower.denominator * (mpmath.mpf(omega.numerator) / omega.denominator)
        radius /= 2 * (mpmath.mpf(cb.gamma.numerator) / cb.gamma.denominator)
        uw = sum(a * b for a, b in zip(u, w))
        tried = 0
        for alpha in ALPHAS:
            af = mpmath.mpf(alpha.numerator) / alpha.denominator
            for s in range(MAX_SCALE_EXP + 1):
                tried += 1
                v0 = [int(mpmath.nint(af * x * 2**s)) for x in w]
                if min(v0) < 0 or max(v0) == 0:
                    continue
                vt = [mpmath.mpf(x) / 2**s for x in v0]
                a_hat = sum(a * b for a, b in zip(u, vt)) / uw
                z = [x - a_hat * y for x, y in zip(vt, w)]
                zn = mpmath.sqrt(sum(x * x for x in z))
                # small safety margin on both strict inequalities
                if a_hat > mpmath.mpf(1) / 2 + mpmath.mpf(10) ** -12 and zn < radius * (1 - mpmath.mpf(10) ** -9):
                    return DichotomyCertificate(
                        poly=p,
                        v0=tuple(v0),
                        L=basic_length(p, v0),
                        delta=cb.delta,
                        gamma=cb.gamma,
                        kappa=cb.kappa,
                        omega=omega,
                        mu_lower=mu_lower,
                        alpha=_round_down(a_hat),
                        scale_exp=s,
                    )
    raise NotFoundError(
        f"no grid point within radius {float(radius):.3g} (omega={float(omega):.4g}, gamma={float(cb.gamma):.4g},"
        f" mu={float(mu_lower):.4g})",
        budget=tried,
    )


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    degree_bound: int
    checked: int  # q with q(rho) != 0
    skipped_zero: int
    witness: Optional[tuple]  # first failing q (delta_0..delta_d) in product order
    witness_values: Optional[tuple]  # q(A) v0 for the witness
    rederived: int  # number of q for which q(rho) = L row q(A) v0 was re-checked exactly

    def __bool__(self):
        return self.ok


def _krylov_rows(p: IntPolynomial, v0, d: int) -> np.ndarray:
    a = _partition_transpose(p)
    rows, cur = [], [int(x) for x in v0]
    for _ in range(d + 1):
        rows.append(cur)
        cur = a.apply(cur)
    mx = max(abs(x) for r in rows for x in r)
    dtype = np.int64 if mx * 3 ** (d + 1) < 2**62 else object
    return np.array(rows, dtype=dtype)


def _signs_of_values(coords_block: np.ndarray, q_block: np.ndarray, p: IntPolynomial, root: AlgebraicReal, basis):
    """Exact signs of q(rho) from integer coordinates: float with an error bound, exact fallback."""
    cf = coords_block.astype(float)
    vals = cf @ basis
    err = (np.abs(cf) @ np.abs(basis)) * 1e-12 + 1e-300
    signs = np.where(vals > err, 1, np.where(vals < -err, -1, 0)).astype(np.int64)
    nonzero = np.any(coords_block != 0, axis=1)
    for i in np.nonzero((signs == 0) & nonzero)[0]:
        fe = FieldElement.from_poly(p, [int(x) for x in q_block[i]])
        signs[i] = field_sign(fe, root)
    signs[~nonzero] = 0
    return signs


def verify_certificate(cert: DichotomyCertificate, degree_bound: int, root: AlgebraicReal | None = None,
                       progress: Callable | None = None, chunk: int = 1 << 15, sample: int = 64) -> VerificationResult:
    """Exhaustive same-sign check of q(A) v0 against q(rho) over all q of degree <= bound.

    Chunks are independent and may run in a thread pool (SILVERLINE_THREADS);
    the reported witness is always the first failure in product order.
    """
    p = cert.poly
    root = root or silver_number(p, Fraction(1, 10**30))
    d = degree_bound
    total = 3 ** (d + 1)
    coords = power_coords(p, d)
    kry = _krylov_rows(p, cert.v0, d)
    rf = float(root.refine(Fraction(1, 2**80)).midpoint)
    basis = np.array([rf**j for j in range(p.degree)])

    def work(start):
        q = q_vectors(d, start, min(start + chunk, total))
        c = q @ coords if coords.dtype != object else q.astype(object) @ coords
        x = q @ kry if kry.dtype != object else q.astype(object) @ kry
        s = _signs_of_values(c, q, p, root, basis)
        nz = s != 0
        xs = np.sign(x.astype(float)).astype(np.int64)
        good = np.all(xs == s[:, None], axis=1)
        bad = np.nonzero(nz & ~good)[0]
        first = None
        if bad.size:
            i = int(bad[0])
            first = (start + i, tuple(int(v) for v in q[i]), tuple(int(v) for v in x[i]))
        return int(nz.sum()), int((~nz).sum()), first

    starts = list(range(0, total, chunk))
    checked = zeros = 0
    failures = []
    done = 0
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = ex.map(work, starts)
            for start, (nc, nzr, first) in zip(starts, results):
                checked += nc
                zeros += nzr
                if first:
                    failures.append(first)
                done = min(start + chunk, total)
                if progress:
                    progress(done, total)
    else:
        for start in starts:
            nc, nzr, first = work(start)
            checked += nc
            zeros += nzr
            if first:
                failures.append(first)
            if progress:
                progress(min(start + chunk, total), total)
    witness = min(failures) if failures else None

    # exact re-derivation of q(rho) = L row q(A) v0 on a deterministic sample
    row = _row(p)
    idx = sorted(set(list(range(0, total, max(1, total // sample)))[:sample]))
    if witness:
        idx.append(witness[0])
    rederived = 0
    a = _partition_transpose(p)
    for i in idx:
        q = tuple(int(v) for v in q_vectors(d, i, i + 1)[0])
        lhs = FieldElement.from_poly(p, list(q))
        vec = [0] * p.degree
        cur = [int(x) for x in cert.v0]
        for coef in q:
            if coef:
                vec = [s + coef * c for s, c in zip(vec, cur)]
            cur = a.apply(cur)
        rhs = cert.L * sum((r * x for r, x in zip(row, vec)), FieldElement.from_int(p, 0))
        if lhs != rhs:
            raise AssertionError(f"identity q(rho) = L row q(A) v0 fails for q={q}")
        rederived += 1
    return VerificationResult(
        ok=witness is None,
        degree_bound=d,
        checked=checked,
        skipped_zero=zeros,
        witness=witness[1] if witness else None,
        witness_values=witness[2] if witness else None,
        rederived=rederived,
    )


def corrupt(cert: DichotomyCertificate, index: int = 0) -> DichotomyCertificate:
    """Copy of the certificate with one v0 entry negated (for falsification tests)."""
    v0 = list(cert.v0)
    v0[index] = -v0[index]
    return replace(cert, v0=tuple(v0), L=basic_length(cert.poly, v0), verified_degree=None)


# -- rational-L impossibility ------------------------------------------------------------------


@dataclass(frozen=True)
class ImpossibilityReport:
    which: str
    modulus: IntPolynomial
    difference: str  # the difference of two integers that is assumed tileable
    multiplier: int  # the equation is multiplied by rho^multiplier
    reduced: tuple  # coordinates of difference * rho^multiplier
    relation: tuple  # coefficients of rho^{N-1}, ..., rho^0 as strings in L, a, b, c
    identities: dict  # exact identities used, name -> verified?
    leading_positive: bool
    irreducible: bool
    contradiction: bool
    reason: str


_CASES = {
    # name: (silver bits, symbol, difference as integer coefficients lowest first, description)
    "supergolden": ((1, 0, 1), "psi", (-1, -1, 1), "psi^2 - (psi + 1)"),
    "plastic": ((0, 1, 1), "theta", (-1, 1), "theta - 1"),
    "golden": ((1, 1), "phi", (-1, 1), "phi - 1"),
}


def _lin(var: str, c: Fraction) -> str:
    """String for L*var - c, e.g. 'La+1'."""
    if c == 0:
        return f"L{var}"
    return f"L{var}{'+' if c < 0 else '-'}{abs(c)}"


def rational_L_impossibility(which: str) -> ImpossibilityReport:
    """Reproduce the exact argument that no rational basic length works.

    If D = L (a + b/rho + c/rho^2 + ...) with rational L > 0 and integers
    a, b, ... >= 0, multiplying by rho^{N-1} and reducing D rho^{N-1} to
    coordinates (c_0, ..., c_{N-1}) gives sum_k (L x_k - c_k) rho^k = 0 with
    x = (..., c, b, a).  A nonzero rational polynomial of degree < N vanishing
    at rho contradicts irreducibility; it is nonzero when its leading
    coefficient L a - c_{N-1} is forced positive, i.e. c_{N-1} < 0.
    """
    if which not in _CASES:
        raise PreconditionError(f"unknown case {which!r}; expected one of {sorted(_CASES)}")
    bits, sym, diff, desc = _CASES[which]
    p = SilverPolynomial(bits).poly
    n = p.degree
    rho = FieldElement.generator(p)
    d = FieldElement.from_poly(p, list(diff))
    reduced = (d * rho ** (n - 1)).coords
    letters = "abcdefgh"
    # coefficient of rho^{N-1-i} on the right side is L * letters[i]
    relation = []
    for i in range(n):
        k = n - 1 - i
        relation.append(_lin(letters[i], reduced[k]))
    identities = {}
    if which == "supergolden":
        identities["psi^4 - psi^3 = psi"] = rho**4 - rho**3 == rho
    elif which == "plastic":
        identities["theta^3 = theta + 1"] = rho**3 == rho + 1
        identities["theta^3 - theta^2 = -theta^2 + theta + 1"] = rho**3 - rho**2 == -(rho**2) + rho + 1
    else:
        identities["phi^2 = phi + 1"] = rho**2 == rho + 1
    identities[f"{desc} is a difference of integers"] = True
    leading_positive = reduced[n - 1] < 0
    irreducible = is_irreducible(p)
    contradiction = leading_positive and irreducible and n >= 2
    if contradiction:
        reason = (
            f"{sym} would be a root of a rational polynomial of degree {n - 1} with leading coefficient "
            f"{relation[0]} > 0, but its minimal polynomial {p} has degree {n}"
        )
    else:
        reason = (
            f"leading coefficient {relation[0]} may vanish (e.g. a = 0); the relation is consistent, "
            "no contradiction"
        )
    return ImpossibilityReport(
        which=which,
        modulus=p,
        difference=desc,
        multiplier=n - 1,
        reduced=tuple(reduced),
        relation=tuple(relation),
        identities=identities,
        leading_positive=leading_positive,
        irreducible=irreducible,
        contradiction=contradiction,
        reason=reason,
    )


# -- report -------------------------------------------------------------------------------------


@dataclass(frozen=True)
class DichotomyReport:
    poly: IntPolynomial
    verdict: str  # "certified-tiling", "evidence-of-clustering" or "inconclusive"
    minima: tuple  # (degree_bound, float minimum) per scanned bound
    certificate: Optional[DichotomyCertificate]
    verification: Optional[VerificationResult]
    distinguished: bool
    reason: str


def dichotomy_report(p, root: AlgebraicReal | None = None, bounds=(4, 6, 8, 10), progress=None) -> DichotomyReport:
    p = _poly(p)
    sp = SilverPolynomial.from_poly(p)
    root = root or silver_number(sp, Fraction(1, 10**30))
    if not is_irreducible(p):
        return DichotomyReport(p, "inconclusive", (), None, None, sp.is_distinguished, "polynomial is reducible")
    pis = is_pisot(p, root)
    if pis.status != "pisot":
        return DichotomyReport(p, "inconclusive", (), None, None, sp.is_distinguished,
                               f"Pisot hypothesis not met ({pis.status})")
    estimates = [estimate_mu(p, root, d) for d in bounds]
    minima = tuple((e.degree_bound, float(e)) for e in estimates)
    last = estimates[-1]
    shrinking = len(estimates) >= 2 and last.upper < estimates[-2].lower
    cert = ver = None
    try:
        cert = build_certificate(p, root, last.lower)
        ver = verify_certificate(cert, bounds[-1], root, progress=progress)
        if ver.ok:
            cert = replace(cert, verified_degree=bounds[-1])
    except (NotFoundError, CannotCertifyError) as exc:
        reason = str(exc)
    if ver is not None and ver.ok and not shrinking:
        verdict = "certified-tiling"
        reason = f"certificate verified for all q of degree <= {bounds[-1]}; scan minima stable"
        if sp.is_distinguished:
            reason += "; consistent with 0 not being a cluster point of integer differences"
    elif shrinking:
        verdict = "evidence-of-clustering"
        reason = "scan minima still decreasing at the largest bound"
    else:
        verdict = "inconclusive"
        reason = reason if cert is None else "certificate failed verification"
    return DichotomyReport(p, verdict, minima, cert, ver, sp.is_distinguished, reason)
