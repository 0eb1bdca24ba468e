"""Built-in consistency checks run by ``silverline verify-all``.

Each check returns (name, passed, detail).  The quick variant uses reduced
parameters so the whole suite finishes in seconds; ``quick=False`` uses the
acceptance-scale sizes.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction
from functools import cmp_to_key

from .dichotomy import build_certificate, corrupt, estimate_mu, rational_L_impossibility, verify_certificate
from .integers import (
    all_reps,
    compare,
    enumerate_with_gaps,
    gap_length,
    to_normal_form,
    value_of,
)
from .matrices import (
    CompanionForm,
    companion,
    conjugation_T,
    decompose_nonprimitive,
    intertwiner,
    is_primitive,
    silver_primitivity_by_gcd,
)
from .numfield import FieldElement, field_sign
from .polynomials import IntPolynomial, SilverPolynomial, enumerate_silver_polynomials, factor
from .reals import silver_number
from .tiling import (
    check_periodicity,
    count_evolution,
    detect_convergence,
    integer_vs_substitution,
    limit_prefix,
    matrix_count_evolution,
    silver_rule,
)


def _census(quick):
    top = 6 if quick else 8
    ok = all(len(enumerate_silver_polynomials(n)) == 2 ** (n - 1) - 1 for n in range(2, top + 1))
    f = factor(SilverPolynomial.from_string("0111").poly)
    ok &= [str(g) for g in f] == ["x + 1", "x^3 - x^2 - 1"]
    return ok, f"N=2..{top}"


def _roots(quick):
    top = 6 if quick else 10
    prev = None
    for n in range(2, top + 1):
        r = silver_number(SilverPolynomial.distinguished(n), Fraction(1, 10**20))
        if not (2 - Fraction(1, 2 ** (n - 1)) < r.lo and r.hi < 2 - Fraction(1, 2**n)):
            return False, f"N={n} outside bounds"
        if prev is not None and not prev.hi < r.lo:
            return False, f"not increasing at N={n}"
        prev = r
    return True, f"N=2..{top}"


def _normal_forms(quick):
    deg = 6 if quick else 10
    for N in (2, 3):
        sp = SilverPolynomial.distinguished(N)
        root = silver_number(sp, Fraction(1, 10**30))
        seen = {}
        for rep in all_reps(deg):
            nf = to_normal_form(rep, N)
            v = value_of(rep, sp)
            if value_of(nf, sp) != v:
                return False, f"value changed for {rep}"
            key = str(nf)
            if seen.setdefault(v, key) != key:
                return False, f"two normal forms for one value ({key})"
        forms = sorted({to_normal_form(r, N) for r in all_reps(deg)}, key=lambda x: (len(x.bits), x.bits))
        forms.sort(key=cmp_to_key(lambda a, b: compare(a, b, N)))
        for a, b in zip(forms, forms[1:]):
            if field_sign(value_of(b, sp) - value_of(a, sp), root) <= 0:
                return False, f"compare disagrees at {a}, {b}"
    return True, f"degree <= {deg}, N=2,3"


def _tilings(quick):
    count = 60 if quick else 200
    for N in (2, 3, 4):
        rep = integer_vs_substitution(N, count)
        if not (rep.hat_equals_integers and rep.integers_in_dw):
            return False, f"N={N}: {rep}"
    return True, f"{count} tiles, N=2..4"


def _gaps(quick):
    count = 120 if quick else 500
    N = 3
    m = SilverPolynomial.distinguished(N).poly
    _, gaps = enumerate_with_gaps(N, count + 1)
    expected = {gap_length(k, N, m) for k in (0, 1, 2)}
    got = set(gaps)
    return got == expected, f"{len(got)} distinct deltas in {len(gaps)}"


def _primitivity(quick):
    top = 6 if quick else 8
    for n in range(2, top + 1):
        for sp in enumerate_silver_polynomials(n):
            prim, d = silver_primitivity_by_gcd(sp)
            if prim != is_primitive(companion(sp)):
                return False, f"disagreement for {sp}"
            if not prim:
                q, dd = decompose_nonprimitive(sp)
                if q.poly.substitute_power(dd) != sp.poly or not is_primitive(companion(q)):
                    return False, f"decomposition fails for {sp}"
    return True, f"degree <= {top}"


def _convergence(quick):
    cases = [("11", None, "direct", 1), ("101", (1, 3), "direct", 1), ("101", (3, 1), "subsequence", 3),
             ("011", (2, 3), "subsequence", 2), ("011", (3, 2), "subsequence", 3)]
    for bits, order, mode, k in cases:
        rule = silver_rule(SilverPolynomial.from_string(bits), {1: order} if order else None)
        rep = detect_convergence(rule, 1)
        if rep.mode != mode or (mode == "subsequence" and rep.k != k):
            return False, f"{bits} {order}: {rep}"
    return True, "5 rules"


def _counts(quick):
    rule = silver_rule(SilverPolynomial.from_string("11"))
    k = 12 if quick else 20
    a = count_evolution(rule, 1, k)
    b = matrix_count_evolution(rule.matrix, (1, 0), k)
    return a == b, f"k <= {k}"


def _periodicity(quick):
    n, m = (800, 200) if quick else (2000, 500)
    flagged = []
    for bits in ("11", "111"):
        rule = silver_rule(SilverPolynomial.from_string(bits))
        prefix = limit_prefix(rule, 1, n)
        if check_periodicity(prefix, m).periodic_evidence:
            flagged.append(bits)
    return not flagged, f"{n} tiles, period <= {m}" + (f"; flagged {flagged}" if flagged else "")


def _conjugation(quick):
    rng = random.Random(20240601)
    trials = 10 if quick else 50
    for _ in range(trials):
        n = rng.randint(2, 8)
        c = [rng.randint(-5, 5) for _ in range(n)]
        if c[0] == 0:
            c[0] = 1
        p = IntPolynomial(c + [1])
        t = conjugation_T(p)
        cp = companion(p, CompanionForm.P)
        if t @ cp != cp.transpose() @ t:
            return False, f"T fails for {p}"
    for bits in ("11", "111", "101", "011", "1111")[: 3 if quick else 5]:
        sp = SilverPolynomial.from_string(bits)
        a = companion(sp, CompanionForm.DW)
        b = companion(sp, CompanionForm.DW_TRANSPOSE)
        m = intertwiner(a, b)
        if b @ m != m @ a:
            return False, f"intertwiner fails for {bits}"
    return True, f"{trials} random T checks"


def _dichotomy(quick):
    d = 6 if quick else 10
    for bits in ("11", "111"):
        sp = SilverPolynomial.from_string(bits)
        root = silver_number(sp, Fraction(1, 10**30))
        mu = estimate_mu(sp, root, d)
        cert = build_certificate(sp.poly, root, mu.lower)
        if not verify_certificate(cert, d, root).ok:
            return False, f"{bits}: certificate rejected"
        if verify_certificate(corrupt(cert), d, root).witness is None:
            return False, f"{bits}: corruption not detected"
    return True, f"degree <= {d}"


def _impossibility(quick):
    ok = rational_L_impossibility("supergolden").contradiction and rational_L_impossibility("plastic").contradiction
    ok &= not rational_L_impossibility("golden").contradiction
    psi = FieldElement.generator(SilverPolynomial.from_string("101").poly)
    ok &= psi**4 - psi**3 == psi
    return ok, "supergolden, plastic, golden control"


CHECKS = [
    ("census", _census),
    ("root-bounds", _roots),
    ("normal-forms", _normal_forms),
    ("tiling-equivalence", _tilings),
    ("successor-gaps", _gaps),
    ("primitivity", _primitivity),
    ("convergence-modes", _convergence),
    ("count-evolution", _counts),
    ("non-periodicity", _periodicity),
    ("conjugation", _conjugation),
    ("dichotomy", _dichotomy),
    ("impossibility", _impossibility),
]


def run_all(quick: bool = True):
    out = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            passed, detail = fn(quick)
        except Exception as exc:  # a crash is a failed check, reported not raised
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(passed), f"{detail} ({time.perf_counter() - t0:.2f}s)"))
    return out
