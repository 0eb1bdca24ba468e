"""Tiling certificates, their verification and the rational-length argument."""
import itertools
from fractions import Fraction

import mpmath
import pytest

from conftest import root_of, silver
from silverline.dichotomy import (
    DichotomyCertificate,
    basic_length,
    build_certificate,
    contraction_bound,
    corrupt,
    dichotomy_report,
    estimate_mu,
    rational_L_impossibility,
    verify_certificate,
)
from silverline.errors import CannotCertifyError, PreconditionError
from silverline.matrices import CompanionForm, companion
from silverline.numfield import FieldElement, field_sign


@pytest.fixture(scope="module")
def certificates():
    out = {}
    for name in ("golden", "tribonacci"):
        sp, root = silver(name), root_of(name)
        mu = estimate_mu(sp, root, 8)
        out[name] = (build_certificate(sp.poly, root, mu.lower), root)
    return out


def exact_check(cert, root, d):
    """Independent exact check: integer q(A) v0 against field_sign of q(rho)."""
    a = companion(cert.poly, CompanionForm.DW).transpose()
    krylov = [list(cert.v0)]
    for _ in range(d):
        krylov.append(a.apply(krylov[-1]))
    for q in itertools.product((-1, 0, 1), repeat=d + 1):
        s = field_sign(FieldElement.from_poly(cert.poly, list(q)), root)
        if s == 0:
            continue
        x = [sum(c * k[i] for c, k in zip(q, krylov)) for i in range(len(cert.v0))]
        if not all((xi > 0) if s > 0 else (xi < 0) for xi in x):
            return q
    return None


class TestMu:
    def test_positive_and_range_limited(self, golden_root):
        mu = estimate_mu(silver("golden"), golden_root, 10)
        assert mu.range_limited
        assert 0 < mu.lower <= mu.upper
        assert abs(float(mu) - 0.6180339887) < 1e-9

    def test_tribonacci_positive(self, tribonacci_root):
        assert estimate_mu(silver("tribonacci"), tribonacci_root, 8).lower > 0

    def test_reducible_rejected(self):
        sp = silver("0111")
        with pytest.raises(PreconditionError):
            estimate_mu(sp, root_of("0111"), 4)


class TestContraction:
    def test_golden(self, golden_root):
        cb = contraction_bound(silver("golden").poly, golden_root)
        assert Fraction(618, 1000) < cb.delta <= Fraction(9, 10)
        assert cb.gamma == cb.kappa / (1 - cb.delta)

    def test_tribonacci(self, tribonacci_root):
        cb = contraction_bound(silver("tribonacci").poly, tribonacci_root)
        assert Fraction(737, 1000) < cb.delta < Fraction(8, 10)

    def test_delta_bounds_conjugate_moduli(self):
        for name in ("tetranacci", "supergolden", "plastic"):
            p = silver(name).poly
            cb = contraction_bound(p, root_of(name))
            with mpmath.workdps(30):
                roots = mpmath.polyroots([int(c) for c in reversed(p.coeffs)], maxsteps=200, extraprec=100)
            second = sorted(abs(z) for z in roots)[-2]
            assert float(second) < cb.delta < 1

    def test_not_pisot(self):
        with pytest.raises(CannotCertifyError):
            contraction_bound(silver("0101").poly, root_of("0101"))


class TestCertificate:
    @pytest.mark.parametrize("name", ["golden", "tribonacci"])
    def test_invariants(self, certificates, name):
        cert, root = certificates[name]
        assert all(x > 0 for x in cert.v0)
        assert cert.alpha > Fraction(1, 2)
        row = [FieldElement.generator(cert.poly) ** (-j) for j in range(len(cert.v0))]
        assert cert.L * sum((r * x for r, x in zip(row, cert.v0)), 0 * row[0]) == 1
        assert cert.L == basic_length(cert.poly, cert.v0)

    def test_golden_small_vector(self, certificates):
        cert, _ = certificates["golden"]
        assert cert.v0 == (3, 2)

    @pytest.mark.parametrize("name", ["golden", "tribonacci"])
    def test_verifies_and_agrees_with_exact_oracle(self, certificates, name):
        cert, root = certificates[name]
        res = verify_certificate(cert, 7, root)
        assert res.ok and res.witness is None
        assert res.checked + res.skipped_zero == 3**8
        assert res.rederived > 0
        assert exact_check(cert, root, 7) is None

    def test_golden_bound_ten(self, certificates):
        cert, root = certificates["golden"]
        res = verify_certificate(cert, 10, root)
        assert res.ok
        assert res.checked == 3**11 - 355

    @pytest.mark.parametrize("name", ["golden", "tribonacci"])
    @pytest.mark.parametrize("index", [0, 1])
    def test_corruption_detected(self, certificates, name, index):
        cert, root = certificates[name]
        bad = corrupt(cert, index)
        res = verify_certificate(bad, 6, root)
        assert not res.ok
        # the witness is the first failure in product order, confirmed exactly
        assert res.witness == exact_check(bad, root, 6)

    def test_defining_polynomial_is_skipped(self, certificates):
        cert, root = certificates["golden"]
        res = verify_certificate(cert, 2, root)
        assert res.skipped_zero == 3  # 0 and +-(x^2 - x - 1)

    def test_json_round_trip(self, certificates):
        cert, _ = certificates["tribonacci"]
        back = DichotomyCertificate.from_json(cert.to_json())
        assert back == cert

    def test_threads_do_not_change_result(self, certificates, monkeypatch):
        cert, root = certificates["tribonacci"]
        bad = corrupt(cert, 2)
        serial = verify_certificate(bad, 8, root, chunk=500)
        monkeypatch.setenv("SILVERLINE_THREADS", "4")
        threaded = verify_certificate(bad, 8, root, chunk=500)
        assert serial == threaded

    def test_progress(self, certificates):
        cert, root = certificates["golden"]
        seen = []
        verify_certificate(cert, 6, root, progress=lambda done, total: seen.append((done, total)), chunk=300)
        assert seen[-1] == (3**7, 3**7)
        assert [d for d, _ in seen] == sorted(d for d, _ in seen)


class TestImpossibility:
    def test_supergolden(self):
        rep = rational_L_impossibility("supergolden")
        assert rep.contradiction
        assert rep.relation == ("La+1", "Lb-1", "Lc")
        assert rep.identities["psi^4 - psi^3 = psi"]

    def test_plastic(self):
        rep = rational_L_impossibility("plastic")
        assert rep.contradiction
        assert rep.relation == ("La+1", "Lb-1", "Lc-1")
        assert all(rep.identities.values())

    def test_golden_control(self):
        rep = rational_L_impossibility("golden")
        assert not rep.contradiction

    def test_unknown(self):
        with pytest.raises(PreconditionError):
            rational_L_impossibility("silver")


class TestReport:
    @pytest.mark.parametrize("name", ["golden", "tribonacci", "tetranacci"])
    def test_distinguished_certified(self, name):
        rep = dichotomy_report(silver(name), root_of(name), bounds=(4, 6, 8))
        assert rep.verdict == "certified-tiling"
        assert rep.certificate.verified_degree == 8
        assert rep.distinguished

    def test_not_pisot(self):
        rep = dichotomy_report(silver("0101"))
        assert rep.verdict == "inconclusive"
        assert "Pisot" in rep.reason

    def test_reducible(self):
        rep = dichotomy_report(silver("0111"))
        assert rep.verdict == "inconclusive"
