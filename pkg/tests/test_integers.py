"""rho-integers: normal forms, ordering, successors and the difference scan.

The ordering oracle evaluates every bit vector in 60-digit floating point,
independently of the exact recursion in the library.
"""
import itertools
from fractions import Fraction
from functools import cmp_to_key

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import root_of, silver
from silverline.errors import PreconditionError
from silverline.integers import (
    EMPTY,
    NormalForm,
    SigmaIntRep,
    all_reps,
    brute_force_integers,
    compare,
    enumerate_integers,
    enumerate_with_gaps,
    inflate,
    is_normal_form,
    largest_of_degree,
    min_difference_scan,
    successor,
    to_normal_form,
    value_of,
)
from silverline.numfield import FieldElement, field_sign
from silverline.polynomials import SilverPolynomial


def numeric_root(N):
    with mpmath.workdps(60):
        return mpmath.findroot(lambda x: x**N - sum(x**k for k in range(N)), 1.99)


def oracle_integers(N, max_degree):
    """Distinct values of all bit vectors of degree <= max_degree below rho^(max_degree+1), sorted."""
    with mpmath.workdps(60):
        r = numeric_root(N)
        vals = set()
        for rep in all_reps(max_degree):
            v = sum(b * r ** (len(rep.bits) - 1 - i) for i, b in enumerate(rep.bits)) if rep.bits else mpmath.mpf(0)
            vals.add(mpmath.nstr(v, 40))
        ordered = sorted((mpmath.mpf(v) for v in vals))
        bound = r ** (max_degree + 1)
        return [v for v in ordered if v < bound - mpmath.mpf(10) ** -30]


def bits_of(s):
    return SigmaIntRep.from_string(s)


class TestRepresentation:
    def test_trimming(self):
        assert SigmaIntRep((0, 0, 1, 0)).bits == (1, 0)
        assert str(SigmaIntRep(())) == "0"
        assert EMPTY.is_empty and EMPTY.degree == float("-inf")

    def test_values(self):
        g = silver("golden")
        assert value_of(bits_of("11"), g) == FieldElement.generator(g.poly) ** 2
        t = silver("tribonacci")
        rho = FieldElement.generator(t.poly)
        assert value_of(bits_of("1000"), t) == rho**2 + rho + 1
        assert value_of(EMPTY, g).is_zero()

    @pytest.mark.parametrize("s, expected", [("1", "10"), ("101", "1010"), ("0", "0")])
    def test_inflate(self, s, expected):
        assert str(inflate(bits_of(s))) == expected

    @given(st.lists(st.integers(0, 1), max_size=14))
    def test_inflate_multiplies_by_rho(self, bits):
        t = silver("tribonacci")
        rho = FieldElement.generator(t.poly)
        rep = SigmaIntRep(bits)
        assert value_of(inflate(rep), t) == rho * value_of(rep, t)


class TestNormalForm:
    @pytest.mark.parametrize(
        "N, s, expected",
        [(2, "101001", True), (2, "11", False), (3, "110110", True), (3, "111", False), (4, "1110111", True)],
    )
    def test_is_normal(self, N, s, expected):
        assert is_normal_form(bits_of(s), N) is expected

    @pytest.mark.parametrize("N, s, expected", [(2, "11", "100"), (3, "111", "1000"), (2, "111", "1001")])
    def test_examples(self, N, s, expected):
        assert str(to_normal_form(bits_of(s), N)) == expected

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_exhaustive_small(self, N):
        sp = SilverPolynomial.distinguished(N)
        forms = {}
        for rep in all_reps(9):
            nf = to_normal_form(rep, N)
            assert is_normal_form(nf, N)
            assert value_of(nf, sp) == value_of(rep, sp)
            if not rep.is_empty:
                assert nf.degree in (rep.degree, rep.degree + 1)
            forms.setdefault(value_of(nf, sp), set()).add(str(nf))
        assert all(len(v) == 1 for v in forms.values())

    @settings(max_examples=200)
    @given(st.integers(2, 6), st.lists(st.integers(0, 1), max_size=20))
    def test_random_long(self, N, bits):
        sp = SilverPolynomial.distinguished(N)
        rep = SigmaIntRep(bits)
        nf = to_normal_form(rep, N)
        assert is_normal_form(nf, N)
        assert value_of(nf, sp) == value_of(rep, sp)

    def test_normal_form_requires_window(self):
        with pytest.raises(ValueError):
            NormalForm((1, 1), 2)


class TestOrdering:
    def test_examples(self):
        assert compare(bits_of("101"), bits_of("100"), 2) == 1
        assert compare(bits_of("1000"), bits_of("110"), 3) == 1
        with pytest.raises(PreconditionError):
            compare(bits_of("100"), bits_of("11"), 2)

    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_agrees_with_field_sign_pairwise(self, N):
        sp = SilverPolynomial.distinguished(N)
        root = root_of("1" * N)
        forms = sorted({str(to_normal_form(r, N)) for r in all_reps(6)})
        reps = [bits_of(s) for s in forms]
        vals = [value_of(r, sp) for r in reps]
        for (a, va), (b, vb) in itertools.combinations(zip(reps, vals), 2):
            assert compare(a, b, N) == field_sign(va - vb, root)

    @pytest.mark.parametrize("N", [2, 3])
    def test_sorted_order_matches_numeric_oracle(self, N):
        sp = SilverPolynomial.distinguished(N)
        ints = enumerate_integers(N, 60)
        oracle = oracle_integers(N, 8)[:60]
        with mpmath.workdps(60):
            r = numeric_root(N)
            got = [sum(b * r ** (len(x.bits) - 1 - i) for i, b in enumerate(x.bits)) if x.bits else 0 for x in ints]
        assert all(abs(a - b) < mpmath.mpf(10) ** -25 for a, b in zip(got, oracle))


class TestSuccessor:
    def test_examples(self):
        g = silver("golden").poly
        x, d = successor(EMPTY, 2)
        assert str(x) == "1" and d == 1
        x, d = successor(bits_of("1"), 2)
        assert str(x) == "10" and d == FieldElement.generator(g) - 1
        t = silver("tribonacci").poly
        x, d = successor(bits_of("11"), 3)
        rho = FieldElement.generator(t)
        assert str(x) == "100"
        assert d == rho.inverse()

    def test_golden_sequence(self):
        assert [str(x) for x in enumerate_integers(2, 8)] == ["0", "1", "10", "100", "101", "1000", "1001", "1010"]

    def test_tribonacci_start(self):
        t = silver("tribonacci").poly
        rho = FieldElement.generator(t)
        vals = [value_of(x, t) for x in enumerate_integers(3, 4)]
        assert vals == [0, 1, rho, rho + 1]

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_matches_brute_force(self, N):
        sp = SilverPolynomial.distinguished(N)
        root = root_of("1" * N)
        brute = brute_force_integers(sp, 8, root)
        ints, gaps = enumerate_with_gaps(N, len(brute))
        assert [value_of(x, sp) for x in ints] == [v for v, _ in brute]
        for (a, _), (b, _), g in zip(brute, brute[1:], gaps):
            assert b - a == g

    @pytest.mark.parametrize(
        "N, n, expected", [(2, 3, "1010"), (3, 2, "110"), (3, 5, "110110"), (4, 6, "1110111")]
    )
    def test_largest_of_degree(self, N, n, expected):
        assert str(largest_of_degree(n, N)) == expected
        forms = [to_normal_form(SigmaIntRep((1,) + t), N) for t in itertools.product((0, 1), repeat=n)]
        forms = [f for f in forms if f.degree == n]
        assert str(max(forms, key=cmp_to_key(lambda a, b: compare(a, b, N)))) == expected

    def test_first_two_are_zero_and_one(self):
        for N in range(2, 7):
            a, b = enumerate_integers(N, 2)
            assert str(a) == "0" and str(b) == "1"


# frozen results of the exhaustive difference scan (oracle: this scan re-run with
# exact arithmetic over every candidate for the small bounds, see test below)
FROZEN_MINIMA = {
    "golden": {2: 0.618034, 4: 0.618034, 6: 0.618034, 8: 0.618034, 10: 0.618034},
    "tribonacci": {2: 0.543689, 4: 0.543689, 6: 0.543689, 8: 0.543689},
    "tetranacci": {2: 0.787933, 4: 0.51879, 6: 0.51879},
    "supergolden": {2: 0.317672, 4: 0.216757, 6: 0.147899, 8: 0.147899},
    "plastic": {2: 0.324718, 4: 0.185037, 6: 0.105442, 8: 0.079596},
}


class TestScan:
    @pytest.mark.parametrize("name", sorted(FROZEN_MINIMA))
    def test_frozen_minima(self, name):
        sp = silver(name)
        root = root_of(name)
        for d, expected in FROZEN_MINIMA[name].items():
            res = min_difference_scan(sp.poly, root, d)
            assert res.status == "complete" and res.range_limited
            assert abs(res.minimum_float - expected) < 1e-6, (name, d)
            lo, hi = res.minimum
            assert 0 < lo <= hi
            w = FieldElement.from_poly(sp.poly, list(res.witness))
            assert field_sign(w, root) != 0

    @pytest.mark.parametrize("name, d", [("golden", 4), ("tribonacci", 4), ("plastic", 5)])
    def test_exact_oracle(self, name, d):
        sp = silver(name)
        root = root_of(name)
        best = None
        zeros = 0
        for q in itertools.product((-1, 0, 1), repeat=d + 1):
            v = FieldElement.from_poly(sp.poly, list(q))
            if v.is_zero():
                zeros += 1
                continue
            if field_sign(v, root) < 0:
                v = -v
            if best is None or field_sign(v - best, root) < 0:
                best = v
        res = min_difference_scan(sp.poly, root, d)
        lo, hi = best.interval(root, 128)
        assert res.minimum == (lo, hi)
        assert res.zero_count == zeros

    def test_zero_filter_excludes_defining_polynomial(self, golden_root):
        res = min_difference_scan(silver("golden").poly, golden_root, 2)
        assert res.zero_count >= 2  # +-(x^2 - x - 1)
        assert res.witness not in ((-1, -1, 1), (1, 1, -1))

    def test_monotone_in_degree(self):
        root = root_of("plastic")
        vals = [min_difference_scan(silver("plastic").poly, root, d).minimum for d in range(2, 9)]
        assert all(b[0] <= a[1] for a, b in zip(vals, vals[1:]))

    def test_golden_minimum_bounded_by_smallest_gap(self, golden_root):
        res = min_difference_scan(silver("golden").poly, golden_root, 10)
        assert res.zero_count == 355
        inv = FieldElement.generator(silver("golden").poly).inverse()
        assert res.minimum == inv.interval(golden_root, 128)

    def test_budget(self, golden_root):
        res = min_difference_scan(silver("golden").poly, golden_root, 6, budget=100)
        assert res.status == "partial" and res.scanned == 100
