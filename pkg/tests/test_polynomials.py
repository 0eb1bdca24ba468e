"""Integer polynomials, silver polynomials, Sturm counts and factoring.

sympy is used only as an independent factoring oracle.
"""
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from silverline.errors import InvalidDegreeError
from silverline.polynomials import (
    IntPolynomial,
    SilverPolynomial,
    count_real_roots,
    enumerate_silver_polynomials,
    factor,
    is_irreducible,
    is_square_free,
)

X = sympy.Symbol("x")


def to_sympy(p: IntPolynomial):
    return sympy.Poly(list(reversed(p.coeffs)), X)


def sympy_factors(p: IntPolynomial):
    _, facs = sympy.factor_list(to_sympy(p).as_expr(), X)
    out = []
    for f, mult in facs:
        coeffs = [int(c) for c in reversed(sympy.Poly(f, X).all_coeffs())]
        if coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        out.extend([tuple(coeffs)] * mult)
    return sorted(out)


small_coeffs = st.lists(st.integers(-6, 6), min_size=1, max_size=6)


def poly_from(coeffs):
    return IntPolynomial(coeffs)


class TestIntPolynomial:
    def test_string_form(self):
        assert str(IntPolynomial([-1, -1, 1])) == "x^2 - x - 1"
        assert str(IntPolynomial([-1, 0, -1, 1])) == "x^3 - x^2 - 1"
        assert str(IntPolynomial([0])) == "0"

    def test_trimming_and_degree(self):
        p = IntPolynomial([1, 2, 0, 0])
        assert p.degree == 1
        assert p.coeffs == (1, 2)

    @given(small_coeffs, small_coeffs, st.integers(-5, 5))
    def test_ring_operations_agree_with_evaluation(self, a, b, x):
        p, q = poly_from(a), poly_from(b)
        assert (p + q)(x) == p(x) + q(x)
        assert (p - q)(x) == p(x) - q(x)
        assert (p * q)(x) == p(x) * q(x)
        assert (p**2)(x) == p(x) ** 2

    @given(small_coeffs, st.lists(st.integers(-4, 4), min_size=1, max_size=4))
    def test_divmod_monic_reconstructs(self, a, b):
        d = IntPolynomial(list(b) + [1])
        p = poly_from(a)
        q, r = p.divmod_monic(d)
        assert q * d + r == p
        assert r.is_zero or r.degree < d.degree

    @given(small_coeffs)
    def test_json_round_trip(self, a):
        p = poly_from(a)
        assert IntPolynomial.from_json(p.to_json()) == p

    def test_substitute_power(self):
        golden = SilverPolynomial.from_string("11").poly
        assert golden.substitute_power(2) == SilverPolynomial.from_string("0101").poly


class TestSilverPolynomial:
    def test_degree_two_is_golden_only(self):
        polys = enumerate_silver_polynomials(2)
        assert [str(p) for p in polys] == ["x^2 - x - 1"]

    def test_degree_three(self):
        got = {str(p) for p in enumerate_silver_polynomials(3)}
        assert got == {"x^3 - x^2 - x - 1", "x^3 - x^2 - 1", "x^3 - x - 1"}

    @pytest.mark.parametrize("n", range(2, 9))
    def test_counts(self, n):
        assert len(enumerate_silver_polynomials(n)) == 2 ** (n - 1) - 1

    def test_lexicographic_order(self):
        bits = [p.bits for p in enumerate_silver_polynomials(4)]
        assert bits == sorted(bits)

    @pytest.mark.parametrize("bad", ["1", "10", "001", "0001", "12"])
    def test_invalid_bits(self, bad):
        with pytest.raises(ValueError):
            SilverPolynomial.from_string(bad)

    def test_invalid_degree(self):
        with pytest.raises(InvalidDegreeError):
            enumerate_silver_polynomials(1)

    def test_from_poly_round_trip(self):
        for p in enumerate_silver_polynomials(5):
            assert SilverPolynomial.from_poly(p.poly) == p

    def test_indices_and_distinguished(self):
        assert SilverPolynomial.from_string("0101").indices == (2, 4)
        assert SilverPolynomial.distinguished(4).is_distinguished
        assert not SilverPolynomial.from_string("101").is_distinguished


class TestSturm:
    def test_golden_roots(self):
        p = IntPolynomial([-1, -1, 1])
        assert count_real_roots(p, -2, 2) == 2
        assert count_real_roots(p, 0, 2) == 1
        assert count_real_roots(p, Fraction(16, 10), Fraction(17, 10)) == 1

    @given(st.lists(st.integers(-3, 3), min_size=1, max_size=4, unique=True))
    def test_counts_products_of_linear_factors(self, roots):
        p = IntPolynomial([1])
        for r in roots:
            p = p * IntPolynomial([-r, 1])
        assert count_real_roots(p, -10, 10) == len(roots)
        assert count_real_roots(p, Fraction(-1, 2), Fraction(1, 2)) == (1 if 0 in roots else 0)

    def test_square_free(self):
        assert is_square_free(IntPolynomial([-1, -1, 1]))
        assert not is_square_free(IntPolynomial([1, 2, 1]))


class TestFactor:
    def test_reducible_quartic(self):
        p = SilverPolynomial.from_string("0111").poly
        assert [str(f) for f in factor(p)] == ["x + 1", "x^3 - x^2 - 1"]
        assert not is_irreducible(p)

    @pytest.mark.parametrize("bits", ["101", "011", "111", "11"])
    def test_irreducible_cubics(self, bits):
        assert is_irreducible(SilverPolynomial.from_string(bits).poly)

    def test_linear_is_irreducible(self):
        assert is_irreducible(IntPolynomial([-1, 1]))

    @pytest.mark.parametrize("n", range(2, 8))
    def test_silver_factorisations_match_sympy(self, n):
        for sp in enumerate_silver_polynomials(n):
            got = sorted(f.coeffs for f in factor(sp.poly))
            assert got == sympy_factors(sp.poly), str(sp)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-5, 5), min_size=2, max_size=5), st.lists(st.integers(-5, 5), min_size=1, max_size=4))
    def test_products_of_monic_polynomials(self, a, b):
        p = IntPolynomial(list(a) + [1]) * IntPolynomial(list(b) + [1])
        facs = factor(p)
        prod = IntPolynomial([1])
        for f in facs:
            prod = prod * f
        assert prod == p
        assert sorted(f.coeffs for f in facs) == sympy_factors(p)


def test_census_of_reducible_silver_polynomials_up_to_degree_6():
    reducible = [sp.bits for n in range(2, 7) for sp in enumerate_silver_polynomials(n) if not is_irreducible(sp.poly)]
    oracle = [
        sp.bits
        for n in range(2, 7)
        for sp in enumerate_silver_polynomials(n)
        if not to_sympy(sp.poly).is_irreducible
    ]
    assert reducible == oracle
    assert (0, 1, 1, 1) in reducible
