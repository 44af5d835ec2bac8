import json
import math
import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonk.exact_core import (
    ZERO_DEGREE,
    LambdaPolynomial,
    OrderKParams,
    binomial,
    factorial,
    format_rational,
    parse_rational,
)

BIG = 10**30

rationals = st.builds(
    Fraction,
    st.integers(min_value=-BIG, max_value=BIG),
    st.integers(min_value=1, max_value=BIG),
)

polynomials = st.dictionaries(st.integers(0, 12), rationals, max_size=8).map(LambdaPolynomial)


class TestRational:
    def test_add(self):
        assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)

    def test_zero_annihilates(self):
        product = Fraction(1, 2) * Fraction(0, 1)
        assert (product.numerator, product.denominator) == (0, 1)

    def test_canonical_form(self):
        value = Fraction(3, 6)
        assert (value.numerator, value.denominator) == (1, 2)
        assert Fraction(3, -6).denominator > 0

    @given(rationals, rationals)
    def test_add_then_subtract_is_exact(self, a, b):
        assert (a + b) - b == a

    @given(rationals)
    def test_reduced(self, a):
        assert a.denominator > 0
        assert math.gcd(abs(a.numerator), a.denominator) == 1

    @pytest.mark.parametrize(
        "value, text",
        [(Fraction(0), "0"), (Fraction(1), "1"), (Fraction(-7, 3), "-7/3"), (Fraction(6, 4), "3/2")],
    )
    def test_format(self, value, text):
        assert format_rational(value) == text

    @given(rationals)
    def test_format_round_trip(self, a):
        assert parse_rational(format_rational(a)) == a


class TestFactorialBinomial:
    @pytest.mark.parametrize("m, expected", [(0, 1), (5, 120), (8, 40320)])
    def test_factorial(self, m, expected):
        assert factorial(m) == expected

    def test_factorial_matches_math(self):
        for m in range(200):
            assert factorial(m) == math.factorial(m)

    def test_factorial_rejects_negative(self):
        with pytest.raises(ValueError):
            factorial(-1)

    @pytest.mark.parametrize("n, j, expected", [(6, 3, 20), (0, 2, 0), (5, -1, 0), (1, 2, 0), (7, 7, 1)])
    def test_binomial(self, n, j, expected):
        assert binomial(n, j) == expected

    def test_binomial_rejects_negative_top(self):
        with pytest.raises(ValueError):
            binomial(-1, 0)

    def test_symmetry_and_range(self):
        for n in range(51):
            for j in range(-3, n + 4):
                if 0 <= j <= n:
                    assert binomial(n, j) == binomial(n, n - j) == math.comb(n, j)
                else:
                    assert binomial(n, j) == 0

    def test_pascal(self):
        for n in range(1, 51):
            for j in range(-2, n + 3):
                assert binomial(n, j) == binomial(n - 1, j - 1) + binomial(n - 1, j)

    def test_concurrent_growth(self):
        from poissonk import exact_core

        results = {}

        def worker(m):
            results[m] = factorial(m)

        exact_core._factorials[:] = [1]
        threads = [threading.Thread(target=worker, args=(m,)) for m in range(300, 340)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(results[m] == math.factorial(m) for m in results)
        assert all(exact_core._factorials[i] == math.factorial(i) for i in range(len(exact_core._factorials)))


def poly(**terms):
    # poly(d2="1/2", d1=1) -> lambda^2/2 + lambda
    return LambdaPolynomial({int(k[1:]): Fraction(v) for k, v in terms.items()})


class TestLambdaPolynomial:
    def test_cancellation_prunes(self):
        result = poly(d2="1/2", d1=1) - poly(d1=1)
        assert result == poly(d2="1/2")
        assert result.coeffs == {2: Fraction(1, 2)}

    def test_scale(self):
        assert poly(d3="1/6").scale(6) == poly(d3=1)

    def test_add_zero(self):
        p = poly(d2="1/2", d1=1)
        assert p + LambdaPolynomial.zero() == p

    def test_zero_coefficients_not_stored(self):
        assert LambdaPolynomial({0: 0, 3: Fraction(0, 5)}).coeffs == {}

    def test_degrees(self):
        p = poly(d5=2, d2="1/3")
        assert p.degree() == 5
        assert p.min_degree() == 2
        assert LambdaPolynomial.zero().degree() == ZERO_DEGREE
        with pytest.raises(ValueError):
            LambdaPolynomial.zero().min_degree()

    def test_rejects_negative_degree(self):
        with pytest.raises(ValueError):
            LambdaPolynomial({-1: 1})

    @given(polynomials)
    def test_self_subtraction_is_empty(self, p):
        diff = p - p
        assert diff.is_zero()
        assert diff.coeffs == {}

    @given(polynomials, polynomials)
    def test_add_commutes(self, p, q):
        assert p + q == q + p

    @given(polynomials, polynomials, polynomials)
    def test_product_distributes(self, p, q, s):
        assert p * (q + s) == p * q + p * s

    def test_multiply_by_monomial(self):
        inner = poly(d2="3/2", d3="1/6")
        assert LambdaPolynomial.monomial(1) * inner == poly(d3="3/2", d4="1/6")

    def test_from_terms_merges(self):
        p = LambdaPolynomial.from_terms([(2, Fraction(3, 2)), (2, Fraction(-1)), (1, 1), (1, -1)])
        assert p == poly(d2="1/2")

    def test_hash_consistent_with_eq(self):
        assert hash(poly(d2="1/2", d1=1)) == hash(poly(d1=1) + poly(d2="1/2"))


class TestSerialization:
    def test_json_format(self):
        assert poly(d2="1/2", d1=1).to_json() == '{"2":"1/2","1":"1"}'

    @given(polynomials)
    def test_json_round_trip(self, p):
        text = p.to_json()
        assert LambdaPolynomial.from_json(text) == p
        assert LambdaPolynomial.from_json(text).to_json() == text
        assert all(isinstance(v, str) for v in json.loads(text).values())

    @pytest.mark.parametrize(
        "p, text",
        [
            (poly(d2="1/2", d1=1), "λ^2/2 + λ"),
            (poly(d0=1), "1"),
            (LambdaPolynomial.zero(), "0"),
            (poly(d2="3/2", d4="1/24"), "λ^4/24 + 3λ^2/2"),
            (poly(d3=-1, d0="-2/3"), "-λ^3 - 2/3"),
            (poly(d1=5), "5λ"),
        ],
    )
    def test_text(self, p, text):
        assert p.to_text() == text

    def test_ascii_text(self):
        assert poly(d2="1/2", d1=1).to_text(ascii=True) == "L^2/2 + L"


class TestEvaluation:
    @given(polynomials, st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=100))
    @settings(max_examples=200)
    def test_horner_matches_exact(self, p, lam):
        exact = p.evaluate_exact(lam)
        scale = sum(abs(c) * lam**d for d, c in p.coeffs.items())
        assert abs(p.evaluate(float(lam)) - float(exact)) <= 1e-12 * float(scale) + 1e-300

    def test_sparse_horner(self):
        assert poly(d4=1, d1=2).evaluate(3.0) == 81 + 6

    def test_zero(self):
        assert LambdaPolynomial.zero().evaluate(2.0) == 0.0


class TestOrderKParams:
    @pytest.mark.parametrize("k, lam", [(0, 1.0), (-1, 1.0), (2, 0.0), (2, -0.5), (2, math.inf), (2, math.nan)])
    def test_rejects(self, k, lam):
        with pytest.raises(ValueError):
            OrderKParams(k, lam)

    def test_accepts(self):
        assert OrderKParams(3, 0.5).k == 3
