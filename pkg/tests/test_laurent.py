import unittest
import sys
import os
from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

# Add the parent directory to sys.path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.config import Limits
from src.core.errors import (
    HtsasmError,
    NonInvertibleImage,
    PolynomialParseError,
    SizeLimitExceeded,
    ZeroAssignment,
)
from src.core.laurent import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    LaurentPoly,
    RationalSeriesSpec,
    VarId,
    bar,
    determinant,
    eval_rational,
    exact_divide,
    parse_poly,
    product,
    series_coeff,
    series_coefficient_of_quotient,
    series_expansion,
    substitute,
    var,
)

x1, x2, y1, q = var("x", 1), var("x", 2), var("y", 1), var("q")
Q = VarId("q", 0)

_VARIABLES = [VarId("x", 1), VarId("x", 2), VarId("y", 1), VarId("z0", 0)]


@st.composite
def laurent_polys(draw, max_terms=4):
    """Small Laurent polynomials with integer coefficients and exponents in -2..2."""
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(-2, 2), min_size=len(_VARIABLES), max_size=len(_VARIABLES)))
        mono = tuple((v, e) for v, e in zip(_VARIABLES, exps) if e)
        terms[mono] = draw(st.integers(-3, 3))
    return LaurentPoly(terms)


class TestGaussianRational(unittest.TestCase):
    """Exact complex coefficients."""

    def test_arithmetic(self):
        a = GaussianRational(Fraction(1, 2), 1)
        b = GaussianRational(2, -3)
        self.assertEqual(a * b, GaussianRational(Fraction(1, 2) * 2 + 3, Fraction(-3, 2) + 2))
        self.assertEqual(a / a, 1)
        self.assertEqual(GaussianRational(0, 1) ** 2, -1)
        self.assertEqual(GaussianRational(0, 1) ** -1, GaussianRational(0, -1))

    def test_division_by_zero(self):
        with self.assertRaises(ZeroDivisionError):
            GaussianRational(0).inverse()

    def test_parse_printed_forms(self):
        self.assertEqual(GaussianRational.parse("3"), 3)
        self.assertEqual(GaussianRational.parse("(3/2)"), Fraction(3, 2))
        self.assertEqual(GaussianRational.parse("i"), GaussianRational(0, 1))
        self.assertEqual(GaussianRational.parse("(1/2-3*i)"), GaussianRational(Fraction(1, 2), -3))
        with self.assertRaises(PolynomialParseError):
            GaussianRational.parse("(1/2-3*j)")


class TestLaurentArithmetic(unittest.TestCase):
    """Ring operations, inverses and exact division."""

    def test_cancellation_drops_terms(self):
        p = x1 + y1 - x1
        self.assertEqual(p, y1)
        self.assertEqual(len(x1 - x1), 0)
        self.assertTrue((x1 - x1).is_zero())

    def test_monomial_inverse(self):
        self.assertEqual(bar(x1) * x1, ONE)
        self.assertEqual((x1 * x2 ** 3) ** -2, bar(x1) ** 2 * bar(x2) ** 6)

    def test_non_monomial_has_no_inverse(self):
        with self.assertRaises(NonInvertibleImage):
            (ONE + x1).inverse()

    def test_imaginary_unit(self):
        self.assertEqual(I * I, -ONE)
        self.assertFalse((I * x1).is_real())
        self.assertTrue((I * I * x1).is_real())

    def test_degrees_and_coefficients(self):
        p = parse_poly("3*x1^2*y1 - x1^-1 + 5")
        self.assertEqual(p.degree(VarId("x", 1)), 2)
        self.assertEqual(p.low_degree(VarId("x", 1)), -1)
        self.assertEqual(p.coefficient(VarId("x", 1), 2), 3 * y1)
        self.assertEqual(p.constant_term(), 5)

    def test_exact_division(self):
        numerator = (ONE + x1 * x2) * (ONE - x1 * bar(y1)) * (x1 + 2 * x2)
        self.assertEqual(exact_divide(numerator, ONE + x1 * x2), (ONE - x1 * bar(y1)) * (x1 + 2 * x2))
        self.assertEqual(numerator / (x1 + 2 * x2), (ONE + x1 * x2) * (ONE - x1 * bar(y1)))

    def test_inexact_division_raises(self):
        with self.assertRaises(HtsasmError):
            exact_divide(ONE + x1, ONE + x2)
        with self.assertRaises(ZeroDivisionError):
            exact_divide(x1, ZERO)

    def test_unknown_family(self):
        with self.assertRaises(HtsasmError):
            LaurentPoly.var("w", 1)
        with self.assertRaises(HtsasmError):
            LaurentPoly.var("z0", 2)

    @settings(max_examples=40, deadline=None)
    @given(laurent_polys(), laurent_polys(), laurent_polys())
    def test_distributive(self, p, r, s):
        self.assertEqual((p + r) * s, p * s + r * s)
        self.assertEqual(p * r, r * p)

    @settings(max_examples=30, deadline=None)
    @given(laurent_polys(), laurent_polys(max_terms=3))
    def test_division_undoes_multiplication(self, p, d):
        if d.is_zero():
            return
        self.assertEqual(exact_divide(p * d, d), p)


class TestTextFormat(unittest.TestCase):
    """Canonical printing and parsing."""

    def test_canonical_order(self):
        self.assertEqual(str(x1 + ONE), "1 + x1")
        self.assertEqual(str(x1 * var("z0") + ONE), "1 + x1*z0")
        self.assertEqual(str(ZERO), "0")
        self.assertEqual(str(-3 * x1 * bar(y1)), "-3*x1*y1^-1")

    def test_coefficient_forms(self):
        self.assertEqual(str(I * x1), "i*x1")
        self.assertEqual(str(LaurentPoly.const(Fraction(1, 2)) * x1), "(1/2)*x1")
        self.assertEqual(str(LaurentPoly.const(GaussianRational(1, 2)) * x1), "(1+2*i)*x1")

    def test_underscored_and_indexless_names(self):
        p = var("a1", 3) * var("b0") + var("eps")
        self.assertEqual(parse_poly(str(p)), p)
        self.assertIn("a1_3", str(p))

    def test_parse_rejects_garbage(self):
        for text in ("x1 +* 2", "w3", "x1^", ""):
            with self.subTest(text=text):
                with self.assertRaises(PolynomialParseError):
                    parse_poly(text)

    def test_parse_accepts_reordering(self):
        self.assertEqual(parse_poly("y1^-1 + 2*x1 - 1"), parse_poly("-1 + 2*x1 + y1^-1"))

    @settings(max_examples=50, deadline=None)
    @given(laurent_polys())
    def test_printed_form_reads_back(self, p):
        self.assertEqual(parse_poly(str(p)), p)


class TestHomomorphisms(unittest.TestCase):
    """Substitution and exact evaluation."""

    def test_substitute(self):
        p = x1 ** 2 + bar(y1)
        image = substitute(p, {VarId("x", 1): ONE + x2, VarId("y", 1): I * x2})
        self.assertEqual(image, (ONE + x2) ** 2 - I * bar(x2))

    def test_negative_power_needs_monomial_image(self):
        with self.assertRaises(NonInvertibleImage):
            substitute(bar(x1), {VarId("x", 1): ONE + x2})

    def test_evaluate(self):
        p = parse_poly("x1^2 - 3*x1^-1*y1 + i")
        value = eval_rational(p, {VarId("x", 1): Fraction(1, 2), VarId("y", 1): 2})
        self.assertEqual(value, GaussianRational(Fraction(1, 4) - 12, 1))

    def test_zero_assignment(self):
        with self.assertRaises(ZeroAssignment):
            eval_rational(bar(x1), {VarId("x", 1): 0})
        with self.assertRaises(HtsasmError):
            eval_rational(x1 + y1, {VarId("x", 1): 1})

    def test_to_sympy(self):
        p = parse_poly("x1^2*y1^-1 - (1/2)*z0 + i")
        X, Y, Z = sympy.symbols("x1 y1 z0")
        self.assertEqual(sympy.simplify(p.to_sympy() - (X ** 2 / Y - sympy.Rational(1, 2) * Z + sympy.I)), 0)


class TestSeries(unittest.TestCase):
    """Truncated expansions of rational series."""

    def test_geometric(self):
        spec = RationalSeriesSpec(Q, (), (ONE - x1 * q,), 0)
        self.assertEqual(series_expansion(spec, 3), [ONE, x1, x1 ** 2, x1 ** 3])

    def test_linear_numerator_and_shift(self):
        spec = RationalSeriesSpec(Q, (ONE + q,), (ONE - q,), 1)
        self.assertEqual(series_expansion(spec, 4), [ZERO, ONE, 2 * ONE, 2 * ONE, 2 * ONE])
        self.assertEqual(series_coeff(spec, 0), ZERO)
        self.assertEqual(series_coeff(spec, -1), ZERO)

    def test_agrees_with_sympy(self):
        spec = RationalSeriesSpec(Q, (ONE + x2 * q,), (ONE - x1 * q, ONE - y1 * q), 0)
        X1, X2, Y1, S = sympy.symbols("x1 x2 y1 q")
        expected = sympy.series((1 + X2 * S) / ((1 - X1 * S) * (1 - Y1 * S)), S, 0, 5).removeO()
        for k, coeff in enumerate(series_expansion(spec, 4)):
            with self.subTest(k=k):
                self.assertEqual(sympy.expand(coeff.to_sympy() - expected.coeff(S, k)), 0)

    def test_malformed_factors(self):
        with self.assertRaises(HtsasmError):
            RationalSeriesSpec(Q, (q ** 2,), (), 0)
        with self.assertRaises(HtsasmError):
            RationalSeriesSpec(Q, (), (2 * ONE - q,), 0)

    def test_quotient_coefficient(self):
        numerator = bar(q) + x1 * q
        denominators = [ONE - y1 * q]
        # q^-1 (1 + y q + y^2 q^2 + ...) + x q (1 + ...)
        self.assertEqual(series_coefficient_of_quotient(numerator, denominators, Q, -1), ONE)
        self.assertEqual(series_coefficient_of_quotient(numerator, denominators, Q, 1), y1 ** 2 + x1)


class TestDeterminant(unittest.TestCase):
    """Cofactor and Bareiss routes."""

    def setUp(self):
        self.values = [x1, x2, y1]
        self.vandermonde = [[v ** e for v in self.values] for e in (2, 1, 0)]
        self.expected = (x1 - x2) * (x1 - y1) * (x2 - y1)

    def test_vandermonde_cofactor(self):
        self.assertEqual(determinant(self.vandermonde), self.expected)

    def test_vandermonde_bareiss(self):
        self.assertEqual(determinant(self.vandermonde, Limits(cofactor_cutoff=0)), self.expected)

    def test_bareiss_pivot_swap(self):
        matrix = [[ZERO, x1, ONE], [y1, ZERO, x2], [ONE, ONE, ZERO]]
        self.assertEqual(
            determinant(matrix, Limits(cofactor_cutoff=0)),
            determinant(matrix),
        )

    def test_against_sympy(self):
        matrix = [[ONE + x1, bar(y1), ZERO], [x2, I, ONE], [x1 * x2, ONE, y1]]
        expected = sympy.Matrix([[e.to_sympy() for e in row] for row in matrix]).det()
        self.assertEqual(sympy.expand(determinant(matrix).to_sympy() - expected), 0)

    def test_shape_and_size_limits(self):
        self.assertEqual(determinant([]), ONE)
        with self.assertRaises(HtsasmError):
            determinant([[ONE, ONE]])
        with self.assertRaises(SizeLimitExceeded):
            determinant([[ONE] * 3] * 3, Limits(max_det_side=2))

    def test_product_helper(self):
        self.assertEqual(product([]), ONE)
        self.assertEqual(product([x1, x1, bar(x1)]), x1)


if __name__ == "__main__":
    unittest.main()
