import unittest
import sys
import os

import sympy
from hypothesis import given, settings, strategies as st

# Add the parent directory to sys.path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.errors import HtsasmError
from src.core.laurent import ONE, ZERO, bar, parse_poly, var
from src.core.symfunc import (
    FrobeniusForm,
    Partition,
    alternant_leading_term_check,
    cauchy_check,
    classA,
    classC,
    complete,
    elementary,
    littlewood_products,
    lr_coefficient,
    partitions_of,
    phi_bn_prime,
    schur,
    schur_alternant,
    skew_schur,
    skew_schur_lr,
    so_universal,
)

X = [var("x", i) for i in range(1, 4)]


class TestPartitions(unittest.TestCase):
    """Partition bookkeeping and Frobenius coordinates."""

    def test_normalisation(self):
        self.assertEqual(Partition((3, 1, 0, 0)).parts, (3, 1))
        with self.assertRaises(HtsasmError):
            Partition((1, 2))
        with self.assertRaises(HtsasmError):
            Partition((2, -1))

    def test_transpose_and_containment(self):
        mu = Partition((4, 2, 1))
        self.assertEqual(mu.transpose(), Partition((3, 2, 1, 1)))
        self.assertTrue(mu.contains(Partition((2, 2))))
        self.assertFalse(mu.contains(Partition((2, 2, 2))))

    def test_frobenius(self):
        self.assertEqual(Partition((3, 1)).to_frobenius(), FrobeniusForm((2,), (1,)))
        self.assertEqual(Partition((4, 3, 3)).to_frobenius(), FrobeniusForm((3, 1, 0), (2, 1, 0)))
        with self.assertRaises(HtsasmError):
            FrobeniusForm((1, 1), (2, 0))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 9), st.data())
    def test_frobenius_round_trip(self, k, data):
        mu = data.draw(st.sampled_from(partitions_of(k)))
        self.assertEqual(mu.to_frobenius().to_partition(), mu)

    def test_partitions_of(self):
        self.assertEqual(len(partitions_of(5)), 7)
        self.assertEqual(partitions_of(4, max_len=2), [Partition((4,)), Partition((3, 1)), Partition((2, 2))])
        self.assertEqual(partitions_of(0), [Partition(())])
        self.assertEqual(partitions_of(-1), [])

    def test_shape_classes(self):
        self.assertEqual(classC(4), [Partition(()), Partition((2,)), Partition((3, 1))])
        self.assertEqual(classA(4), [Partition(()), Partition((1, 1)), Partition((2, 1, 1))])
        for mu in classC(12):
            with self.subTest(mu=mu):
                f = mu.to_frobenius()
                self.assertTrue(all(a == b + 1 for a, b in zip(f.arms, f.legs)))
                self.assertIn(mu.transpose(), classA(12))


class TestSymmetricPolynomials(unittest.TestCase):
    """Elementary, complete, Schur and skew Schur polynomials."""

    def test_elementary_and_complete(self):
        x1, x2, x3 = X
        self.assertEqual(elementary(2, X), x1 * x2 + x1 * x3 + x2 * x3)
        self.assertEqual(elementary(4, X), ZERO)
        self.assertEqual(elementary(0, X), ONE)
        self.assertEqual(complete(2, X[:2]), x1 ** 2 + x1 * x2 + x2 ** 2)
        self.assertEqual(complete(-1, X), ZERO)

    def test_schur_small_cases(self):
        x1, x2, _ = X
        self.assertEqual(schur(Partition((1, 1)), X[:2]), x1 * x2)
        self.assertEqual(schur(Partition((2, 1)), X[:2]), x1 ** 2 * x2 + x1 * x2 ** 2)
        self.assertEqual(schur(Partition((1, 1, 1)), X[:2]), ZERO)

    def test_jacobi_trudi_matches_bialternant(self):
        for k in range(4):
            for mu in partitions_of(k, max_len=3):
                with self.subTest(mu=mu):
                    self.assertEqual(schur(mu, X), schur_alternant(mu, X))

    def test_schur_against_sympy_bialternant(self):
        symbols = sympy.symbols("x1 x2 x3")
        mu = (2, 1)
        top = sympy.Matrix(3, 3, lambda i, j: symbols[j] ** (mu[i] + 2 - i if i < 2 else 0))
        base = sympy.Matrix(3, 3, lambda i, j: symbols[j] ** (2 - i))
        expected = sympy.cancel(top.det() / base.det())
        self.assertEqual(sympy.expand(schur(Partition(mu), X).to_sympy() - expected), 0)

    def test_skew_schur_via_littlewood_richardson(self):
        cases = [((2, 1), (1,)), ((3, 2), (2,)), ((3, 2, 1), (2, 1)), ((2, 2), (1,))]
        for mu, gamma in cases:
            with self.subTest(mu=mu, gamma=gamma):
                self.assertEqual(skew_schur(Partition(mu), Partition(gamma), X), skew_schur_lr(mu, gamma, X))

    def test_skew_schur_outside_containment(self):
        self.assertEqual(skew_schur(Partition((1,)), Partition((2,)), X), ZERO)

    def test_lr_coefficients(self):
        self.assertEqual(lr_coefficient((2, 1), (1,), (1, 1)), 1)
        self.assertEqual(lr_coefficient((2, 1), (1,), (2,)), 1)
        self.assertEqual(lr_coefficient((3, 2, 1), (2, 1), (2, 1)), 2)
        self.assertEqual(lr_coefficient((2, 2), (1,), (3,)), 0)
        self.assertEqual(lr_coefficient((2,), (2,), ()), 1)

    def test_orthogonal_character_of_vector(self):
        x1 = X[0]
        self.assertEqual(so_universal(Partition((1,)), [x1, ONE, bar(x1)]), x1 + ONE + bar(x1))

    def test_unsigned_character_dominates(self):
        args = [X[0], var("z0"), bar(var("y", 1))]
        mu = Partition((2,))
        difference = phi_bn_prime(mu, args) - so_universal(mu, args)
        # classC(2) = {(), (2)}; only the (2) term changes sign
        self.assertEqual(difference, 2 * skew_schur(mu, Partition((2,)), args))


class TestClassicalIdentities(unittest.TestCase):
    """Cauchy and Littlewood identities and the alternant leading term."""

    def test_cauchy(self):
        self.assertEqual(cauchy_check(2, 2, 4), [])
        self.assertEqual(cauchy_check(1, 3, 3), [])

    def test_littlewood_products(self):
        for n in (1, 2, 3):
            with self.subTest(n=n, variant="strict"):
                lhs, rhs = littlewood_products(n, "strict")
                self.assertEqual(lhs, rhs)
        for n in (1, 2):
            with self.subTest(n=n, variant="weak"):
                lhs, rhs = littlewood_products(n, "weak")
                self.assertEqual(lhs, rhs)
        with self.assertRaises(HtsasmError):
            littlewood_products(2, "other")

    def test_strict_product_at_two(self):
        lhs, rhs = littlewood_products(2, "strict")
        self.assertEqual(rhs, parse_poly("1 + x1*x2"))

    def test_alternant_leading_term(self):
        self.assertTrue(alternant_leading_term_check(Partition((2, 1)), 3))
        self.assertTrue(alternant_leading_term_check(Partition(()), 2))


if __name__ == "__main__":
    unittest.main()
