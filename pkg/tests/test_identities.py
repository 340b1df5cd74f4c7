import unittest
import sys
import os

# Add the parent directory to sys.path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.asm import Compass, HalfTurnAsm, Kind, StrictPartition, enumerate_asms
from src.core.errors import HtsasmError, SchemeKindMismatch, SizeLimitExceeded
from src.core.config import Limits
from src.core.identities import (
    CENTRAL,
    LOWER,
    SCHEME_NAMES,
    SPECIALIZATION_TARGETS,
    UPPER,
    bs_verify,
    check_asm_tableau_sums,
    coherence_check,
    delta_product,
    get_scheme,
    literal_weyl_specialization,
    perturbed,
    phi_factor,
    phi_symmetry_failures,
    row_class,
    so_inversion_failures,
    sum_wgt,
    verify_factorization,
    verify_tableau_factorization,
    weyl_denominator,
    weyl_specialization,
    wgt_asm,
)
from src.core.laurent import I, ONE, parse_poly
from src.core.symfunc import Partition
from src.core.tableaux import Alphabet

SP = StrictPartition


class TestSchemes(unittest.TestCase):
    """Weight tables and row classes."""

    def test_registry(self):
        self.assertEqual(
            set(SCHEME_NAMES),
            {"generic", "result1", "result1_raw", "bn", "okada", "simpson", "tabony", "bs"},
        )
        self.assertIs(get_scheme("bn").kind, Kind.EVEN_B)
        self.assertIs(get_scheme("simpson").kind, Kind.ODD_B_PRIME)
        self.assertTrue(get_scheme("okada").staircase_only)
        with self.assertRaises(HtsasmError):
            get_scheme("unknown")

    def test_row_classes(self):
        self.assertEqual(row_class(1, 2, Kind.ODD_B_PRIME), (UPPER, 1))
        self.assertEqual(row_class(3, 2, Kind.ODD_B_PRIME)[0], CENTRAL)
        self.assertEqual(row_class(5, 2, Kind.ODD_B_PRIME), (LOWER, 1))
        self.assertEqual(row_class(3, 2, Kind.EVEN_B), (LOWER, 2))

    def test_kind_mismatch(self):
        A = enumerate_asms(Kind.EVEN_B, 1, SP((1,)))[0]
        with self.assertRaises(SchemeKindMismatch):
            wgt_asm(A, "generic")
        with self.assertRaises(SchemeKindMismatch):
            sum_wgt(Kind.ODD_B_PRIME, 1, SP((1,)), "bn")
        with self.assertRaises(SchemeKindMismatch):
            verify_factorization(Kind.EVEN_B, 1, (), "generic")


class TestWeightedSums(unittest.TestCase):
    """Weighted sums against hand-computed values and closed products."""

    def test_generic_rank_one(self):
        self.assertEqual(sum_wgt(Kind.ODD_B_PRIME, 1, SP((1,)), "generic"), parse_poly("1 + z0*x1"))

    def test_bn_rank_one(self):
        self.assertEqual(
            sum_wgt(Kind.EVEN_B, 1, SP((2,)), "bn"),
            parse_poly("1 + y1^-1 - x1^2 - x1*y1^-1"),
        )

    def test_tabony_rank_one(self):
        self.assertEqual(
            sum_wgt(Kind.EVEN_B, 1, SP((2,)), "tabony"),
            I * parse_poly("1 + t1*x1^-1 - t1^2*x1^2 - t1^2"),
        )

    def test_single_parameter_staircases(self):
        self.assertEqual(sum_wgt(Kind.EVEN_B, 1, SP((1,)), "okada"), parse_poly("1 - t*x1"))
        self.assertEqual(sum_wgt(Kind.ODD_B_PRIME, 1, SP((1,)), "simpson"), parse_poly("1 + t^2*x1"))

    def test_delta_products(self):
        for name in SCHEME_NAMES:
            scheme = get_scheme(name)
            for n in (1, 2):
                with self.subTest(scheme=name, n=n):
                    lhs = sum_wgt(scheme.kind, n, SP.staircase(n), scheme)
                    self.assertEqual(lhs, delta_product(scheme.kind, n, scheme))

    def test_generic_delta_at_three(self):
        self.assertEqual(
            sum_wgt(Kind.ODD_B_PRIME, 3, SP.staircase(3), "generic"),
            delta_product(Kind.ODD_B_PRIME, 3, "generic"),
        )

    def test_workers_give_the_same_sum(self):
        lam = SP((3, 1))
        self.assertEqual(
            sum_wgt(Kind.ODD_B_PRIME, 2, lam, "generic", workers=2),
            sum_wgt(Kind.ODD_B_PRIME, 2, lam, "generic"),
        )


class TestFactorization(unittest.TestCase):
    """Sum over mu + delta equals the delta product times the character factor."""

    def test_factorization_grid(self):
        grid = {
            "generic": Kind.ODD_B_PRIME,
            "result1": Kind.ODD_B_PRIME,
            "bn": Kind.EVEN_B,
            "tabony": Kind.EVEN_B,
        }
        mus = [(), (1,), (2,), (1, 1)]
        for name, kind in grid.items():
            for n in (1, 2):
                for mu in mus:
                    if len(mu) > n:
                        continue
                    with self.subTest(scheme=name, n=n, mu=mu):
                        report = verify_factorization(kind, n, mu, name)
                        self.assertTrue(report.ok, report.to_json())

    def test_tabony_sums_are_real_up_to_phase(self):
        report = verify_factorization(Kind.EVEN_B, 1, (1,), "tabony")
        self.assertTrue(report.extra["real"])
        self.assertEqual(report.to_json()["extra"], {"real": True})

    def test_report_json(self):
        data = verify_factorization(Kind.ODD_B_PRIME, 1, (1,), "generic").to_json(include_polynomials=True)
        self.assertEqual(data["scheme"], "generic")
        self.assertEqual(data["mu"], [1])
        self.assertTrue(data["ok"])
        self.assertIn("lhs", data)

    def test_staircase_only_schemes(self):
        with self.assertRaises(HtsasmError):
            verify_factorization(Kind.EVEN_B, 1, (1,), "okada")
        with self.assertRaises(HtsasmError):
            phi_factor("simpson", 1, Partition((1,)))
        self.assertEqual(phi_factor("okada", 2, Partition(())), ONE)

    def test_mu_limits(self):
        with self.assertRaises(SizeLimitExceeded):
            verify_factorization(Kind.ODD_B_PRIME, 1, (3,), "generic", Limits(max_mu_weight=2))
        with self.assertRaises(HtsasmError):
            verify_factorization(Kind.ODD_B_PRIME, 1, (1, 1), "generic")

    def test_perturbation_is_detected(self):
        for name, n, mu in (("generic", 2, (1,)), ("bn", 2, (1,)), ("okada", 2, ())):
            scheme = perturbed(get_scheme(name))
            with self.subTest(scheme=name):
                report = verify_factorization(scheme.kind, n, mu, scheme)
                self.assertFalse(report.equal)
                self.assertIsNotNone(report.counterexample_diff)
                self.assertIn("diff", report.to_json())

    def test_explicit_perturbation(self):
        scheme = perturbed(get_scheme("generic"), Compass.SE, UPPER)
        self.assertEqual(scheme.perturbation, (Compass.SE, UPPER))
        # the first row of this matrix reads SE SE
        A = HalfTurnAsm.create(Kind.ODD_B_PRIME, 2, SP((2, 1)), [[0, 0], [1, 0], [-1, 1], [0, 0], [1, 0]])
        self.assertNotEqual(wgt_asm(A, scheme), wgt_asm(A, "generic"))
        B = enumerate_asms(Kind.EVEN_B, 1, SP((1,)))[0]
        with self.assertRaises(SchemeKindMismatch):
            wgt_asm(B, scheme)

    def test_six_vertex_weights(self):
        for n, mu in ((1, ()), (1, (1,)), (2, ())):
            with self.subTest(n=n, mu=mu):
                report = bs_verify(n, mu)
                self.assertTrue(report.ok, report.to_json())
                self.assertTrue(report.extra["staircase_product"])
                self.assertTrue(report.extra["generic_identification"])


class TestSpecializations(unittest.TestCase):
    """The generic table specialises to every other table."""

    def test_coherence(self):
        for target in SPECIALIZATION_TARGETS:
            for n in (1, 2):
                with self.subTest(target=target, n=n):
                    report = coherence_check(target, n)
                    self.assertTrue(report.ok, report.to_json())

    def test_coherence_off_staircase(self):
        for target in ("result1", "tabony"):
            with self.subTest(target=target):
                report = coherence_check(target, 2, SP((3, 1)))
                self.assertTrue(report.ok)
        self.assertTrue(coherence_check("result1", 1, SP((2,))).per_matrix)
        with self.assertRaises(HtsasmError):
            coherence_check("simpson", 1, SP((2,)))

    def test_weyl_denominator(self):
        for n in (1, 2, 3):
            with self.subTest(n=n):
                self.assertEqual(weyl_specialization(n), weyl_denominator(n))
        self.assertEqual(literal_weyl_specialization(1), weyl_denominator(1))


class TestCharacters(unittest.TestCase):
    """Character symmetries and the tableau side of the factorization."""

    def test_symmetry(self):
        for n, mu in ((1, (1,)), (1, (2,)), (2, (1,)), (2, (2, 1))):
            with self.subTest(n=n, mu=mu):
                self.assertEqual(phi_symmetry_failures(n, mu), [])
                self.assertEqual(so_inversion_failures(n, mu), [])

    def test_tableau_factorization(self):
        for alphabet in (Alphabet.ODD, Alphabet.EVEN):
            for n, mu in ((1, ()), (1, (1,)), (1, (2,)), (2, (1,))):
                with self.subTest(alphabet=alphabet, n=n, mu=mu):
                    report = verify_tableau_factorization(n, mu, alphabet)
                    self.assertTrue(report.ok, report.to_json())

    def test_asm_and_tableau_sums_agree(self):
        for n, lam in ((1, SP((1,))), (1, SP((2,))), (2, SP((2, 1))), (2, SP((3, 1)))):
            with self.subTest(n=n, lam=str(lam)):
                self.assertTrue(check_asm_tableau_sums(n, lam))


if __name__ == "__main__":
    unittest.main()
