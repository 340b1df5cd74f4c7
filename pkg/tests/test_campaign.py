import unittest
import sys
import os
import json
import glob
import tempfile
from unittest.mock import patch

# Add the parent directory to sys.path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.asm import Kind, StrictPartition
from src.core.campaign import (
    mu_range,
    run_campaign,
    run_check,
    strict_partitions,
    verification_campaign,
)
from src.core.config import (
    KNOWN_CHECKS,
    MAX_CELLS_ENV,
    CheckSpec,
    Limits,
    get_limits,
    load_campaign,
    load_limits,
    parse_campaign,
)
from src.core.errors import HtsasmError, SchemeKindMismatch
from src.core.symfunc import Partition

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class TestLimits(unittest.TestCase):
    """Enumeration bounds and the environment override."""

    def test_defaults(self):
        limits = load_limits({})
        self.assertEqual(limits, Limits())
        self.assertEqual(limits.max_cells, 96)
        self.assertEqual(limits.cofactor_cutoff, 5)

    def test_override(self):
        self.assertEqual(load_limits({MAX_CELLS_ENV: "12"}).max_cells, 12)
        self.assertEqual(load_limits({MAX_CELLS_ENV: "12"}).max_n, 4)

    def test_bad_override_is_ignored(self):
        with self.assertLogs("src.core.config", level="WARNING"):
            self.assertEqual(load_limits({MAX_CELLS_ENV: "many"}), Limits())
        with self.assertLogs("src.core.config", level="WARNING"):
            self.assertEqual(load_limits({MAX_CELLS_ENV: "-3"}), Limits())

    def test_process_environment(self):
        with patch.dict(os.environ, {MAX_CELLS_ENV: "20"}):
            self.assertEqual(get_limits().max_cells, 20)


class TestCampaignFiles(unittest.TestCase):
    """Parsing and loading campaign definitions."""

    def test_parse(self):
        campaign = parse_campaign({
            "campaign_id": "small",
            "checks": [{"check": "edet", "n_max": 1}],
        })
        self.assertEqual(campaign.campaign_id, "small")
        self.assertEqual(campaign.description, "")
        self.assertEqual(campaign.checks, [CheckSpec("edet", {"n_max": 1})])

    def test_parse_errors(self):
        with self.assertRaises(HtsasmError):
            parse_campaign({"checks": []})
        with self.assertRaises(HtsasmError):
            parse_campaign({"campaign_id": "x", "checks": [{"n_max": 1}]})
        with self.assertRaises(HtsasmError):
            parse_campaign({"campaign_id": "x", "checks": [{"check": "pfaffian"}]})

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "broken.json")
            with open(path, "w") as f:
                f.write("{not json")
            with self.assertRaises(HtsasmError):
                load_campaign(path)

    def test_bundled_scenarios(self):
        paths = sorted(glob.glob(os.path.join(PROJECT_ROOT, "scenarios", "*.json")))
        self.assertTrue(paths)
        for path in paths:
            with self.subTest(path=os.path.basename(path)):
                campaign = load_campaign(path)
                self.assertTrue(campaign.checks)
                self.assertTrue(all(spec.check in KNOWN_CHECKS for spec in campaign.checks))

    def test_bundled_ranges(self):
        def entries(name, check):
            campaign = load_campaign(os.path.join(PROJECT_ROOT, "scenarios", f"{name}.json"))
            return [spec.params for spec in campaign.checks if spec.check == check]

        grid = {p["scheme"]: p for p in entries("factorization_grid", "factorization")}
        for scheme in ("generic", "bn"):
            with self.subTest(scheme=scheme):
                self.assertEqual((grid[scheme]["n_max"], grid[scheme]["mu_max"]), (3, 4))
        pdet = entries("factorization_grid", "pdet")[0]
        self.assertEqual((pdet["n_max"], pdet["mu_max"]), (3, 3))
        for check in ("bijection", "rowstats"):
            params = entries("bijections", check)[0]
            self.assertEqual((params["n_max"], params["largest_max"]), (3, 6))
        for lemma in ("deth", "detm"):
            sides = {(p["mode"], p["n"]) for p in entries("determinant_lemmas", lemma)}
            with self.subTest(lemma=lemma):
                self.assertIn(("symbolic", 3), sides)
                self.assertIn(("random", 6), sides)


class TestInstanceGenerators(unittest.TestCase):
    """Deterministic instance grids."""

    def test_mu_range(self):
        self.assertEqual(
            list(mu_range(2, 2)),
            [Partition(()), Partition((1,)), Partition((2,)), Partition((1, 1))],
        )
        self.assertEqual(list(mu_range(1, 2)), [Partition(()), Partition((1,)), Partition((2,))])

    def test_strict_partitions(self):
        self.assertEqual(
            strict_partitions(2, 3),
            [StrictPartition((2, 1)), StrictPartition((3, 1)), StrictPartition((3, 2))],
        )
        self.assertEqual(strict_partitions(3, 2), [])


class TestRunningChecks(unittest.TestCase):
    """Running campaign entries end to end at small sizes."""

    def test_unknown_parameter(self):
        with self.assertRaises(HtsasmError):
            run_check(CheckSpec("edet", {"n_max": 1, "depth": 2}))
        with self.assertRaises(HtsasmError):
            run_check(CheckSpec("edet", {"n_max": "one"}))
        with self.assertRaises(HtsasmError):
            run_check(CheckSpec("factorization", {"n_max": 1, "mu_max": -1}))
        with self.assertRaises(HtsasmError):
            run_check(CheckSpec("factorization", {"n_max": 1, "perturb": "yes"}))
        with self.assertRaises(HtsasmError):
            verification_campaign("generic", None, 1, -1)
        with self.assertRaises(HtsasmError):
            run_check(CheckSpec("pfaffian", {}))

    def test_small_campaign(self):
        campaign = parse_campaign({
            "campaign_id": "small",
            "description": "quick checks",
            "checks": [
                {"check": "delta", "schemes": ["generic"], "n_max": 1},
                {"check": "edet", "n_max": 1},
                {"check": "hr", "r_max": 1, "n_vars": 1},
            ],
        })
        outcome = run_campaign(campaign, Limits())
        self.assertEqual(len(outcome.results), 5)
        self.assertTrue(outcome.ok)
        self.assertEqual(outcome.failures(), [])
        self.assertEqual(outcome.results[0].label, "generic n=1")
        json.dumps([r.to_json() for r in outcome.results])

    def test_empty_check_is_an_error(self):
        # no strict partition with one part has its largest part at most 0
        with self.assertRaises(HtsasmError):
            run_check(CheckSpec("rowstats", {"n_max": 1, "largest_max": 0}), Limits())

    def test_results_are_deterministic(self):
        spec = CheckSpec("rowstats", {"n_max": 1, "largest_max": 2})
        first = [r.to_json() for r in run_check(spec, Limits())]
        self.assertEqual(first, [r.to_json() for r in run_check(spec, Limits())])
        self.assertEqual(len(first), 4)

    def test_bijection_check(self):
        results = run_check(CheckSpec("bijection", {"n_max": 1, "largest_max": 2}), Limits())
        self.assertTrue(all(r.ok for r in results))
        # two shapes, five instances each at n=1
        self.assertEqual(len(results), 10)

    def test_negative_control(self):
        results = run_check(CheckSpec("negative_control", {"scheme": "generic", "n": 2, "mu": [1]}), Limits())
        self.assertEqual(len(results), 1)
        self.assertTrue(results[0].ok)
        self.assertTrue(results[0].details["detected"])

    def test_verification_campaigns(self):
        campaign = verification_campaign("generic", Kind.ODD_B_PRIME, 2, 1)
        self.assertEqual(campaign.checks[0].check, "factorization")
        self.assertEqual(campaign.checks[0].params["kind"], "Bprime")
        bs = verification_campaign("bs", None, 1, 1)
        self.assertEqual(bs.checks, [CheckSpec("bs", {"n_max": 1, "mu_max": 1})])
        self.assertTrue(run_campaign(bs, Limits()).ok)
        perturbed = verification_campaign("okada", None, 2, 0, perturb=True)
        self.assertEqual(
            perturbed.checks,
            [CheckSpec("factorization", {"n_max": 2, "mu_max": 0, "scheme": "okada", "perturb": True})],
        )
        with self.assertRaises(SchemeKindMismatch):
            verification_campaign("bs", Kind.EVEN_B, 1, 1)
        with self.assertRaises(HtsasmError):
            verification_campaign("unknown", None, 1, 1)

    def test_perturbed_grid_fails_with_diffs(self):
        outcome = run_campaign(verification_campaign("generic", None, 2, 1, perturb=True), Limits())
        self.assertFalse(outcome.ok)
        for result in outcome.failures():
            self.assertIn("perturbed generic", result.label)
            self.assertIn("diff", result.details)

    def test_fixed_mu(self):
        outcome = run_campaign(verification_campaign("generic", None, 2, 0, mu=[1]), Limits())
        self.assertTrue(outcome.ok)
        self.assertEqual([r.label for r in outcome.results], ["generic Bprime n=1 mu=(1)", "generic Bprime n=2 mu=(1)"])
        # (1,1) needs two rows, so n_max=1 leaves nothing to check
        with self.assertRaises(HtsasmError):
            run_campaign(verification_campaign("generic", None, 1, 0, mu=[1, 1]), Limits())
        with self.assertRaises(HtsasmError):
            run_check(CheckSpec("bs", {"n_max": 1, "mu": [1, 2]}), Limits())


if __name__ == "__main__":
    unittest.main()
