import unittest
import sys
import os
import json
import tempfile

# Add the parent directory to sys.path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.campaign import CampaignResult, CheckResult
from src.reporting.report_verification import generate_verification_report, results_to_json


def sample_campaign(failing=True):
    results = [
        CheckResult("delta", "generic n=1", True),
        CheckResult("delta", "generic n=2", True),
        CheckResult("edet", "n=1", not failing, {} if not failing else {"diff": "c1*c2"}),
    ]
    return CampaignResult("sample", "two checks", results)


class TestVerificationReport(unittest.TestCase):
    """Text report of a campaign outcome."""

    def test_sections(self):
        text = generate_verification_report(sample_campaign(failing=False))
        self.assertIn("Campaign: sample", text)
        for heading in ("1. CAMPAIGN OVERVIEW", "2. CHECK RESULTS", "3. FAILURES"):
            self.assertIn(heading, text)
        self.assertIn("Overall result: PASS", text)
        self.assertIn("Instances checked: 3", text)
        self.assertNotIn("Generated:", text)

    def test_failure_lines(self):
        text = generate_verification_report(sample_campaign())
        self.assertIn("Overall result: FAIL", text)
        self.assertIn("[FAIL] edet: n=1", text)
        self.assertIn('diff: "c1*c2"', text)
        self.assertIn("  delta              |      2 |      2", text)

    def test_report_is_deterministic(self):
        campaign = sample_campaign()
        self.assertEqual(generate_verification_report(campaign), generate_verification_report(campaign))
        self.assertIn("Generated:", generate_verification_report(campaign, deterministic=False))

    def test_write_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "reports", "sample.txt")
            text = generate_verification_report(sample_campaign(), path)
            with open(path, encoding="utf-8") as f:
                self.assertEqual(f.read(), text)


class TestJsonResults(unittest.TestCase):
    """Machine-readable campaign results."""

    def test_counts(self):
        data = results_to_json(sample_campaign())
        self.assertFalse(data["ok"])
        self.assertEqual((data["passed"], data["total"]), (2, 3))
        self.assertEqual(data["results"][2]["details"], {"diff": "c1*c2"})
        self.assertEqual(json.loads(json.dumps(data)), data)


if __name__ == "__main__":
    unittest.main()
