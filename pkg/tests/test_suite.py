import unittest
import sys
import os
from unittest.mock import patch

# Add the parent directory to sys.path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.config import get_limits
from src.visualization.visualization_backend import is_package_installed


class TestEnvironment(unittest.TestCase):
    """Packages and defaults the toolkit relies on."""

    def test_required_packages(self):
        for package in ("numpy", "networkx", "matplotlib", "sympy", "hypothesis"):
            with self.subTest(package=package):
                self.assertTrue(is_package_installed(package))

    def test_default_limits(self):
        with patch.dict(os.environ, {}, clear=True):
            limits = get_limits()
        self.assertEqual((limits.max_n, limits.max_det_side), (4, 8))


MODULES = (
    "test_laurent",
    "test_symfunc",
    "test_asm",
    "test_tableaux",
    "test_paths",
    "test_identities",
    "test_detkit",
    "test_campaign",
    "test_reporting",
    "test_render",
    "test_cli",
)


def run_tests():
    """Run all tests, library modules first."""
    loader = unittest.defaultTestLoader
    test_suite = unittest.TestSuite()
    test_suite.addTest(loader.loadTestsFromTestCase(TestEnvironment))
    for name in MODULES:
        test_suite.addTest(loader.loadTestsFromName(f"tests.{name}"))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(test_suite)
    return result.wasSuccessful()


if __name__ == "__main__":
    sys.exit(0 if run_tests() else 1)
