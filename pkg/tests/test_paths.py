import unittest
import sys
import os

# Add the parent directory to sys.path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.asm import StrictPartition
from src.core.errors import HtsasmError
from src.core.laurent import ONE, VarId, parse_poly, series_expansion
from src.core.paths import (
    CURVE,
    DIAGONAL,
    HORIZONTAL,
    VERTICAL,
    GenFunMatrix,
    LatticePathConfig,
    Point,
    bottom_height,
    check_u_identity,
    coefficient_of_determinant,
    count_nonintersecting_families,
    gen_f,
    gen_g,
    gen_h,
    height_label,
    is_non_intersecting,
    lattice_graph,
    tableau_sum,
    to_paths,
    verify_pdet,
)
from src.core.tableaux import ShiftedTableau, enumerate_primed

SP = StrictPartition

ROW_1 = "1 1 2' 2 0 0 0 -3'".split()
ROW_3 = "-2 -2 -1'".split()

NON_INTERSECTING = [ROW_1, "3 0' 0 -3 -3 -2'".split(), ROW_3]
ALSO_NON_INTERSECTING = [ROW_1, "3 0' 0 -3' -3 -2'".split(), ROW_3]
INTERSECTING = [ROW_1, "3 0' 0 0 -3 -2'".split(), ROW_3]


class TestPathDrawing(unittest.TestCase):
    """One lattice path per tableau row."""

    def test_levels(self):
        n = 3
        self.assertEqual(bottom_height(n), 8)
        labels = [height_label(h, n) for h in range(1, bottom_height(n) + 1)]
        self.assertEqual(labels, ["1", "2", "3", "0", "-3", "-2", "-1", "-0"])

    def test_first_row(self):
        config = to_paths(ShiftedTableau.from_strings(NON_INTERSECTING))
        path = config.paths[0]
        self.assertEqual(path.start, Point(-2, 4))
        self.assertEqual(path.edges[0].kind, CURVE)
        self.assertEqual(path.edges[0].end, Point(1, 1))
        self.assertEqual(path.count(DIAGONAL), 2)
        self.assertEqual(path.count(HORIZONTAL), 5)
        self.assertEqual(path.end(), Point(8, bottom_height(3)))
        self.assertEqual(
            path.points()[:8],
            [Point(-2, 4), Point(1, 1), Point(2, 1), Point(3, 2), Point(4, 2), Point(4, 3), Point(4, 4), Point(5, 4)],
        )

    def test_end_columns_follow_the_shape(self):
        config = to_paths(ShiftedTableau.from_strings(NON_INTERSECTING))
        self.assertEqual(config.end_columns(), (8, 6, 3))
        for path in config.paths:
            self.assertEqual(path.end().height, bottom_height(3))
            self.assertEqual(path.edges[-1].kind, VERTICAL)

    def test_non_intersecting_examples(self):
        for rows in (NON_INTERSECTING, ALSO_NON_INTERSECTING):
            with self.subTest(row=" ".join(rows[1])):
                self.assertTrue(is_non_intersecting(to_paths(ShiftedTableau.from_strings(rows))))

    def test_intersection_is_located(self):
        config = to_paths(ShiftedTableau.from_strings(INTERSECTING))
        self.assertFalse(is_non_intersecting(config))
        self.assertEqual(config.shared_points(), [Point(4, 4)])

    def test_every_primed_tableau_is_non_intersecting(self):
        for lam in (SP((2, 1)), SP((3, 1)), SP((3, 2))):
            for P in enumerate_primed(2, lam):
                with self.subTest(tableau=str(P)):
                    self.assertTrue(is_non_intersecting(to_paths(P)))

    def test_json_round_trip(self):
        config = to_paths(ShiftedTableau.from_strings(NON_INTERSECTING))
        self.assertEqual(LatticePathConfig.from_json(config.to_json()), config)
        with self.assertRaises(HtsasmError):
            LatticePathConfig.from_json({"n": 1, "paths": [{"row": 1}]})


class TestPathFamilies(unittest.TestCase):
    """Vertex-disjoint families on the lattice graph."""

    def test_graph_edges(self):
        graph = lattice_graph(1, 2)
        self.assertEqual(graph.edges[Point(0, 2), Point(1, 1)]["kind"], CURVE)
        self.assertEqual(graph.edges[Point(1, 1), Point(2, 2)]["kind"], DIAGONAL)
        self.assertFalse(graph.has_edge(Point(1, 3), Point(2, 4)))

    def test_family_counts_match_primed_tableaux(self):
        for n, lam in ((1, SP((1,))), (1, SP((2,))), (1, SP((3,))), (2, SP((2, 1)))):
            with self.subTest(n=n, lam=str(lam)):
                self.assertEqual(count_nonintersecting_families(n, lam), len(enumerate_primed(n, lam)))


class TestGeneratingFunctions(unittest.TestCase):
    """Row generating functions and the determinant route to the tableau sum."""

    def test_g_at_rank_one(self):
        # g_1 = q / (1 - ybar_1 q)
        coefficients = series_expansion(gen_g(1, 1), 3)
        self.assertEqual(coefficients, [parse_poly("0"), ONE, parse_poly("y1^-1"), parse_poly("y1^-2")])

    def test_f_lowest_coefficient(self):
        self.assertEqual(series_expansion(gen_f(1, 1), 1)[1], parse_poly("z0*x1"))

    def test_h_sign(self):
        h = gen_h(1, 2)
        self.assertEqual([sign for sign, _ in h.terms], [1, -1])
        self.assertEqual([sign for sign, _ in gen_h(2, 2).terms], [1, 1])
        with self.assertRaises(HtsasmError):
            gen_f(3, 2)

    def test_diagonal_weight_identity(self):
        for n in (1, 2, 3):
            self.assertEqual(check_u_identity(n), [])

    def test_pdet(self):
        for n, lam in ((1, SP((1,))), (1, SP((2,))), (1, SP((3,))), (2, SP((2, 1))), (2, SP((3, 1)))):
            with self.subTest(n=n, lam=str(lam)):
                report = verify_pdet(n, lam)
                self.assertTrue(report.equal, report.to_json())
                self.assertTrue(report.to_json()["ok"])

    def test_matrix_entries(self):
        matrix = GenFunMatrix.build(1, SP((2,)))
        self.assertEqual(matrix.determinant(), tableau_sum(1, SP((2,))))

    def test_symbolic_series_variables(self):
        lam = SP((2, 1))
        self.assertEqual(coefficient_of_determinant(2, lam), tableau_sum(2, lam))
        self.assertNotIn(VarId("q", 1), coefficient_of_determinant(1, SP((2,))).variables())


if __name__ == "__main__":
    unittest.main()
