"""
Lattice paths and generating functions
--------------------------------------
Each row of a primed shifted tableau is drawn as a lattice path: a curved
spur from the start point (-n+k, level 0) to column 1, then horizontal
edges for unprimed entries, diagonal edges for primed entries, unit
vertical drops in between, and a final drop to the bottom level 0bar.

Grid heights are 1..n for the letters 1..n, n+1 for 0, 2n+2-k for kbar and
2n+2 for 0bar. Points are (column, height).

The row generating functions f, g and h give the determinant route to the
tableau sum.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Sequence, Set, Tuple

import networkx as nx

from src.core.asm import StrictPartition
from src.core.errors import HtsasmError
from src.core.laurent import (
    ONE,
    LaurentPoly,
    RationalSeriesSpec,
    VarId,
    bar,
    determinant,
    poly_sum,
    product,
    series_coeff,
    var,
)
from src.core.tableaux import Alphabet, ShiftedTableau, TabEntry, enumerate_primed, entry_weight, weight

logger = logging.getLogger(__name__)

CURVE = "curve"
HORIZONTAL = "horizontal"
VERTICAL = "vertical"
DIAGONAL = "diagonal"


class Point(NamedTuple):
    column: int
    height: int


class Edge(NamedTuple):
    kind: str
    start: Point
    end: Point

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "from": list(self.start), "to": list(self.end)}


@dataclass(frozen=True)
class LatticePath:
    row: int
    start: Point
    edges: Tuple[Edge, ...]

    def points(self) -> List[Point]:
        return [self.start] + [e.end for e in self.edges]

    def end(self) -> Point:
        return self.edges[-1].end if self.edges else self.start

    def count(self, kind: str) -> int:
        return sum(1 for e in self.edges if e.kind == kind)

    def to_json(self) -> Dict[str, Any]:
        return {"row": self.row, "start": list(self.start), "edges": [e.to_json() for e in self.edges]}


@dataclass(frozen=True)
class LatticePathConfig:
    n: int
    paths: Tuple[LatticePath, ...]

    def end_columns(self) -> Tuple[int, ...]:
        return tuple(p.end().column for p in self.paths)

    def shared_points(self) -> List[Point]:
        seen: Dict[Point, int] = {}
        shared: Set[Point] = set()
        for path in self.paths:
            for point in set(path.points()):
                if point in seen:
                    shared.add(point)
                seen[point] = path.row
        return sorted(shared)

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "paths": [p.to_json() for p in self.paths]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "LatticePathConfig":
        try:
            paths = tuple(
                LatticePath(
                    int(p["row"]),
                    Point(*p["start"]),
                    tuple(Edge(e["kind"], Point(*e["from"]), Point(*e["to"])) for e in p["edges"]),
                )
                for p in data["paths"]
            )
            return cls(int(data["n"]), paths)
        except (KeyError, TypeError, ValueError) as exc:
            raise HtsasmError(f"malformed path configuration: {exc}") from exc


def bottom_height(n: int) -> int:
    return 2 * n + 2


def height_label(h: int, n: int) -> str:
    """Printable level name: 1..n, 0, nbar..1bar, 0bar (bars written as a leading '-')."""
    if h <= n:
        return str(h)
    if h == n + 1:
        return "0"
    if h == 2 * n + 2:
        return "-0"
    return f"-{2 * n + 2 - h}"


def _row_path(row: int, entries: Sequence[TabEntry], n: int) -> LatticePath:
    first = entries[0]
    start = Point(-n + first.letter, n + 1)
    current = Point(1, first.height(n))
    edges: List[Edge] = [Edge(CURVE, start, current)]
    for column, e in enumerate(entries[1:], start=2):
        target = e.height(n)
        before = target - 1 if e.primed else target
        while current.height < before:
            nxt = Point(current.column, current.height + 1)
            edges.append(Edge(VERTICAL, current, nxt))
            current = nxt
        nxt = Point(column, target)
        edges.append(Edge(DIAGONAL if e.primed else HORIZONTAL, current, nxt))
        current = nxt
    while current.height < bottom_height(n):
        nxt = Point(current.column, current.height + 1)
        edges.append(Edge(VERTICAL, current, nxt))
        current = nxt
    return LatticePath(row, start, tuple(edges))


def to_paths(P: ShiftedTableau) -> LatticePathConfig:
    """One lattice path per row of P; intersecting configurations are kept as they are."""
    n = P.n
    return LatticePathConfig(n, tuple(_row_path(r + 1, row, n) for r, row in enumerate(P.rows)))


def is_non_intersecting(config: LatticePathConfig) -> bool:
    """True when no lattice point lies on two paths."""
    return not config.shared_points()


def lattice_graph(n: int, m: int) -> nx.DiGraph:
    """Directed grid carrying every edge a path may use, with edge attribute 'kind'."""
    graph = nx.DiGraph()
    bottom = bottom_height(n)
    for k in range(1, n + 1):
        start = Point(-n + k, n + 1)
        graph.add_edge(start, Point(1, k), kind=CURVE)
        graph.add_edge(start, Point(1, 2 * n + 2 - k), kind=CURVE)
    for c in range(1, m + 1):
        for h in range(1, bottom):
            graph.add_edge(Point(c, h), Point(c, h + 1), kind=VERTICAL)
            if c < m:
                graph.add_edge(Point(c, h), Point(c + 1, h), kind=HORIZONTAL)
                if h + 1 < bottom:
                    graph.add_edge(Point(c, h), Point(c + 1, h + 1), kind=DIAGONAL)
    return graph


def count_nonintersecting_families(n: int, lam: StrictPartition) -> int:
    """Number of vertex-disjoint path families joining the n start points to the ends (lam_i, 0bar)."""
    graph = lattice_graph(n, lam.largest())
    starts = [Point(-n + k, n + 1) for k in range(1, n + 1)]
    ends = [Point(c, bottom_height(n)) for c in lam.parts]
    candidates: Dict[Tuple[Point, Point], List[Tuple[Point, ...]]] = {}
    for s in starts:
        for t in ends:
            if nx.has_path(graph, s, t):
                candidates[(s, t)] = [tuple(p) for p in nx.all_simple_paths(graph, s, t)]
            else:
                candidates[(s, t)] = []
    total = 0

    def extend(index: int, free_starts: Tuple[Point, ...], used: Set[Point]) -> None:
        nonlocal total
        if index == len(ends):
            total += 1
            return
        for s in free_starts:
            rest = tuple(x for x in free_starts if x != s)
            for path in candidates[(s, ends[index])]:
                if used.isdisjoint(path):
                    extend(index + 1, rest, used | set(path))

    extend(0, tuple(starts), set())
    logger.debug(f"{total} non-intersecting families for n={n}, lambda=({lam})")
    return total


# -- generating functions ---------------------------------------------------------

def u_weight(k: int, n: int) -> LaurentPoly:
    """u_k = z0 x_k prod_{i>k} x_i ybar_i."""
    return var("z0") * var("x", k) * product(var("x", i) * bar(var("y", i)) for i in range(k + 1, n + 1))


def v_bar_weight(k: int) -> LaurentPoly:
    return ONE


def gen_f(k: int, n: int, series_var: VarId = VarId("q", 0)) -> RationalSeriesSpec:
    """Generating function of all rows starting with the diagonal letter k."""
    _check_index(k, n)
    q = LaurentPoly.var(series_var.family, series_var.index)
    numerators = [u_weight(k, n), ONE + bar(var("z0")) * q]
    denominators = [ONE - var("x", k) * q, ONE - var("z0") * q]
    for i in range(k + 1, n + 1):
        numerators.append(ONE + var("y", i) * q)
        denominators.append(ONE - var("x", i) * q)
    for i in range(1, n + 1):
        numerators.append(ONE + bar(var("x", i)) * q)
        denominators.append(ONE - bar(var("y", i)) * q)
    return RationalSeriesSpec(series_var, tuple(numerators), tuple(denominators), 1)


def gen_g(k: int, n: int, series_var: VarId = VarId("q", 0)) -> RationalSeriesSpec:
    """Generating function of all rows starting with the diagonal letter kbar."""
    _check_index(k, n)
    q = LaurentPoly.var(series_var.family, series_var.index)
    numerators = [v_bar_weight(k)]
    denominators = [ONE - bar(var("y", k)) * q]
    for i in range(1, k):
        numerators.append(ONE + bar(var("x", i)) * q)
        denominators.append(ONE - bar(var("y", i)) * q)
    return RationalSeriesSpec(series_var, tuple(numerators), tuple(denominators), 1)


@dataclass(frozen=True)
class GenFun:
    """Signed sum of rational series sharing one series variable."""
    terms: Tuple[Tuple[int, RationalSeriesSpec], ...]

    def coefficient(self, r: int) -> LaurentPoly:
        return poly_sum(series_coeff(spec, r) * sign for sign, spec in self.terms)


def gen_h(k: int, n: int, series_var: VarId = VarId("q", 0)) -> GenFun:
    """h_k = f_k + (-1)^(n-k) g_k."""
    sign = 1 if (n - k) % 2 == 0 else -1
    return GenFun(((1, gen_f(k, n, series_var)), (sign, gen_g(k, n, series_var))))


def _check_index(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise HtsasmError(f"row index k={k} outside 1..{n}")


@dataclass(frozen=True)
class GenFunMatrix:
    """Entry (k, l) is the coefficient of q_l^{lam_l} in h_k(q_l)."""
    n: int
    lam: StrictPartition
    entries: Tuple[Tuple[LaurentPoly, ...], ...]

    @classmethod
    def build(cls, n: int, lam: StrictPartition) -> "GenFunMatrix":
        rows = []
        for k in range(1, n + 1):
            h = gen_h(k, n)
            rows.append(tuple(h.coefficient(lam.parts[l]) for l in range(n)))
        return cls(n, lam, tuple(rows))

    def determinant(self) -> LaurentPoly:
        return determinant([list(row) for row in self.entries])


def tableau_sum(n: int, lam: StrictPartition, alphabet: Alphabet = Alphabet.ODD) -> LaurentPoly:
    return poly_sum(weight(P, alphabet) for P in enumerate_primed(n, lam, alphabet))


@dataclass
class PdetReport:
    n: int
    lam: StrictPartition
    tableau_sum: LaurentPoly
    determinant: LaurentPoly
    equal: bool

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "check": "pdet",
            "n": self.n,
            "lambda": list(self.lam.parts),
            "ok": self.equal,
        }
        if not self.equal:
            data["tableau_sum"] = str(self.tableau_sum)
            data["determinant"] = str(self.determinant)
        return data


def verify_pdet(n: int, lam: StrictPartition) -> PdetReport:
    """Compare the primed tableau sum with the determinant of the generating-function matrix."""
    lhs = tableau_sum(n, lam)
    rhs = GenFunMatrix.build(n, lam).determinant()
    equal = lhs == rhs
    if equal:
        logger.info(f"Tableau sum equals the h-determinant for n={n}, lambda=({lam})")
    else:
        logger.warning(f"Tableau sum differs from the h-determinant for n={n}, lambda=({lam})")
    return PdetReport(n, lam, lhs, rhs, equal)


def coefficient_of_determinant(n: int, lam: StrictPartition) -> LaurentPoly:
    """[q^lam] det(h_k(q_l)) with q_1..q_n kept symbolic until after the determinant."""
    matrix = []
    for k in range(1, n + 1):
        h = gen_h(k, n)
        coefficients = [h.coefficient(r) for r in range(lam.largest() + 1)]
        row = []
        for l in range(1, n + 1):
            q = var("q", l)
            row.append(poly_sum(coefficients[r] * q ** r for r in range(lam.parts[l - 1] + 1)))
        matrix.append(row)
    det = determinant(matrix)
    for l in range(1, n + 1):
        det = det.coefficient(VarId("q", l), lam.parts[l - 1])
    return det


def check_u_identity(n: int) -> List[int]:
    """Indices k at which vbar_k z0 x_k prod_{i>k} x_i ybar_i differs from the diagonal weight of k."""
    failures = []
    for k in range(1, n + 1):
        v_bar = entry_weight(TabEntry(k, True), True, n)
        lhs = v_bar * var("z0") * var("x", k) * product(var("x", i) * bar(var("y", i)) for i in range(k + 1, n + 1))
        if lhs != u_weight(k, n) or u_weight(k, n) != entry_weight(TabEntry(k), True, n):
            failures.append(k)
    return failures
