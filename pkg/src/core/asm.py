"""
Half-turn symmetric alternating sign matrices
---------------------------------------------
Strict partitions, the half-matrix representation of lambda-HTSASMs (even
kind B with 2n rows, odd kind B' with 2n+1 rows), their validation,
exhaustive enumeration, compass point matrices and row statistics.
"""

import itertools
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.config import Limits, get_limits
from src.core.errors import DimensionMismatch, HtsasmError, InvalidAsm, SizeLimitExceeded
from src.core.symfunc import Partition

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    EVEN_B = "B"
    ODD_B_PRIME = "Bprime"

    @classmethod
    def parse(cls, text: str) -> "Kind":
        if isinstance(text, cls):
            return text
        for kind in cls:
            if kind.value.lower() == str(text).lower():
                return kind
        raise HtsasmError(f"unknown kind {text!r} (expected B or Bprime)")

    def rows(self, n: int) -> int:
        return 2 * n if self is Kind.EVEN_B else 2 * n + 1


class Compass(str, Enum):
    WE = "WE"
    NS = "NS"
    NE = "NE"
    SE = "SE"
    NW = "NW"
    SW = "SW"


@dataclass(frozen=True)
class StrictPartition:
    """Strictly decreasing positive integers."""
    parts: Tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise HtsasmError(f"strict partition {parts} has a non-positive part")
        if any(parts[i] <= parts[i + 1] for i in range(len(parts) - 1)):
            raise HtsasmError(f"{parts} is not strictly decreasing")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "StrictPartition":
        """Read a comma separated list such as ``3,2,1``."""
        try:
            parts = tuple(int(p) for p in str(text).split(",") if p.strip())
        except ValueError as exc:
            raise HtsasmError(f"cannot read partition {text!r}") from exc
        return cls(parts)

    @classmethod
    def staircase(cls, n: int) -> "StrictPartition":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def from_mu(cls, mu: Sequence[int], n: int) -> "StrictPartition":
        """lambda = mu + delta with delta = (n, n-1, ..., 1)."""
        mu = Partition(tuple(mu))
        if len(mu) > n:
            raise HtsasmError(f"partition {mu} has more than {n} parts")
        return cls(tuple(mu.part(i) + n - i for i in range(n)))

    def length(self) -> int:
        return len(self.parts)

    def weight(self) -> int:
        return sum(self.parts)

    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def mu(self) -> Partition:
        """lambda - delta."""
        n = len(self.parts)
        return Partition(tuple(p - (n - i) for i, p in enumerate(self.parts)))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class HalfTurnAsm:
    """Right half of a half-turn symmetric ASM.

    Attributes:
        kind: EVEN_B (2n rows) or ODD_B_PRIME (2n+1 rows)
        n: rank
        lam: strict partition of length n; the matrix has lam.largest() columns
        entries: rows of integers in {-1, 0, 1}
    """
    kind: Kind
    n: int
    lam: StrictPartition
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def N(self) -> int:
        return self.kind.rows(self.n)

    @property
    def m(self) -> int:
        return self.lam.largest()

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=int).reshape(self.N, self.m)

    def neg(self) -> int:
        return sum(1 for row in self.entries for a in row if a == -1)

    def sort_key(self) -> Tuple[Tuple[int, ...], ...]:
        return self.entries

    @classmethod
    def create(cls, kind: Kind, n: int, lam: StrictPartition, entries: Sequence[Sequence[int]]) -> "HalfTurnAsm":
        """Validating constructor.

        Raises:
            DimensionMismatch: wrong shape
            InvalidAsm: any defining condition fails
        """
        report = validate(entries, kind, n, lam)
        if not report.valid:
            raise InvalidAsm(report.violations)
        return cls(kind, n, lam, tuple(tuple(int(a) for a in row) for row in entries))

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "lambda": list(self.lam.parts),
            "entries": [list(row) for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "HalfTurnAsm":
        try:
            kind = Kind.parse(data["kind"])
            n = int(data["n"])
            lam = StrictPartition(tuple(data["lambda"]))
            entries = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise HtsasmError(f"malformed ASM object: {exc}") from exc
        return cls.create(kind, n, lam, entries)

    def to_full_matrix(self) -> np.ndarray:
        """Reassemble the unfolded matrix: rotated half on the left, the half on the right.

        The odd kind gets a central column carrying its single 1 in the central row.
        """
        half = self.array()
        rotated = half[::-1, ::-1]
        if self.kind is Kind.EVEN_B:
            return np.hstack([rotated, half])
        centre = np.zeros((self.N, 1), dtype=int)
        centre[self.n, 0] = 1
        return np.hstack([rotated, centre, half])

    @classmethod
    def from_full_matrix(cls, kind: Kind, n: int, lam: StrictPartition, full: Sequence[Sequence[int]]) -> "HalfTurnAsm":
        """Recover the half matrix from an unfolded matrix.

        Raises:
            DimensionMismatch: the unfolded shape does not fit kind, n and lam
            InvalidAsm: the unfolded matrix is not half-turn symmetric or the half is invalid
        """
        arr = np.asarray(full, dtype=int)
        N, m = kind.rows(n), lam.largest()
        width = 2 * m if kind is Kind.EVEN_B else 2 * m + 1
        if arr.shape != (N, width):
            raise DimensionMismatch((N, width), tuple(arr.shape))
        if not np.array_equal(arr, arr[::-1, ::-1]):
            raise InvalidAsm([Violation("half_turn_symmetry", None, None, 0)])
        if kind is Kind.ODD_B_PRIME:
            centre = arr[:, m]
            expected = np.zeros(N, dtype=int)
            expected[n] = 1
            if not np.array_equal(centre, expected):
                raise InvalidAsm([Violation("central_column", None, m + 1, int(centre.sum()))])
        half = arr[:, width - m:]
        return cls.create(kind, n, lam, half.tolist())

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{a:2d}" for a in row) for row in self.entries)


class Violation(NamedTuple):
    """A failed condition at a 1-based (row, column) position."""
    condition: str
    row: Optional[int]
    column: Optional[int]
    value: int

    def __str__(self) -> str:
        where = []
        if self.row is not None:
            where.append(f"row {self.row}")
        if self.column is not None:
            where.append(f"column {self.column}")
        return f"{self.condition} at {', '.join(where) or 'matrix'} (value {self.value})"


@dataclass
class ValidationReport:
    valid: bool
    violations: List[Violation] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "violations": [v._asdict() for v in self.violations],
        }


class NotReducible(NamedTuple):
    """Returned by strip_central when the central row carries nonzero entries."""
    reason: str


def validate(matrix: Sequence[Sequence[int]], kind: Kind, n: int, lam: StrictPartition) -> ValidationReport:
    """Check every defining condition of a lambda-HTSASM half matrix.

    Raises:
        DimensionMismatch: lam has the wrong length or the matrix the wrong shape
    """
    if lam.length() != n:
        raise DimensionMismatch(f"lambda of length {n}", lam.length())
    N, m = kind.rows(n), lam.largest()
    try:
        arr = np.array(matrix, dtype=int)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch((N, m), "ragged rows") from exc
    if arr.shape != (N, m):
        raise DimensionMismatch((N, m), tuple(arr.shape))

    violations: List[Violation] = []
    for i, j in np.argwhere(~np.isin(arr, (-1, 0, 1))):
        violations.append(Violation("entry", int(i) + 1, int(j) + 1, int(arr[i, j])))

    right = np.cumsum(arr[:, ::-1], axis=1)[:, ::-1]
    for i, j in np.argwhere((right != 0) & (right != 1)):
        violations.append(Violation("right_partial_sum", int(i) + 1, int(j) + 1, int(right[i, j])))

    totals = arr.sum(axis=1)
    central = n if kind is Kind.ODD_B_PRIME else None
    for i in range(N):
        if i == central:
            continue
        wrap = totals[i] + np.cumsum(arr[N - 1 - i])
        for j in np.flatnonzero((wrap != 0) & (wrap != 1)):
            violations.append(Violation("wrap_sum", i + 1, int(j) + 1, int(wrap[j])))

    top = np.cumsum(arr, axis=0)
    for i, j in np.argwhere((top != 0) & (top != 1)):
        violations.append(Violation("column_partial_sum", int(i) + 1, int(j) + 1, int(top[i, j])))

    for i in range(n):
        paired = int(totals[i] + totals[N - 1 - i])
        if paired != 1:
            violations.append(Violation("paired_row_sum", i + 1, None, paired))

    columns = set(lam.parts)
    for j, total in enumerate(top[-1] if N else np.zeros(m, dtype=int)):
        expected = 1 if j + 1 in columns else 0
        if int(total) != expected:
            violations.append(Violation("column_total", None, j + 1, int(total)))

    if central is not None and int(totals[central]) != 0:
        violations.append(Violation("central_row_sum", central + 1, None, int(totals[central])))

    return ValidationReport(valid=not violations, violations=violations)


def _check_limits(kind: Kind, n: int, lam: StrictPartition, limits: Limits) -> None:
    if n > limits.max_n:
        raise SizeLimitExceeded("n", n, limits.max_n)
    cells = kind.rows(n) * lam.largest()
    if cells > limits.max_cells:
        raise SizeLimitExceeded("cells", cells, limits.max_cells)


def _compatible_columns(state: Tuple[int, ...], total: int) -> Iterator[Tuple[int, ...]]:
    """Columns keeping every right partial sum and every top partial sum in {0, 1}."""
    N = len(state)
    column = [0] * N

    def extend(i: int, prefix: int) -> Iterator[Tuple[int, ...]]:
        if i == N:
            if prefix == total:
                yield tuple(column)
            return
        choices = (0, 1) if state[i] == 0 else (0, -1)
        for a in choices:
            p = prefix + a
            if p != 0 and p != 1:
                continue
            column[i] = a
            yield from extend(i + 1, p)
        column[i] = 0

    yield from extend(0, 0)


def _extend_columns(
    kind: Kind, n: int, lam: StrictPartition, j: int, state: Tuple[int, ...], columns: List[Tuple[int, ...]],
    out: List[HalfTurnAsm],
) -> None:
    if j == 0:
        entries = tuple(zip(*reversed(columns)))
        if validate(entries, kind, n, lam).valid:
            out.append(HalfTurnAsm(kind, n, lam, entries))
        return
    total = 1 if j in lam.parts else 0
    for column in _compatible_columns(state, total):
        new_state = tuple(s + a for s, a in zip(state, column))
        columns.append(column)
        _extend_columns(kind, n, lam, j - 1, new_state, columns, out)
        columns.pop()


def _enumerate_below(kind: Kind, n: int, lam: StrictPartition, first: Tuple[int, ...]) -> List[HalfTurnAsm]:
    out: List[HalfTurnAsm] = []
    _extend_columns(kind, n, lam, lam.largest() - 1, first, [first], out)
    return out


def enumerate_asms(
    kind: Kind, n: int, lam: StrictPartition, limits: Optional[Limits] = None, workers: int = 1
) -> List[HalfTurnAsm]:
    """All lambda-HTSASMs of the given kind, in canonical (sorted) order.

    Depth-first over columns m down to 1, carrying the right partial sum of
    every row. With workers > 1 the subtrees below each admissible last
    column are explored in a process pool.

    Raises:
        SizeLimitExceeded: n or N*m above the configured bounds
    """
    limits = limits or get_limits()
    if lam.length() != n:
        raise DimensionMismatch(f"lambda of length {n}", lam.length())
    _check_limits(kind, n, lam, limits)
    N = kind.rows(n)
    firsts = list(_compatible_columns((0,) * N, 1))
    results: List[HalfTurnAsm] = []
    if workers > 1 and len(firsts) > 1:
        logger.debug(f"Fanning out {len(firsts)} subtrees over {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_enumerate_below, *zip(*[(kind, n, lam, f) for f in firsts])):
                results.extend(part)
    else:
        for first in firsts:
            results.extend(_enumerate_below(kind, n, lam, first))
    results.sort(key=HalfTurnAsm.sort_key)
    logger.info(f"Enumerated {len(results)} {kind.value} matrices for n={n}, lambda=({lam})")
    return results


def brute_force(kind: Kind, n: int, lam: StrictPartition, max_cells: int = 12) -> List[HalfTurnAsm]:
    """Filter every {-1, 0, 1} matrix of the right shape through validate."""
    N, m = kind.rows(n), lam.largest()
    if N * m > max_cells:
        raise SizeLimitExceeded("brute force cells", N * m, max_cells)
    found = []
    for flat in itertools.product((-1, 0, 1), repeat=N * m):
        entries = tuple(tuple(flat[i * m:(i + 1) * m]) for i in range(N))
        if validate(entries, kind, n, lam).valid:
            found.append(HalfTurnAsm(kind, n, lam, entries))
    return sorted(found, key=HalfTurnAsm.sort_key)


@dataclass(frozen=True)
class CompassMatrix:
    labels: Tuple[Tuple[Compass, ...], ...]

    def to_asm_entries(self) -> Tuple[Tuple[int, ...], ...]:
        """WE -> 1, NS -> -1, anything else -> 0."""
        lookup = {Compass.WE: 1, Compass.NS: -1}
        return tuple(tuple(lookup.get(c, 0) for c in row) for row in self.labels)

    def count(self, label: Compass) -> int:
        return sum(1 for row in self.labels for c in row if c is label)

    def to_json(self) -> List[List[str]]:
        return [[c.value for c in row] for row in self.labels]

    def __str__(self) -> str:
        return "\n".join(" ".join(c.value for c in row) for row in self.labels)


_ZERO_LABELS = {(0, 0): Compass.SE, (0, 1): Compass.NE, (1, 0): Compass.SW, (1, 1): Compass.NW}


def to_compass(A: HalfTurnAsm) -> CompassMatrix:
    """Classify each zero by (right-accumulated row sum, column sum strictly above)."""
    arr = A.array()
    right = np.cumsum(arr[:, ::-1], axis=1)[:, ::-1]
    above = np.cumsum(arr, axis=0) - arr
    labels = []
    for i in range(A.N):
        row = []
        for j in range(A.m):
            a = arr[i, j]
            if a == 1:
                row.append(Compass.WE)
            elif a == -1:
                row.append(Compass.NS)
            else:
                row.append(_ZERO_LABELS[(int(right[i, j]), int(above[i, j]))])
        labels.append(tuple(row))
    return CompassMatrix(tuple(labels))


@dataclass(frozen=True)
class AsmStats:
    """Row statistics of a compass point matrix.

    L holds L_1 .. L_{N+1}: the number of WE, NW or SW labels in column 1 above row i.
    """
    L: Tuple[int, ...]
    neg: int
    row_counts: Tuple[Dict[Compass, int], ...]

    def l(self, i: int) -> int:
        """L_i with 1-based i."""
        return self.L[i - 1]

    def count(self, row: int, label: Compass) -> int:
        return self.row_counts[row - 1].get(label, 0)


_L_LABELS = (Compass.WE, Compass.NW, Compass.SW)


def stats(A: HalfTurnAsm, compass: Optional[CompassMatrix] = None) -> AsmStats:
    compass = compass or to_compass(A)
    L = [0]
    for row in compass.labels:
        L.append(L[-1] + (1 if row[0] in _L_LABELS else 0))
    counts = tuple(dict(Counter(row)) for row in compass.labels)
    return AsmStats(L=tuple(L), neg=compass.count(Compass.NS), row_counts=counts)


def check_row_identities(A: HalfTurnAsm, st: Optional[AsmStats] = None) -> List[str]:
    """Per-row relations between label counts and L; returns the failures."""
    st = st or stats(A)
    failures = []
    for i in range(1, A.N + 1):
        we, ns = st.count(i, Compass.WE), st.count(i, Compass.NS)
        ne, nw = st.count(i, Compass.NE), st.count(i, Compass.NW)
        se, sw = st.count(i, Compass.SE), st.count(i, Compass.SW)
        if we != ns + st.l(i + 1) - st.l(i):
            failures.append(f"row {i}: #WE={we} but #NS+L_{i + 1}-L_{i}={ns + st.l(i + 1) - st.l(i)}")
        if ne != st.l(i) - ns - nw:
            failures.append(f"row {i}: #NE={ne} but L_{i}-#NS-#NW={st.l(i) - ns - nw}")
        if se != A.m - st.l(i + 1) - ns - sw:
            failures.append(f"row {i}: #SE={se} but m-L_{i + 1}-#NS-#SW={A.m - st.l(i + 1) - ns - sw}")
    return failures


def check_l_symmetry(A: HalfTurnAsm, st: Optional[AsmStats] = None) -> List[str]:
    """L_{2n+2-i} = n - i + L_{i+1} for i = 1..n on odd matrices."""
    if A.kind is not Kind.ODD_B_PRIME:
        return []
    st = st or stats(A)
    failures = []
    for i in range(1, A.n + 1):
        lhs, rhs = st.l(2 * A.n + 2 - i), A.n - i + st.l(i + 1)
        if lhs != rhs:
            failures.append(f"i={i}: L_{2 * A.n + 2 - i}={lhs} but n-i+L_{i + 1}={rhs}")
    return failures


def strip_central(A: HalfTurnAsm) -> Union[HalfTurnAsm, NotReducible]:
    """Drop the central row of an odd matrix whose central half-row is zero."""
    if A.kind is not Kind.ODD_B_PRIME:
        raise HtsasmError("strip_central needs an odd matrix")
    central = A.entries[A.n]
    if any(central):
        return NotReducible(f"central row {A.n + 1} contains nonzero entries {list(central)}")
    entries = A.entries[:A.n] + A.entries[A.n + 1:]
    return HalfTurnAsm(Kind.EVEN_B, A.n, A.lam, entries)


def embed_central(A: HalfTurnAsm) -> HalfTurnAsm:
    """Insert a zero central row into an even matrix."""
    if A.kind is not Kind.EVEN_B:
        raise HtsasmError("embed_central needs an even matrix")
    zero = tuple(0 for _ in range(A.m))
    entries = A.entries[:A.n] + (zero,) + A.entries[A.n:]
    return HalfTurnAsm(Kind.ODD_B_PRIME, A.n, A.lam, entries)
