"""
Shifted tableaux
----------------
Unprimed and primed shifted tableaux over the ordered alphabet

    1' < 1 < 2' < 2 < ... < n' < n < 0' < 0 < nbar' < nbar < ... < 1bar' < 1bar

(0 and 0' only in the odd alphabet), the bijection with odd half-turn ASMs
through right-accumulated row sums, the priming expansion driven by the
compass point matrix, and tableau weights.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.core.asm import (
    Compass,
    HalfTurnAsm,
    Kind,
    StrictPartition,
    embed_central,
    to_compass,
)
from src.core.config import Limits, get_limits
from src.core.errors import AlphabetMismatch, HtsasmError, InvalidAsm, InvalidTableau, SizeLimitExceeded
from src.core.laurent import I, ONE, LaurentPoly, bar, product, var

logger = logging.getLogger(__name__)


class Alphabet(str, Enum):
    ODD = "odd"
    EVEN = "even"


@dataclass(frozen=True)
class TabEntry:
    """An alphabet letter: 1..n or 0, optionally barred (never 0) and optionally primed."""
    letter: int
    barred: bool = False
    primed: bool = False

    def __post_init__(self) -> None:
        if self.letter < 0:
            raise HtsasmError(f"letter {self.letter} is negative")
        if self.letter == 0 and self.barred:
            raise HtsasmError("letter 0 cannot be barred")

    def rank(self, n: int) -> int:
        """Position in the total order of the alphabet, 1 for 1' up to 4n+2 for 1bar."""
        if self.letter == 0:
            base = 2 * n + 2
        elif self.barred:
            base = 4 * n + 4 - 2 * self.letter
        else:
            base = 2 * self.letter
        return base - 1 if self.primed else base

    def height(self, n: int) -> int:
        """Row of the half matrix this letter stands for: k -> k, 0 -> n+1, kbar -> 2n+2-k."""
        return (self.rank(n) + 1) // 2

    @classmethod
    def from_height(cls, h: int, n: int, primed: bool = False) -> "TabEntry":
        if h <= n:
            return cls(h, False, primed)
        if h == n + 1:
            return cls(0, False, primed)
        return cls(2 * n + 2 - h, True, primed)

    def unprimed(self) -> "TabEntry":
        return TabEntry(self.letter, self.barred, False)

    def with_prime(self, primed: bool) -> "TabEntry":
        return TabEntry(self.letter, self.barred, primed)

    def __str__(self) -> str:
        return ("-" if self.barred else "") + str(self.letter) + ("'" if self.primed else "")

    @classmethod
    def parse(cls, text: str) -> "TabEntry":
        """Read ``3``, ``3'``, ``-3`` or ``-3'``."""
        match = re.fullmatch(r"\s*(-?)(\d+)(')?\s*", text)
        if not match:
            raise InvalidTableau([f"cannot read tableau entry {text!r}"])
        try:
            return cls(int(match.group(2)), bool(match.group(1)), bool(match.group(3)))
        except HtsasmError as exc:
            raise InvalidTableau([str(exc)]) from exc

    def to_json(self) -> Dict[str, Any]:
        return {"l": self.letter, "bar": self.barred, "prime": self.primed}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "TabEntry":
        return cls(int(data["l"]), bool(data.get("bar", False)), bool(data.get("prime", False)))


@dataclass(frozen=True)
class ShiftedTableau:
    """Row i (0-based) holds lam[i] entries starting on the main diagonal.

    The entry at position p of row i sits in column i + p and on diagonal p.
    """
    lam: StrictPartition
    rows: Tuple[Tuple[TabEntry, ...], ...]
    primed: bool = False

    @property
    def n(self) -> int:
        return self.lam.length()

    def entry(self, row: int, position: int) -> Optional[TabEntry]:
        """0-based lookup; None outside the shape."""
        if 0 <= row < len(self.rows) and 0 <= position < len(self.rows[row]):
            return self.rows[row][position]
        return None

    def entries(self) -> List[Tuple[int, int, TabEntry]]:
        return [(r, p, e) for r, row in enumerate(self.rows) for p, e in enumerate(row)]

    def sort_key(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(e.rank(self.n) for e in row) for row in self.rows)

    def count_primed(self) -> int:
        return sum(1 for _, _, e in self.entries() if e.primed)

    def to_json(self) -> Dict[str, Any]:
        return {
            "lambda": list(self.lam.parts),
            "rows": [[e.to_json() for e in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ShiftedTableau":
        try:
            lam = StrictPartition(tuple(data["lambda"]))
            rows = tuple(tuple(TabEntry.from_json(e) for e in row) for row in data["rows"])
        except (KeyError, TypeError, ValueError, HtsasmError) as exc:
            raise InvalidTableau([f"malformed tableau object: {exc}"]) from exc
        primed = any(e.primed for row in rows for e in row)
        return cls(lam, rows, primed)

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], primed: Optional[bool] = None) -> "ShiftedTableau":
        """Build from display strings; the shape is read off the row lengths."""
        parsed = tuple(tuple(TabEntry.parse(s) for s in row) for row in rows)
        try:
            lam = StrictPartition(tuple(len(row) for row in parsed))
        except HtsasmError as exc:
            raise InvalidTableau([str(exc)]) from exc
        if primed is None:
            primed = any(e.primed for row in parsed for e in row)
        return cls(lam, parsed, primed)

    def display(self) -> str:
        lines = []
        for r, row in enumerate(self.rows):
            lines.append("    " * r + " ".join(f"{str(e):>3}" for e in row))
        return "\n".join(lines)

    def __str__(self) -> str:
        return " / ".join(" ".join(str(e) for e in row) for row in self.rows)


def profile(T: ShiftedTableau) -> Tuple[TabEntry, ...]:
    """The diagonal word d_1 .. d_n."""
    return tuple(row[0] for row in T.rows)


def validate_tableau(T: ShiftedTableau, primed: bool = False, alphabet: Alphabet = Alphabet.ODD) -> List[str]:
    """List the rule violations of T (empty when T is valid)."""
    n = T.n
    problems: List[str] = []
    if tuple(len(row) for row in T.rows) != T.lam.parts:
        return [f"row lengths {[len(r) for r in T.rows]} do not match shape {list(T.lam.parts)}"]
    diagonal_letters: Set[int] = set()
    for r, p, e in T.entries():
        where = f"row {r + 1} position {p + 1}"
        if e.letter > n:
            problems.append(f"{where}: letter {e.letter} exceeds n={n}")
            continue
        if e.letter == 0 and alphabet is Alphabet.EVEN:
            problems.append(f"{where}: letter 0 is not in the even alphabet")
        if e.primed and not primed:
            problems.append(f"{where}: primed entry in an unprimed tableau")
        if p == 0:
            if e.primed:
                problems.append(f"{where}: primed entry on the main diagonal")
            if e.letter == 0:
                problems.append(f"{where}: 0 on the main diagonal")
            elif e.letter in diagonal_letters:
                problems.append(f"{where}: letter {e.letter} repeated on the main diagonal")
            diagonal_letters.add(e.letter)
        left = T.entry(r, p - 1)
        if left is not None:
            if e.rank(n) < left.rank(n):
                problems.append(f"{where}: row decreases")
            elif primed and e.primed and e == left:
                problems.append(f"{where}: primed letter repeated in a row")
        above = T.entry(r - 1, p + 1)
        if above is not None:
            if e.rank(n) < above.rank(n):
                problems.append(f"{where}: column decreases")
            elif primed and not e.primed and e == above:
                problems.append(f"{where}: unprimed letter repeated in a column")
        diagonal = T.entry(r - 1, p)
        if diagonal is not None and e.rank(n) <= diagonal.rank(n):
            problems.append(f"{where}: diagonal does not increase strictly")
    if not problems and len(diagonal_letters) != n:
        problems.append("profile does not contain one of k, kbar for every k")
    return problems


def right_accumulated(A: HalfTurnAsm) -> np.ndarray:
    """B[i, j] = sum of A[i, k] for k >= j."""
    arr = A.array()
    return np.cumsum(arr[:, ::-1], axis=1)[:, ::-1]


def from_asm(A: HalfTurnAsm) -> ShiftedTableau:
    """The unprimed tableau whose diagonal j lists the rows holding a 1 in column j of B."""
    if A.kind is Kind.EVEN_B:
        A = embed_central(A)
    B = right_accumulated(A)
    rows: List[List[TabEntry]] = [[] for _ in range(A.n)]
    for j in range(A.m):
        heights = [int(i) + 1 for i in np.flatnonzero(B[:, j])]
        for r, h in enumerate(heights):
            rows[r].append(TabEntry.from_height(h, A.n))
    return ShiftedTableau(A.lam, tuple(tuple(row) for row in rows), primed=False)


def to_asm(T: ShiftedTableau) -> HalfTurnAsm:
    """Inverse of from_asm.

    Raises:
        InvalidTableau: T breaks the unprimed rules
    """
    problems = validate_tableau(T, primed=False)
    if problems:
        raise InvalidTableau(problems)
    n, m = T.n, T.lam.largest()
    B = np.zeros((2 * n + 1, m + 1), dtype=int)
    for _, p, e in T.entries():
        B[e.height(n) - 1, p] = 1
    A = B[:, :m] - B[:, 1:]
    try:
        return HalfTurnAsm.create(Kind.ODD_B_PRIME, n, T.lam, A.tolist())
    except InvalidAsm as exc:
        raise InvalidTableau([f"reconstructed matrix is invalid: {v}" for v in exc.violations]) from exc


def _check_limits(n: int, lam: StrictPartition, limits: Limits) -> None:
    if n > limits.max_n:
        raise SizeLimitExceeded("n", n, limits.max_n)
    cells = (2 * n + 1) * lam.largest()
    if cells > limits.max_cells:
        raise SizeLimitExceeded("cells", cells, limits.max_cells)


def _alphabet_letters(n: int, primed: bool, alphabet: Alphabet) -> List[TabEntry]:
    letters = []
    for h in range(1, 2 * n + 2):
        for prime in ((True, False) if primed else (False,)):
            entry = TabEntry.from_height(h, n, prime)
            if alphabet is Alphabet.EVEN and entry.letter == 0:
                continue
            letters.append(entry)
    return sorted(letters, key=lambda e: e.rank(n))


def _backtrack(n: int, lam: StrictPartition, primed: bool, alphabet: Alphabet) -> List[ShiftedTableau]:
    letters = _alphabet_letters(n, primed, alphabet)
    cells = [(r, p) for r in range(n) for p in range(lam.parts[r])]
    grid: Dict[Tuple[int, int], TabEntry] = {}
    used: Set[int] = set()
    found: List[ShiftedTableau] = []

    def allowed(r: int, p: int, e: TabEntry) -> bool:
        rank = e.rank(n)
        if p == 0:
            if e.primed or e.letter == 0 or e.letter in used:
                return False
        left = grid.get((r, p - 1))
        if left is not None:
            if rank < left.rank(n) or (primed and e.primed and e == left):
                return False
        above = grid.get((r - 1, p + 1))
        if above is not None:
            if rank < above.rank(n) or (primed and not e.primed and e == above):
                return False
        diagonal = grid.get((r - 1, p))
        if diagonal is not None and rank <= diagonal.rank(n):
            return False
        return True

    def fill(position: int) -> None:
        if position == len(cells):
            rows = tuple(tuple(grid[(r, p)] for p in range(lam.parts[r])) for r in range(n))
            found.append(ShiftedTableau(lam, rows, primed))
            return
        r, p = cells[position]
        for e in letters:
            if not allowed(r, p, e):
                continue
            grid[(r, p)] = e
            if p == 0:
                used.add(e.letter)
            fill(position + 1)
            if p == 0:
                used.discard(e.letter)
            del grid[(r, p)]

    fill(0)
    found.sort(key=ShiftedTableau.sort_key)
    return found


def enumerate_unprimed(n: int, lam: StrictPartition, limits: Optional[Limits] = None) -> List[ShiftedTableau]:
    """All unprimed shifted tableaux of shape lam over the odd alphabet."""
    _check_limits(n, lam, limits or get_limits())
    found = _backtrack(n, lam, primed=False, alphabet=Alphabet.ODD)
    logger.info(f"Enumerated {len(found)} unprimed tableaux of shape ({lam})")
    return found


def enumerate_primed(
    n: int, lam: StrictPartition, alphabet: Alphabet = Alphabet.ODD, limits: Optional[Limits] = None
) -> List[ShiftedTableau]:
    """All primed shifted tableaux of shape lam over the chosen alphabet."""
    _check_limits(n, lam, limits or get_limits())
    found = _backtrack(n, lam, primed=True, alphabet=alphabet)
    logger.info(f"Enumerated {len(found)} primed {alphabet.value} tableaux of shape ({lam})")
    return found


def priming_positions(T: ShiftedTableau, A: HalfTurnAsm) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    """Off-diagonal positions of T that are free to be primed, and those forced primed.

    The entry at diagonal p (p >= 1, 0-based) standing for half-matrix row h is
    governed by the compass label in row h, column p of the source matrix:
    NS leaves it free, NW forces a prime and SW forbids one.
    """
    if A.kind is Kind.EVEN_B:
        A = embed_central(A)
    compass = to_compass(A)
    free: List[Tuple[int, int]] = []
    forced: List[Tuple[int, int]] = []
    for r, p, e in T.entries():
        if p == 0:
            continue
        label = compass.labels[e.height(T.n) - 1][p - 1]
        if label is Compass.NS:
            free.append((r, p))
        elif label is Compass.NW:
            forced.append((r, p))
        elif label is not Compass.SW:
            raise HtsasmError(f"entry {e} at row {r + 1} position {p + 1} meets label {label.value}")
    return free, forced


def primings(T: ShiftedTableau, A: HalfTurnAsm) -> List[ShiftedTableau]:
    """The 2^neg(A) primed tableaux sharing the unprimed skeleton T."""
    free, forced = priming_positions(T, A)
    base = [list(row) for row in T.rows]
    for r, p in forced:
        base[r][p] = base[r][p].with_prime(True)
    results = []
    for mask in range(1 << len(free)):
        rows = [list(row) for row in base]
        for bit, (r, p) in enumerate(free):
            if mask >> bit & 1:
                rows[r][p] = rows[r][p].with_prime(True)
        results.append(ShiftedTableau(T.lam, tuple(tuple(row) for row in rows), primed=True))
    results.sort(key=ShiftedTableau.sort_key)
    return results


def _diagonal_tail(k: int, n: int) -> LaurentPoly:
    return product(var("x", j) * bar(var("y", j)) for j in range(k + 1, n + 1))


def entry_weight(e: TabEntry, on_diagonal: bool, n: int, alphabet: Alphabet = Alphabet.ODD) -> LaurentPoly:
    """Weight of a single entry.

    Raises:
        AlphabetMismatch: letter 0 in the even alphabet
    """
    if e.letter == 0 and alphabet is Alphabet.EVEN:
        raise AlphabetMismatch(str(e), alphabet.value)
    k = e.letter
    if on_diagonal:
        if e.barred:
            return ONE
        if alphabet is Alphabet.ODD:
            return var("z0") * var("x", k) * _diagonal_tail(k, n)
        sign = -1 if (n - k + 1) % 2 else 1
        return var("x", k) * _diagonal_tail(k, n) * sign
    if k == 0:
        return bar(var("z0")) if e.primed else var("z0")
    if alphabet is Alphabet.ODD:
        if e.barred:
            return bar(var("x", k)) if e.primed else bar(var("y", k))
        return var("y", k) if e.primed else var("x", k)
    if e.barred:
        return -I * bar(var("x", k)) if e.primed else I * bar(var("y", k))
    return -I * var("y", k) if e.primed else I * var("x", k)


# weight schemes that come with an entry table for primed tableaux
SCHEME_ALPHABETS = {"generic": Alphabet.ODD, "bn": Alphabet.EVEN}


def tableau_alphabet(scheme: Any) -> Alphabet:
    """Alphabet of the entry table for a scheme given by name or WeightScheme; an Alphabet passes through."""
    if isinstance(scheme, Alphabet):
        return scheme
    name = getattr(scheme, "name", scheme)
    try:
        return SCHEME_ALPHABETS[name]
    except KeyError:
        raise HtsasmError(
            f"scheme {name!r} has no tableau weight table; expected one of {', '.join(SCHEME_ALPHABETS)}"
        ) from None


def weight(P: ShiftedTableau, scheme: Any = Alphabet.ODD) -> LaurentPoly:
    """Product of the entry weights of P under the scheme's table (generic: odd alphabet, bn: even)."""
    alphabet = tableau_alphabet(scheme)
    return product(entry_weight(e, p == 0, P.n, alphabet) for _, p, e in P.entries())
