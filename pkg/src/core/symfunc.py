"""
Symmetric functions
-------------------
Partitions and their Frobenius coordinates, elementary and complete
symmetric polynomials, Schur and skew Schur functions, the universal
orthogonal character, and the classical product identities used as
property checks.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.core.errors import HtsasmError
from src.core.laurent import (
    ONE,
    ZERO,
    LaurentPoly,
    RationalSeriesSpec,
    VarId,
    determinant,
    exact_divide,
    poly_sum,
    product,
    series_expansion,
    var,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing sequence of positive integers (trailing zeros dropped)."""
    parts: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise HtsasmError(f"partition {parts} has a negative part")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise HtsasmError(f"partition {parts} is not weakly decreasing")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def part(self, i: int) -> int:
        """Part i (0-based), zero beyond the length."""
        return self.parts[i] if i < len(self.parts) else 0

    def length(self) -> int:
        return len(self.parts)

    def weight(self) -> int:
        return sum(self.parts)

    def transpose(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def contains(self, other: "Partition") -> bool:
        if len(other) > len(self):
            return False
        return all(self.part(i) >= other.part(i) for i in range(len(other)))

    def to_frobenius(self) -> "FrobeniusForm":
        conjugate = self.transpose()
        rank = sum(1 for i, p in enumerate(self.parts) if p > i)
        arms = tuple(self.parts[i] - i - 1 for i in range(rank))
        legs = tuple(conjugate.parts[i] - i - 1 for i in range(rank))
        return FrobeniusForm(arms, legs)

    def to_json(self) -> List[int]:
        return list(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")" if self.parts else "()"


@dataclass(frozen=True)
class FrobeniusForm:
    """Frobenius coordinates (arms | legs), both strictly decreasing."""
    arms: Tuple[int, ...]
    legs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.arms) != len(self.legs):
            raise HtsasmError("Frobenius arms and legs differ in length")
        for seq in (self.arms, self.legs):
            if any(v < 0 for v in seq) or any(seq[i] <= seq[i + 1] for i in range(len(seq) - 1)):
                raise HtsasmError(f"Frobenius coordinates {seq} are not strictly decreasing and non-negative")

    def rank(self) -> int:
        return len(self.arms)

    def to_partition(self) -> Partition:
        d = len(self.arms)
        if d == 0:
            return Partition(())
        rows = [self.arms[r] + r + 1 for r in range(d)]
        r = d
        while True:
            count = sum(1 for i in range(d) if i + self.legs[i] >= r)
            if count == 0:
                break
            rows.append(count)
            r += 1
        return Partition(tuple(rows))

    def to_json(self) -> Dict[str, List[int]]:
        return {"arms": list(self.arms), "legs": list(self.legs)}


def partitions_of(k: int, max_part: Optional[int] = None, max_len: Optional[int] = None) -> List[Partition]:
    """All partitions of k in reverse lexicographic order."""
    if k < 0:
        return []
    found: List[Partition] = []

    def extend(remaining: int, cap: int, prefix: Tuple[int, ...]) -> None:
        if remaining == 0:
            found.append(Partition(prefix))
            return
        if max_len is not None and len(prefix) >= max_len:
            return
        for p in range(min(remaining, cap), 0, -1):
            extend(remaining - p, p, prefix + (p,))

    extend(k, k if max_part is None else max_part, ())
    return found


def _frobenius_scan(max_weight: int, shift: int) -> List[Partition]:
    """Partitions whose arm minus leg equals shift in every diagonal position (shift = 1 or -1)."""
    results: List[Partition] = []

    def extend(short: Tuple[int, ...], weight: int) -> None:
        # short holds the smaller coordinate of each diagonal position, strictly decreasing
        if short:
            if shift > 0:
                results.append(FrobeniusForm(tuple(b + 1 for b in short), short).to_partition())
            else:
                results.append(FrobeniusForm(short, tuple(a + 1 for a in short)).to_partition())
        start = short[-1] - 1 if short else (max_weight // 2)
        for b in range(start, -1, -1):
            cost = 2 * b + 2
            if weight + cost <= max_weight:
                extend(short + (b,), weight + cost)

    if max_weight >= 0:
        results.append(Partition(()))
        extend((), 0)
    return sorted(set(results), key=lambda p: (p.weight(), p.parts))


def classC(max_weight: int) -> List[Partition]:
    """Partitions with Frobenius arm = leg + 1 everywhere, weight at most max_weight."""
    return _frobenius_scan(max_weight, 1)


def classA(max_weight: int) -> List[Partition]:
    """Partitions with Frobenius leg = arm + 1 everywhere (conjugates of classC)."""
    return _frobenius_scan(max_weight, -1)


def elementary(m: int, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """e_m of the given values; zero for m < 0 or m > len(values)."""
    if m < 0 or m > len(values):
        return ZERO
    e = [ONE] + [ZERO] * m
    for v in values:
        for k in range(m, 0, -1):
            e[k] = e[k] + v * e[k - 1]
    return e[m]


def complete(r: int, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """h_r of the given values; zero for r < 0."""
    if r < 0:
        return ZERO
    h = [ONE] + [ZERO] * r
    for v in values:
        for k in range(1, r + 1):
            h[k] = h[k] + v * h[k - 1]
    return h[r]


@lru_cache(maxsize=None)
def _complete_table(values: Tuple[LaurentPoly, ...], top: int) -> Tuple[LaurentPoly, ...]:
    h = [ONE] + [ZERO] * top
    for v in values:
        for k in range(1, top + 1):
            h[k] = h[k] + v * h[k - 1]
    return tuple(h)


@lru_cache(maxsize=None)
def _skew_schur_cached(mu: Partition, gamma: Partition, values: Tuple[LaurentPoly, ...]) -> LaurentPoly:
    if not mu.contains(gamma):
        return ZERO
    size = len(mu)
    if size == 0:
        return ONE
    table = _complete_table(values, mu.part(0) + size)

    def h(r: int) -> LaurentPoly:
        return table[r] if 0 <= r < len(table) else ZERO

    matrix = [
        [h(mu.part(i) - gamma.part(j) - i + j) for j in range(size)]
        for i in range(size)
    ]
    return determinant(matrix)


def skew_schur(mu: Partition, gamma: Partition, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """s_{mu/gamma} via the Jacobi-Trudi determinant in complete symmetric functions."""
    return _skew_schur_cached(_as_partition(mu), _as_partition(gamma), tuple(values))


def schur(mu: Partition, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """s_mu(values); zero when mu has more parts than there are values."""
    mu = _as_partition(mu)
    if len(mu) > len(values):
        return ZERO
    return _skew_schur_cached(mu, Partition(()), tuple(values))


def alternant(exponents: Sequence[int], values: Sequence[LaurentPoly]) -> LaurentPoly:
    """det(values_j ** exponents_i)."""
    if len(exponents) != len(values):
        raise HtsasmError("alternant needs as many exponents as values")
    return determinant([[v ** e for v in values] for e in exponents])


def schur_alternant(mu: Partition, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """s_mu as the ratio a_{mu+delta} / a_delta, for distinct monomial values."""
    mu = _as_partition(mu)
    k = len(values)
    if len(mu) > k:
        return ZERO
    delta = [k - 1 - i for i in range(k)]
    top = [mu.part(i) + delta[i] for i in range(k)]
    return exact_divide(alternant(top, values), alternant(delta, values))


def lr_coefficient(mu: Partition, gamma: Partition, nu: Partition) -> int:
    """Littlewood-Richardson coefficient c^mu_{gamma,nu}.

    Counts semistandard fillings of mu/gamma with content nu whose reading word
    (rows top to bottom, each read right to left) is a lattice word.
    """
    mu, gamma, nu = _as_partition(mu), _as_partition(gamma), _as_partition(nu)
    if not mu.contains(gamma) or mu.weight() - gamma.weight() != nu.weight():
        return 0
    cells = [(r, c) for r in range(len(mu)) for c in range(mu.part(r) - 1, gamma.part(r) - 1, -1)]
    filling: Dict[Tuple[int, int], int] = {}
    counts = [0] * (len(nu) + 1)
    total = 0

    def place(position: int) -> None:
        nonlocal total
        if position == len(cells):
            total += 1
            return
        r, c = cells[position]
        high = filling.get((r, c + 1), len(nu))
        low = filling.get((r - 1, c), 0) + 1
        for v in range(low, high + 1):
            if counts[v] >= nu.part(v - 1):
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            filling[(r, c)] = v
            counts[v] += 1
            place(position + 1)
            counts[v] -= 1
            del filling[(r, c)]

    if nu.weight() == 0:
        return 1
    place(0)
    return total


def skew_schur_lr(mu: Partition, gamma: Partition, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """s_{mu/gamma} expanded as sum over nu of c^mu_{gamma,nu} s_nu."""
    mu, gamma = _as_partition(mu), _as_partition(gamma)
    if not mu.contains(gamma):
        return ZERO
    pieces = []
    for nu in partitions_of(mu.weight() - gamma.weight(), max_len=len(values)):
        c = lr_coefficient(mu, gamma, nu)
        if c:
            pieces.append(schur(nu, values) * c)
    return poly_sum(pieces)


def so_universal(mu: Partition, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """Universal orthogonal character: sum over gamma in classC inside mu of (-1)^{|gamma|/2} s_{mu/gamma}."""
    mu = _as_partition(mu)
    pieces = []
    for gamma in classC(mu.weight()):
        if mu.contains(gamma):
            term = skew_schur(mu, gamma, values)
            pieces.append(term if (gamma.weight() // 2) % 2 == 0 else -term)
    return poly_sum(pieces)


def phi_bn_prime(mu: Partition, values: Sequence[LaurentPoly]) -> LaurentPoly:
    """Unsigned sum over gamma in classC inside mu of s_{mu/gamma}."""
    mu = _as_partition(mu)
    return poly_sum(
        skew_schur(mu, gamma, values) for gamma in classC(mu.weight()) if mu.contains(gamma)
    )


def littlewood_products(n: int, variant: str = "strict", family: str = "x") -> Tuple[LaurentPoly, LaurentPoly]:
    """Both sides of the Littlewood product identities in n variables.

    strict: prod_{i<j}(1 + z_i z_j) against the classA Schur sum,
    weak:   prod_{i<=j}(1 + z_i z_j) against the classC Schur sum.
    """
    values = [var(family, i) for i in range(1, n + 1)]
    if variant == "strict":
        lhs = product(ONE + values[i] * values[j] for i in range(n) for j in range(i + 1, n))
        shapes = classA(n * (n - 1))
    elif variant == "weak":
        lhs = product(ONE + values[i] * values[j] for i in range(n) for j in range(i, n))
        shapes = classC(n * (n + 1))
    else:
        raise HtsasmError(f"unknown Littlewood variant {variant!r}")
    rhs = poly_sum(schur(shape, values) for shape in shapes if len(shape) <= n)
    return lhs, rhs


def cauchy_check(m: int, n: int, max_degree: int) -> List[int]:
    """Degrees d <= max_degree at which the truncated Cauchy identity fails (empty when it holds)."""
    xs = [var("x", i) for i in range(1, m + 1)]
    ys = [var("y", j) for j in range(1, n + 1)]
    q = VarId("q", 0)
    grading = var("q")
    spec = RationalSeriesSpec(
        q, (), tuple(ONE - x * y * grading for x in xs for y in ys), 0
    )
    lhs = series_expansion(spec, max_degree)
    failures = []
    for d in range(max_degree + 1):
        rhs = poly_sum(schur(sigma, xs) * schur(sigma, ys) for sigma in partitions_of(d))
        if lhs[d] != rhs:
            logger.warning(f"Cauchy identity fails in degree {d}")
            failures.append(d)
    return failures


def alternant_leading_term_check(mu: Partition, n: int) -> bool:
    """[x^lam] a_{mu+delta}(x) is 1 at lam = mu+delta and 0 at every other strict lam."""
    mu = _as_partition(mu)
    xs = [var("x", i) for i in range(1, n + 1)]
    target = tuple(mu.part(i) + n - 1 - i for i in range(n))
    poly = alternant(list(target), xs)
    seen_target = False
    for mono, coeff in poly.items():
        exps = dict(mono)
        vector = tuple(exps.get(VarId("x", i), 0) for i in range(1, n + 1))
        if all(vector[i] > vector[i + 1] for i in range(n - 1)):
            if vector == target:
                seen_target = coeff == 1
            else:
                return False
    return seen_target


def _as_partition(value) -> Partition:
    if isinstance(value, Partition):
        return value
    return Partition(tuple(value))
