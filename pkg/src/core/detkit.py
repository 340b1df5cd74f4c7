"""
Determinant lemmas
------------------
Independent checks of the determinant evaluations behind the tableau
factorization:

    deth  det(h_k(q_l)) = Z(z) K(z, q) Q(q), with K = prod_l 1/D(q_l)
    detm  det(g_k(q_l) - g_k(-1/q_l)) in closed form
    hr    h_r(p, -1/p, y) - h_r(q, -1/q, y) = (p - q)(1 + 1/(pq)) h_{r-1}(p, -1/p, q, -1/q, y)
    edet  det(e_{k-l}(c) + (-1)^(l-1) e_{k+l}(c)) = prod_{i<j<=n+1} (1 + c_i c_j)

The h-matrix entries are cleared of their denominators
D(q) = prod(1 - x_i q)(1 - z0 q) prod(1 - ybar_i q), so every comparison
is between Laurent polynomials. Symbolic checks compare polynomials;
random checks evaluate both sides at seeded rational points.
"""

import logging
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.core.asm import StrictPartition
from src.core.errors import HtsasmError, SizeLimitExceeded
from src.core.laurent import (
    ONE,
    ZERO,
    GaussianRational,
    LaurentPoly,
    RationalSeriesSpec,
    VarId,
    bar,
    determinant,
    eval_rational,
    poly_sum,
    product,
    series_coefficient_of_quotient,
    series_expansion,
    var,
)
from src.core.paths import check_u_identity, gen_f, gen_g, gen_h, tableau_sum
from src.core.symfunc import classA, complete, elementary, schur

logger = logging.getLogger(__name__)

LEMMAS = ("deth", "detm", "hr", "edet")
SYMBOLIC = "symbolic"
RANDOM = "random"

SYMBOLIC_LIMITS = {"deth": 3, "detm": 3, "edet": 4}
MAX_HR_VARS = 4
MAX_HR_DEGREE = 10
SAMPLE_RANGE = (2, 97)
MAX_REDRAWS = 50

# A factored term is (sign, factors): sign * prod(factors).
FactoredTerm = Tuple[int, Tuple[LaurentPoly, ...]]


@dataclass(frozen=True)
class LemmaCheckConfig:
    """Which lemma to check, at which size, and how.

    Attributes:
        lemma: one of deth, detm, hr, edet
        n: matrix side (for hr, the number of extra y variables)
        mode: symbolic or random
        count: number of random trials
        seed: master seed of the random trials
        r: degree of the complete symmetric function (hr only)
    """
    lemma: str
    n: int
    mode: str = SYMBOLIC
    count: int = 20
    seed: int = 0
    r: int = 2

    def __post_init__(self) -> None:
        if self.lemma not in LEMMAS:
            raise HtsasmError(f"unknown lemma {self.lemma!r}; expected one of {', '.join(LEMMAS)}")
        if self.mode not in (SYMBOLIC, RANDOM):
            raise HtsasmError(f"unknown mode {self.mode!r}; expected symbolic or random")
        if self.n < (0 if self.lemma == "hr" else 1):
            raise HtsasmError(f"n={self.n} is too small for {self.lemma}")
        if self.count < 1:
            raise HtsasmError("at least one random trial is needed")
        if self.lemma == "hr":
            if self.n > MAX_HR_VARS:
                raise SizeLimitExceeded("hr variables", self.n, MAX_HR_VARS)
            if not 0 <= self.r <= MAX_HR_DEGREE:
                raise SizeLimitExceeded("hr degree", self.r, MAX_HR_DEGREE)
        elif self.mode == SYMBOLIC and self.n > SYMBOLIC_LIMITS[self.lemma]:
            raise SizeLimitExceeded(f"symbolic {self.lemma} side", self.n, SYMBOLIC_LIMITS[self.lemma])


@dataclass
class LemmaReport:
    lemma: str
    n: int
    mode: str
    ok: bool
    seed: Optional[int] = None
    failures: List[Dict[str, Any]] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"lemma": self.lemma, "n": self.n, "mode": self.mode, "ok": self.ok}
        if self.seed is not None:
            data["seed"] = self.seed
        data["failures"] = self.failures
        return data


# -- building blocks ---------------------------------------------------------------------

def q_var(l: int) -> LaurentPoly:
    return var("q", l)


def clearing_factors(n: int, q: LaurentPoly) -> List[LaurentPoly]:
    """Linear factors of D(q)."""
    return (
        [ONE - var("x", i) * q for i in range(1, n + 1)]
        + [ONE - var("z0") * q]
        + [ONE - bar(var("y", i)) * q for i in range(1, n + 1)]
    )


def _cleared(spec: RationalSeriesSpec, clearing: Sequence[LaurentPoly]) -> Tuple[LaurentPoly, ...]:
    """Factors of D * spec, which is a polynomial since every denominator factor of spec divides D."""
    remaining = Counter(clearing)
    for factor in spec.denominator_factors:
        if remaining[factor] == 0:
            raise HtsasmError(f"denominator factor {factor} does not divide the clearing product")
        remaining[factor] -= 1
    q = LaurentPoly.var(spec.series_var.family, spec.series_var.index)
    return (q ** spec.leading_power,) + tuple(spec.numerator_factors) + tuple(remaining.elements())


def cleared_h_terms(k: int, n: int, l: int) -> List[FactoredTerm]:
    """D(q_l) h_k(q_l) = D f_k + (-1)^(n-k) D g_k, each part as a product of factors."""
    series_var = VarId("q", l)
    clearing = clearing_factors(n, q_var(l))
    sign = 1 if (n - k) % 2 == 0 else -1
    return [
        (1, _cleared(gen_f(k, n, series_var), clearing)),
        (sign, _cleared(gen_g(k, n, series_var), clearing)),
    ]


def z_factors(n: int) -> List[LaurentPoly]:
    """Z(z) = prod x_i^-(n-i) prod (1 + z0 x_i) prod_{i<j} (1 + x_i x_j)(1 + x_i ybar_j)."""
    factors = [var("x", i) ** (-(n - i)) for i in range(1, n + 1)]
    factors += [ONE + var("z0") * var("x", i) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            factors.append(ONE + var("x", i) * var("x", j))
            factors.append(ONE + var("x", i) * bar(var("y", j)))
    return factors


def q_factors(n: int) -> List[LaurentPoly]:
    """Q(q) = prod q_i prod_{i<j} (q_i - q_j) prod_{i<=j} (1 + q_i q_j)."""
    factors = [q_var(i) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if i < j:
                factors.append(q_var(i) - q_var(j))
            factors.append(ONE + q_var(i) * q_var(j))
    return factors


def _g_tilde_factors(k: int, n: int, q: LaurentPoly) -> List[LaurentPoly]:
    """q^-n prod_{i<=n+1} (1 + c_i q) prod_{i<k} (1 - b_i q) prod_{i>k} (1 + a_i q)."""
    factors = [q ** (-n)]
    factors += [ONE + var("c", i) * q for i in range(1, n + 2)]
    factors += [ONE - var("b", i) * q for i in range(1, k)]
    factors += [ONE + var("a", i) * q for i in range(k + 1, n + 1)]
    return factors


def m_terms(k: int, n: int, l: int) -> List[FactoredTerm]:
    """m_{k,l} = g_k(q_l) - g_k(-1/q_l)."""
    q = q_var(l)
    flipped = -bar(q)
    return [(1, tuple(_g_tilde_factors(k, n, q))), (-1, tuple(_g_tilde_factors(k, n, flipped)))]


def detm_closed_form(n: int) -> List[LaurentPoly]:
    """Factors of prod_{i<j<=n+1} (1 + c_i c_j) prod_{i<j} (b_i + a_j) prod q_i^-n (1 + q_i^2) (q_i - q_j)(1 + q_i q_j)."""
    factors = []
    for i in range(1, n + 2):
        for j in range(i + 1, n + 2):
            factors.append(ONE + var("c", i) * var("c", j))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            factors.append(var("b", i) + var("a", j))
    for i in range(1, n + 1):
        factors.append(q_var(i) ** (-n))
        factors.append(ONE + q_var(i) ** 2)
        for j in range(i + 1, n + 1):
            factors.append(q_var(i) - q_var(j))
            factors.append(ONE + q_var(i) * q_var(j))
    return factors


def _expand(terms: Sequence[FactoredTerm]) -> LaurentPoly:
    return poly_sum(product(factors) if sign > 0 else -product(factors) for sign, factors in terms)


def _evaluate(terms: Sequence[FactoredTerm], point: Mapping[VarId, Fraction]) -> GaussianRational:
    total = GaussianRational(0)
    for sign, factors in terms:
        value = GaussianRational(sign)
        for f in factors:
            value = value * eval_rational(f, point)
        total = total + value
    return total


def _evaluate_product(factors: Sequence[LaurentPoly], point: Mapping[VarId, Fraction]) -> GaussianRational:
    value = GaussianRational(1)
    for f in factors:
        value = value * eval_rational(f, point)
    return value


def _matrix_terms(lemma: str, n: int) -> List[List[List[FactoredTerm]]]:
    build = cleared_h_terms if lemma == "deth" else m_terms
    return [[build(k, n, l) for l in range(1, n + 1)] for k in range(1, n + 1)]


def _closed_form(lemma: str, n: int) -> List[LaurentPoly]:
    if lemma == "deth":
        return z_factors(n) + q_factors(n)
    return detm_closed_form(n)


def _variables(lemma: str, n: int) -> List[VarId]:
    qs = [VarId("q", l) for l in range(1, n + 1)]
    if lemma == "deth":
        return [VarId("x", i) for i in range(1, n + 1)] + [VarId("y", i) for i in range(1, n + 1)] + [VarId("z0", 0)] + qs
    if lemma == "detm":
        return (
            [VarId("a", i) for i in range(1, n + 1)]
            + [VarId("b", i) for i in range(1, n + 1)]
            + [VarId("c", i) for i in range(1, n + 2)]
            + qs
        )
    if lemma == "edet":
        return [VarId("c", i) for i in range(1, n + 2)]
    return [VarId("p", 0), VarId("q", 0)] + [VarId("y", i) for i in range(1, n + 1)]


# -- symbolic checks ------------------------------------------------------------------

def _symbolic_matrix_lemma(lemma: str, n: int) -> List[Dict[str, Any]]:
    matrix = [[_expand(entry) for entry in row] for row in _matrix_terms(lemma, n)]
    lhs = determinant(matrix)
    rhs = product(_closed_form(lemma, n))
    if lhs == rhs:
        return []
    return [{"difference": str(lhs - rhs)}]


def hr_sides(r: int, m: int, values: Optional[Mapping[VarId, LaurentPoly]] = None) -> Tuple[LaurentPoly, LaurentPoly]:
    """Both sides of the h_r difference identity in p, q and y_1..y_m."""
    values = values or {}
    p = values.get(VarId("p", 0), var("p"))
    q = values.get(VarId("q", 0), var("q"))
    ys = [values.get(VarId("y", i), var("y", i)) for i in range(1, m + 1)]
    p_pair = [p, -p.inverse()]
    q_pair = [q, -q.inverse()]
    lhs = complete(r, p_pair + ys) - complete(r, q_pair + ys)
    rhs = (p - q) * (ONE + p.inverse() * q.inverse()) * complete(r - 1, p_pair + q_pair + ys)
    return lhs, rhs


def edet_matrix(n: int, values: Optional[Sequence[LaurentPoly]] = None) -> List[List[LaurentPoly]]:
    c = list(values) if values is not None else [var("c", i) for i in range(1, n + 2)]
    return [
        [
            elementary(k - l, c) + (elementary(k + l, c) if (l - 1) % 2 == 0 else -elementary(k + l, c))
            for l in range(1, n + 1)
        ]
        for k in range(1, n + 1)
    ]


def edet_product(n: int, values: Optional[Sequence[LaurentPoly]] = None) -> LaurentPoly:
    c = list(values) if values is not None else [var("c", i) for i in range(1, n + 2)]
    return product(ONE + c[i] * c[j] for i in range(n + 1) for j in range(i + 1, n + 1))


def check_deth(cfg: LemmaCheckConfig, workers: int = 1) -> LemmaReport:
    """det(D(q_l) h_k(q_l)) against Z(z) Q(q)."""
    return _run("deth", cfg, workers)


def check_detm(cfg: LemmaCheckConfig, workers: int = 1) -> LemmaReport:
    """det(m_{k,l}) against its closed product form."""
    return _run("detm", cfg, workers)


def check_hr(r: int, n_vars: int, mode: str = SYMBOLIC, count: int = 20, seed: int = 0, workers: int = 1) -> LemmaReport:
    """The h_r difference identity with n_vars extra y variables."""
    return _run("hr", LemmaCheckConfig("hr", n_vars, mode, count, seed, r), workers)


def check_edet(n: int, mode: str = SYMBOLIC, count: int = 20, seed: int = 0, workers: int = 1) -> LemmaReport:
    """The elementary-function determinant against prod (1 + c_i c_j)."""
    return _run("edet", LemmaCheckConfig("edet", n, mode, count, seed), workers)


def check_lemma(cfg: LemmaCheckConfig, workers: int = 1) -> LemmaReport:
    return _run(cfg.lemma, cfg, workers)


def _symbolic_failures(cfg: LemmaCheckConfig) -> List[Dict[str, Any]]:
    if cfg.lemma in ("deth", "detm"):
        return _symbolic_matrix_lemma(cfg.lemma, cfg.n)
    if cfg.lemma == "hr":
        lhs, rhs = hr_sides(cfg.r, cfg.n)
    else:
        lhs, rhs = determinant(edet_matrix(cfg.n)), edet_product(cfg.n)
    return [] if lhs == rhs else [{"difference": str(lhs - rhs)}]


# -- random evaluation -------------------------------------------------------------------

def trial_seeds(seed: int, count: int) -> List[int]:
    """Per-trial seeds spawned from the master seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def _draw(rng: random.Random) -> Fraction:
    low, high = SAMPLE_RANGE
    return Fraction(rng.randint(low, high), rng.randint(low, high))


def _admissible(lemma: str, n: int, point: Mapping[VarId, Fraction]) -> bool:
    """No cleared denominator factor vanishes at the point."""
    if lemma != "deth":
        return True
    for l in range(1, n + 1):
        for factor in clearing_factors(n, q_var(l)):
            if not eval_rational(factor, point):
                return False
    return True


def random_point(lemma: str, n: int, rng: random.Random) -> Dict[VarId, Fraction]:
    """Rational point built from integers in 2..97, redrawn while a cleared denominator vanishes."""
    for _ in range(MAX_REDRAWS):
        point = {v: _draw(rng) for v in _variables(lemma, n)}
        if _admissible(lemma, n, point):
            return point
    raise HtsasmError(f"no admissible random point for {lemma} after {MAX_REDRAWS} draws")


def _evaluate_sides(cfg: LemmaCheckConfig, point: Mapping[VarId, Fraction]) -> Tuple[GaussianRational, GaussianRational]:
    lemma, n = cfg.lemma, cfg.n
    if lemma in ("deth", "detm"):
        matrix = [
            [LaurentPoly.const(_evaluate(entry, point)) for entry in row]
            for row in _matrix_terms(lemma, n)
        ]
        lhs = determinant(matrix).constant_term()
        return lhs, _evaluate_product(_closed_form(lemma, n), point)
    if lemma == "hr":
        values = {v: LaurentPoly.const(value) for v, value in point.items()}
        lhs, rhs = hr_sides(cfg.r, n, values)
        return lhs.constant_term(), rhs.constant_term()
    c = [LaurentPoly.const(point[VarId("c", i)]) for i in range(1, n + 2)]
    return determinant(edet_matrix(n, c)).constant_term(), edet_product(n, c).constant_term()


def _random_trial(cfg: LemmaCheckConfig, trial: int, trial_seed: int) -> Optional[Dict[str, Any]]:
    point = random_point(cfg.lemma, cfg.n, random.Random(trial_seed))
    lhs, rhs = _evaluate_sides(cfg, point)
    if lhs == rhs:
        return None
    return {
        "trial": trial,
        "point": {str(v): str(value) for v, value in sorted(point.items())},
        "lhs": str(lhs),
        "rhs": str(rhs),
    }


def _random_failures(cfg: LemmaCheckConfig, workers: int) -> List[Dict[str, Any]]:
    seeds = trial_seeds(cfg.seed, cfg.count)
    if workers > 1 and cfg.count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_random_trial, [cfg] * cfg.count, range(cfg.count), seeds))
    else:
        outcomes = [_random_trial(cfg, trial, s) for trial, s in enumerate(seeds)]
    return sorted((o for o in outcomes if o is not None), key=lambda o: o["trial"])


def _run(lemma: str, cfg: LemmaCheckConfig, workers: int) -> LemmaReport:
    if cfg.lemma != lemma:
        raise HtsasmError(f"configuration for {cfg.lemma} passed to the {lemma} check")
    logger.info(f"Checking {lemma} at n={cfg.n} ({cfg.mode})")
    if cfg.mode == SYMBOLIC:
        failures = _symbolic_failures(cfg)
        report = LemmaReport(lemma, cfg.n, cfg.mode, not failures, None, failures)
    else:
        failures = _random_failures(cfg, workers)
        report = LemmaReport(lemma, cfg.n, cfg.mode, not failures, cfg.seed, failures)
    if report.ok:
        logger.info(f"{lemma} holds at n={cfg.n}")
    else:
        logger.warning(f"{lemma} fails at n={cfg.n}: {len(failures)} failure(s)")
    return report


# -- structural properties ------------------------------------------------------------

def check_h_decomposition(n: int, order: int) -> List[Tuple[int, int]]:
    """(k, r) where [q^r] of the cleared row divided by D differs from the path generating function h_k.

    Also reports (k, -1) when the diagonal weight identity for u_k fails.
    """
    failures = [(k, -1) for k in check_u_identity(n)]
    q = VarId("q", 1)
    denominator = clearing_factors(n, q_var(1))
    for k in range(1, n + 1):
        numerator = _expand(cleared_h_terms(k, n, 1))
        h = gen_h(k, n, q)
        for r in range(order + 1):
            if series_coefficient_of_quotient(numerator, denominator, q, r) != h.coefficient(r):
                failures.append((k, r))
    return failures


def check_vanishing(n: int, count: int = 5, seed: int = 0) -> List[Dict[str, Any]]:
    """det(D h) at random points with q_j = q_i or q_j = -1/q_i; every value must be zero."""
    if n < 2:
        return []
    failures = []
    for trial, trial_seed in enumerate(trial_seeds(seed, count)):
        rng = random.Random(trial_seed)
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        for relation in ("equal", "inverse"):
            point = random_point("deth", n, rng)
            qi = point[VarId("q", i)]
            point[VarId("q", j)] = qi if relation == "equal" else -1 / qi
            if not _admissible("deth", n, point):
                continue
            matrix = [
                [LaurentPoly.const(_evaluate(entry, point)) for entry in row]
                for row in _matrix_terms("deth", n)
            ]
            value = determinant(matrix).constant_term()
            if value:
                failures.append({"trial": trial, "i": i, "j": j, "relation": relation, "value": str(value)})
    return failures


def deth_coefficient(n: int, lam: StrictPartition) -> LaurentPoly:
    """[q^lam] Z(z) K(z, q) Q(q), expanding each 1/D(q_l) as a geometric series."""
    top = lam.largest()
    geometric = []
    for l in range(1, n + 1):
        spec = RationalSeriesSpec(VarId("q", l), (), tuple(clearing_factors(n, q_var(l))), 0)
        geometric.append(series_expansion(spec, top))
    q_poly = product(q_factors(n))
    pieces = []
    for mono, coeff in q_poly.items():
        exps = dict(mono)
        term = LaurentPoly.const(coeff)
        for l in range(1, n + 1):
            shift = lam.parts[l - 1] - exps.get(VarId("q", l), 0)
            if shift < 0:
                term = ZERO
                break
            term = term * geometric[l - 1][shift]
        if not term.is_zero():
            pieces.append(term)
    return product(z_factors(n)) * poly_sum(pieces)


def check_deth_coherence(n: int, lam: StrictPartition) -> bool:
    """[q^lam] Z K Q equals the odd primed tableau sum over lam."""
    equal = deth_coefficient(n, lam) == tableau_sum(n, lam)
    if not equal:
        logger.warning(f"[q^lam] Z K Q differs from the tableau sum for n={n}, lambda=({lam})")
    return equal


def check_edet_classes(n: int) -> bool:
    """The elementary-function determinant equals the Schur sum over classA shapes of length <= n+1."""
    c = [var("c", i) for i in range(1, n + 2)]
    shapes = [alpha for alpha in classA(n * (n + 1)) if len(alpha) <= n + 1]
    return determinant(edet_matrix(n)) == poly_sum(schur(alpha, c) for alpha in shapes)
