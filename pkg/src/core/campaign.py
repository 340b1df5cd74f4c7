"""
Verification campaigns
----------------------
Runs the checks named in a campaign file and collects one CheckResult per
verified instance. Every check expands its parameters into a deterministic
sequence of instances (n ascending, then partitions in canonical order), so
two runs of the same campaign produce the same result list.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from src.core.asm import (
    Compass,
    Kind,
    StrictPartition,
    check_l_symmetry,
    check_row_identities,
    enumerate_asms,
    stats,
)
from src.core.config import Campaign, CheckSpec, Limits, get_limits
from src.core.detkit import (
    LemmaCheckConfig,
    check_deth_coherence,
    check_edet_classes,
    check_h_decomposition,
    check_lemma,
    check_vanishing,
)
from src.core.errors import HtsasmError, SchemeKindMismatch
from src.core.identities import (
    SCHEME_NAMES,
    SPECIALIZATION_TARGETS,
    bs_verify,
    check_asm_tableau_sums,
    coherence_check,
    delta_product,
    get_scheme,
    literal_weyl_specialization,
    perturbed,
    phi_symmetry_failures,
    so_inversion_failures,
    sum_wgt,
    verify_factorization,
    verify_tableau_factorization,
    weyl_denominator,
    weyl_specialization,
)
from src.core.laurent import ONE, bar, var
from src.core.paths import count_nonintersecting_families, is_non_intersecting, to_paths, verify_pdet
from src.core.symfunc import Partition, partitions_of, so_universal
from src.core.tableaux import Alphabet, enumerate_primed, from_asm, primings, to_asm

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    """Outcome of one verified instance.

    Attributes:
        check: campaign check name
        label: human readable instance description
        ok: the identity or property holds
        details: JSON-ready data (diff polynomials, failure lists)
    """
    check: str
    label: str
    ok: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {"check": self.check, "label": self.label, "ok": self.ok, "details": self.details}


@dataclass
class CampaignResult:
    campaign_id: str
    description: str
    results: List[CheckResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.ok]


# -- instance generators ------------------------------------------------------------------

def mu_range(n: int, max_weight: int) -> Iterator[Partition]:
    """Partitions with at most n parts and weight 0..max_weight."""
    for k in range(max_weight + 1):
        yield from partitions_of(k, max_len=n)


def strict_partitions(n: int, largest_max: int) -> List[StrictPartition]:
    """Strict partitions with exactly n parts and largest part at most largest_max."""
    return [
        StrictPartition(tuple(sorted(parts, reverse=True)))
        for parts in combinations(range(1, largest_max + 1), n)
    ]


def _mu_label(mu: Partition) -> str:
    return f"({','.join(str(p) for p in mu.parts)})"


# -- parameter handling -------------------------------------------------------------------

_ALLOWED = {
    "factorization": {"scheme", "kind", "n_max", "mu_max", "mu", "perturb"},
    "delta": {"schemes", "n_max"},
    "coherence": {"target", "targets", "n_max", "mu_max"},
    "pdet": {"n_max", "mu_max"},
    "deth": {"n", "mode", "trials", "seed"},
    "detm": {"n", "mode", "trials", "seed"},
    "hr": {"r_max", "n_vars"},
    "edet": {"n_max"},
    "bijection": {"n_max", "largest_max"},
    "rowstats": {"n_max", "largest_max"},
    "bs": {"n_max", "mu_max", "mu"},
    "characters": {"n_max", "mu_max"},
    "negative_control": {"scheme", "n", "mu", "label", "row_class"},
}


def _validate_params(spec: CheckSpec) -> None:
    unknown = sorted(set(spec.params) - _ALLOWED[spec.check])
    if unknown:
        raise HtsasmError(f"check {spec.check}: unknown parameter(s) {', '.join(unknown)}")


def _int_param(params: Mapping[str, Any], name: str, default: int) -> int:
    value = params.get(name, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise HtsasmError(f"parameter {name} must be an integer, got {value!r}")
    if value < 0:
        raise HtsasmError(f"parameter {name} must be non-negative, got {value}")
    return value


def _mu_param(params: Mapping[str, Any]) -> Optional[Partition]:
    if "mu" not in params:
        return None
    value = params["mu"]
    if not isinstance(value, list) or any(isinstance(p, bool) or not isinstance(p, int) or p <= 0 for p in value):
        raise HtsasmError(f"parameter mu must be a list of positive integers, got {value!r}")
    if any(value[i] < value[i + 1] for i in range(len(value) - 1)):
        raise HtsasmError(f"parameter mu={value} is not a partition")
    return Partition(tuple(value))


def _grid(params: Mapping[str, Any], n_max: int, mu_max: int) -> Iterator[Tuple[int, Partition]]:
    """(n, mu) pairs: every mu up to mu_max, or only the fixed mu of the params for each n that can hold it."""
    fixed = _mu_param(params)
    for n in range(1, n_max + 1):
        if fixed is None:
            for mu in mu_range(n, mu_max):
                yield n, mu
        elif len(fixed) <= n:
            yield n, fixed


# -- checks ---------------------------------------------------------------------------------

def _factorization(params, limits: Limits, workers: int) -> List[CheckResult]:
    """Factorization grid; with perturb set, one table weight carries a (1 + eps) factor and failures are expected."""
    scheme = get_scheme(params.get("scheme", "generic"))
    kind = Kind.parse(params["kind"]) if "kind" in params else scheme.kind
    n_max = _int_param(params, "n_max", 2)
    mu_max = 0 if scheme.staircase_only else _int_param(params, "mu_max", 2)
    perturb = params.get("perturb", False)
    if not isinstance(perturb, bool):
        raise HtsasmError(f"parameter perturb must be true or false, got {perturb!r}")
    tag = scheme.name
    if perturb:
        scheme = perturbed(scheme)
        tag = f"perturbed {scheme.name} {scheme.perturbation[0].value}/{scheme.perturbation[1]}"
    results = []
    for n, mu in _grid(params, n_max, mu_max):
        report = verify_factorization(kind, n, mu, scheme, limits, workers)
        results.append(CheckResult(
            "factorization", f"{tag} {kind.value} n={n} mu={_mu_label(mu)}", report.ok, report.to_json()
        ))
    return results


def _delta(params, limits: Limits, workers: int) -> List[CheckResult]:
    names = params.get("schemes", ["generic", "bn", "okada", "simpson", "tabony", "result1", "bs"])
    n_max = _int_param(params, "n_max", 3)
    results = []
    for name in names:
        scheme = get_scheme(name)
        for n in range(1, n_max + 1):
            lhs = sum_wgt(scheme.kind, n, StrictPartition.staircase(n), scheme, limits, workers)
            rhs = delta_product(scheme.kind, n, scheme)
            details = {} if lhs == rhs else {"diff": str(lhs - rhs)}
            results.append(CheckResult("delta", f"{name} n={n}", lhs == rhs, details))
    return results


def _coherence(params, limits: Limits, workers: int) -> List[CheckResult]:
    targets = params.get("targets") or [params.get("target", "result1")]
    n_max = _int_param(params, "n_max", 2)
    mu_max = _int_param(params, "mu_max", 0)
    results = []
    for target in targets:
        if target not in SPECIALIZATION_TARGETS:
            raise HtsasmError(f"no specialization into {target!r}")
        top = 0 if get_scheme(target).staircase_only else mu_max
        for n in range(1, n_max + 1):
            for mu in mu_range(n, top):
                report = coherence_check(target, n, StrictPartition.from_mu(mu.parts, n), limits)
                results.append(CheckResult("coherence", f"{target} n={n} mu={_mu_label(mu)}", report.ok, report.to_json()))
    return results


def _pdet(params, limits: Limits, workers: int) -> List[CheckResult]:
    n_max = _int_param(params, "n_max", 2)
    mu_max = _int_param(params, "mu_max", 2)
    results = []
    for n in range(1, n_max + 1):
        for mu in mu_range(n, mu_max):
            lam = StrictPartition.from_mu(mu.parts, n)
            report = verify_pdet(n, lam)
            results.append(CheckResult("pdet", f"n={n} lambda=({lam})", report.equal, report.to_json()))
            asm_side = check_asm_tableau_sums(n, lam, limits)
            results.append(CheckResult("pdet", f"asm sum vs tableau sum n={n} lambda=({lam})", asm_side))
    return results


def _matrix_lemma(lemma: str):
    def run(params, limits: Limits, workers: int) -> List[CheckResult]:
        n = _int_param(params, "n", 2)
        cfg = LemmaCheckConfig(
            lemma, n, params.get("mode", "symbolic"),
            _int_param(params, "trials", 20), _int_param(params, "seed", 0),
        )
        report = check_lemma(cfg, workers)
        results = [CheckResult(lemma, f"{lemma} n={n} {cfg.mode}", report.ok, report.to_json())]
        if lemma == "deth" and n <= 2:
            decomposition = check_h_decomposition(n, n + 3)
            results.append(CheckResult(
                "deth", f"h decomposition n={n}", not decomposition, {"failures": [list(f) for f in decomposition]}
            ))
            vanishing = check_vanishing(n, 3, cfg.seed)
            results.append(CheckResult("deth", f"vanishing n={n}", not vanishing, {"failures": vanishing}))
            lam = StrictPartition.staircase(n)
            results.append(CheckResult("deth", f"tableau coherence n={n}", check_deth_coherence(n, lam)))
        return results
    return run


def _hr(params, limits: Limits, workers: int) -> List[CheckResult]:
    r_max = _int_param(params, "r_max", 4)
    n_vars = _int_param(params, "n_vars", 2)
    results = []
    for r in range(r_max + 1):
        report = check_lemma(LemmaCheckConfig("hr", n_vars, r=r), workers)
        results.append(CheckResult("hr", f"r={r} with {n_vars} y variables", report.ok, report.to_json()))
    return results


def _edet(params, limits: Limits, workers: int) -> List[CheckResult]:
    n_max = _int_param(params, "n_max", 3)
    results = []
    for n in range(1, n_max + 1):
        report = check_lemma(LemmaCheckConfig("edet", n), workers)
        results.append(CheckResult("edet", f"n={n}", report.ok, report.to_json()))
        if n <= 3:
            results.append(CheckResult("edet", f"class expansion n={n}", check_edet_classes(n)))
    return results


def _bijection(params, limits: Limits, workers: int) -> List[CheckResult]:
    n_max = _int_param(params, "n_max", 2)
    largest_max = _int_param(params, "largest_max", 4)
    results = []
    for n in range(1, n_max + 1):
        for lam in strict_partitions(n, largest_max):
            asms = enumerate_asms(Kind.ODD_B_PRIME, n, lam, limits, workers)
            round_trip = [str(A) for A in asms if to_asm(from_asm(A)) != A]
            results.append(CheckResult(
                "bijection", f"round trip n={n} lambda=({lam})", not round_trip, {"failures": round_trip}
            ))
            primed = enumerate_primed(n, lam, Alphabet.ODD, limits)
            expected = sum(2 ** A.neg() for A in asms)
            results.append(CheckResult(
                "bijection", f"primed count n={n} lambda=({lam})", len(primed) == expected,
                {"primed": len(primed), "sum_2_neg": expected},
            ))
            lifted = sorted(
                (P for A in asms for P in primings(from_asm(A), A)), key=lambda P: P.sort_key()
            )
            results.append(CheckResult(
                "bijection", f"primings n={n} lambda=({lam})", lifted == primed
            ))
            crossing = sum(1 for P in primed if not is_non_intersecting(to_paths(P)))
            results.append(CheckResult(
                "bijection", f"non-intersecting paths n={n} lambda=({lam})", crossing == 0, {"crossing": crossing}
            ))
            if n <= 2:
                families = count_nonintersecting_families(n, lam)
                results.append(CheckResult(
                    "bijection", f"path families n={n} lambda=({lam})", families == len(primed),
                    {"families": families, "primed": len(primed)},
                ))
    return results


def _rowstats(params, limits: Limits, workers: int) -> List[CheckResult]:
    n_max = _int_param(params, "n_max", 2)
    largest_max = _int_param(params, "largest_max", 4)
    results = []
    for kind in (Kind.ODD_B_PRIME, Kind.EVEN_B):
        for n in range(1, n_max + 1):
            for lam in strict_partitions(n, largest_max):
                failures: List[str] = []
                for A in enumerate_asms(kind, n, lam, limits, workers):
                    st = stats(A)
                    failures += [f"{A.entries}: {f}" for f in check_row_identities(A, st) + check_l_symmetry(A, st)]
                results.append(CheckResult(
                    "rowstats", f"{kind.value} n={n} lambda=({lam})", not failures, {"failures": failures}
                ))
    return results


def _bs(params, limits: Limits, workers: int) -> List[CheckResult]:
    n_max = _int_param(params, "n_max", 2)
    mu_max = _int_param(params, "mu_max", 2)
    results = []
    for n, mu in _grid(params, n_max, mu_max):
        report = bs_verify(n, mu, limits, workers)
        results.append(CheckResult("bs", f"n={n} mu={_mu_label(mu)}", report.ok, report.to_json()))
    return results


def _characters(params, limits: Limits, workers: int) -> List[CheckResult]:
    n_max = _int_param(params, "n_max", 2)
    mu_max = _int_param(params, "mu_max", 3)
    results = []
    x1 = var("x", 1)
    so_one = so_universal(Partition((1,)), [x1, ONE, bar(x1)])
    results.append(CheckResult("characters", "so_(1)(x, 1, xbar)", so_one == x1 + ONE + bar(x1)))
    results.append(CheckResult("characters", "literal Weyl map n=1", literal_weyl_specialization(1) == weyl_denominator(1)))
    for n in range(1, n_max + 1):
        results.append(CheckResult("characters", f"Weyl specialization n={n}", weyl_specialization(n) == weyl_denominator(n)))
        for mu in mu_range(n, mu_max):
            label = f"n={n} mu={_mu_label(mu)}"
            swaps = phi_symmetry_failures(n, mu)
            results.append(CheckResult("characters", f"symmetry {label}", not swaps, {"failures": [list(s) for s in swaps]}))
            inversions = so_inversion_failures(n, mu)
            results.append(CheckResult("characters", f"inversion {label}", not inversions, {"failures": inversions}))
            for alphabet in (Alphabet.ODD, Alphabet.EVEN):
                report = verify_tableau_factorization(n, mu, alphabet)
                results.append(CheckResult("characters", f"{alphabet.value} tableau sum {label}", report.ok, report.to_json()))
    return results


def _negative_control(params, limits: Limits, workers: int) -> List[CheckResult]:
    scheme = get_scheme(params.get("scheme", "generic"))
    n = _int_param(params, "n", 2)
    mu = Partition(tuple(params.get("mu", [1] if not scheme.staircase_only else [])))
    label = Compass(params["label"]) if "label" in params else None
    sabotaged = perturbed(scheme, label, params.get("row_class"))
    report = verify_factorization(scheme.kind, n, mu, sabotaged, limits, workers)
    # the control passes when the sabotaged identity is reported as failing
    return [CheckResult(
        "negative_control",
        f"perturbed {scheme.name} {sabotaged.perturbation[0].value}/{sabotaged.perturbation[1]} n={n} mu={_mu_label(mu)}",
        not report.equal,
        {"detected": not report.equal},
    )]


CHECKS: Dict[str, Callable[[Mapping[str, Any], Limits, int], List[CheckResult]]] = {
    "factorization": _factorization,
    "delta": _delta,
    "coherence": _coherence,
    "pdet": _pdet,
    "deth": _matrix_lemma("deth"),
    "detm": _matrix_lemma("detm"),
    "hr": _hr,
    "edet": _edet,
    "bijection": _bijection,
    "rowstats": _rowstats,
    "bs": _bs,
    "characters": _characters,
    "negative_control": _negative_control,
}


def run_check(spec: CheckSpec, limits: Optional[Limits] = None, workers: int = 1) -> List[CheckResult]:
    """Run one campaign entry.

    Raises:
        HtsasmError: unknown check or parameter; size limits surface as SizeLimitExceeded
    """
    if spec.check not in CHECKS:
        raise HtsasmError(f"unknown check {spec.check!r}")
    _validate_params(spec)
    limits = limits or get_limits()
    logger.info(f"Running check {spec.check} with {dict(sorted(spec.params.items()))}")
    results = CHECKS[spec.check](spec.params, limits, workers)
    if not results:
        raise HtsasmError(f"check {spec.check} with {dict(sorted(spec.params.items()))} has no instances")
    failed = sum(1 for r in results if not r.ok)
    if failed:
        logger.warning(f"Check {spec.check}: {failed} of {len(results)} instances failed")
    else:
        logger.info(f"Check {spec.check}: all {len(results)} instances hold")
    return results


def run_campaign(campaign: Campaign, limits: Optional[Limits] = None, workers: int = 1) -> CampaignResult:
    results: List[CheckResult] = []
    for spec in campaign.checks:
        results.extend(run_check(spec, limits, workers))
    outcome = CampaignResult(campaign.campaign_id, campaign.description, results)
    logger.info(f"Campaign {campaign.campaign_id}: {len(results) - len(outcome.failures())}/{len(results)} passed")
    return outcome


def verification_campaign(
    scheme: str,
    kind: Optional[Kind],
    n_max: int,
    mu_max: int,
    perturb: bool = False,
    mu: Optional[List[int]] = None,
) -> Campaign:
    """The campaign run by the verify command.

    With perturb the factorization grid runs on a table with one weight
    multiplied by (1 + eps); the campaign then fails wherever the damage is
    detected. A fixed mu replaces the |mu| <= mu_max grid.
    """
    if scheme not in SCHEME_NAMES:
        raise HtsasmError(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEME_NAMES)}")
    if kind is not None and kind is not get_scheme(scheme).kind:
        raise SchemeKindMismatch(scheme, kind.value)
    if n_max < 1 or mu_max < 0:
        raise HtsasmError(f"need n_max >= 1 and mu_max >= 0, got n_max={n_max}, mu_max={mu_max}")
    shape = f"mu=({','.join(str(p) for p in mu)})" if mu is not None else f"|mu|<={mu_max}"
    params: Dict[str, Any] = {"n_max": n_max, "mu_max": mu_max}
    if mu is not None:
        params["mu"] = list(mu)
    if scheme == "bs" and not perturb:
        return Campaign(f"verify-{scheme}", f"six-vertex ratio up to n={n_max}, {shape}", [CheckSpec("bs", params)])
    params["scheme"] = scheme
    if kind is not None:
        params["kind"] = kind.value
    if perturb:
        params["perturb"] = True
        return Campaign(
            f"verify-{scheme}-perturbed", f"perturbed {scheme} table up to n={n_max}, {shape}",
            [CheckSpec("factorization", params)],
        )
    return Campaign(f"verify-{scheme}", f"factorization of {scheme} up to n={n_max}, {shape}", [CheckSpec("factorization", params)])
