"""Computation bounds and verification campaign files."""

import json
import logging
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional

from src.core.errors import HtsasmError

logger = logging.getLogger(__name__)

MAX_CELLS_ENV = "HTSASM_MAX_CELLS"

# Names accepted in the "check" field of a campaign entry
KNOWN_CHECKS = (
    "factorization",
    "delta",
    "coherence",
    "pdet",
    "deth",
    "detm",
    "hr",
    "edet",
    "bijection",
    "rowstats",
    "bs",
    "characters",
    "negative_control",
)


@dataclass(frozen=True)
class Limits:
    """Upper bounds guarding the exponential enumerations.

    Attributes:
        max_n: largest rank n accepted by the enumerators
        max_cells: largest N*m half matrix the ASM enumerator will explore
        max_det_side: largest matrix side accepted by the determinant routine
        max_mu_weight: largest |mu| used by verification campaigns
        cofactor_cutoff: sides up to this value use cofactor expansion
    """
    max_n: int = 4
    max_cells: int = 96
    max_det_side: int = 8
    max_mu_weight: int = 4
    cofactor_cutoff: int = 5


def load_limits(environ: Optional[Mapping[str, str]] = None) -> Limits:
    """Build the limits, honouring the HTSASM_MAX_CELLS override."""
    env = os.environ if environ is None else environ
    limits = Limits()
    raw = env.get(MAX_CELLS_ENV)
    if raw is None:
        return limits
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {MAX_CELLS_ENV}={raw!r}")
        return limits
    if value <= 0:
        logger.warning(f"Ignoring non-positive {MAX_CELLS_ENV}={value}")
        return limits
    logger.debug(f"Enumeration cell bound overridden to {value}")
    return replace(limits, max_cells=value)


def get_limits() -> Limits:
    return load_limits()


@dataclass(frozen=True)
class CheckSpec:
    """One entry of a campaign: a check name plus its keyword parameters."""
    check: str
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Campaign:
    campaign_id: str
    description: str
    checks: List[CheckSpec]


def parse_campaign(data: Mapping[str, Any]) -> Campaign:
    """Validate a decoded campaign object.

    Raises:
        HtsasmError: when a required field is missing or a check is unknown
    """
    if "campaign_id" not in data or "checks" not in data:
        raise HtsasmError("campaign needs 'campaign_id' and 'checks'")
    checks: List[CheckSpec] = []
    for position, entry in enumerate(data["checks"]):
        if not isinstance(entry, dict) or "check" not in entry:
            raise HtsasmError(f"campaign entry {position} has no 'check' field")
        name = entry["check"]
        if name not in KNOWN_CHECKS:
            raise HtsasmError(f"campaign entry {position}: unknown check {name!r}")
        params = {key: value for key, value in entry.items() if key != "check"}
        checks.append(CheckSpec(check=name, params=params))
    return Campaign(
        campaign_id=str(data["campaign_id"]),
        description=str(data.get("description", "")),
        checks=checks,
    )


def load_campaign(path: str) -> Campaign:
    """Read a campaign JSON file from disk."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise HtsasmError(f"{path}: invalid JSON ({exc})") from exc
    campaign = parse_campaign(data)
    logger.info(f"Loaded campaign {campaign.campaign_id} with {len(campaign.checks)} checks")
    return campaign
