import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

from src.core.campaign import CampaignResult, CheckResult

logger = logging.getLogger(__name__)

DEFAULT_REPORT_DIR = os.path.join("output", "reports")


def _summarise_by_check(results: List[CheckResult]) -> List[tuple]:
    """(check, passed, total) in order of first appearance."""
    order: List[str] = []
    counts: Dict[str, List[int]] = {}
    for r in results:
        if r.check not in counts:
            order.append(r.check)
            counts[r.check] = [0, 0]
        counts[r.check][1] += 1
        if r.ok:
            counts[r.check][0] += 1
    return [(name, counts[name][0], counts[name][1]) for name in order]


def generate_verification_report(
    campaign: CampaignResult, output_file: Optional[str] = None, deterministic: bool = True
) -> str:
    """
    Generate a fixed-width text report of a verification campaign.

    Args:
        campaign: The CampaignResult to describe
        output_file: Optional file path to save the report
        deterministic: Leave the generation time out of the header

    Returns:
        The report text
    """
    report = []

    header = f"HALF-TURN ASM VERIFICATION REPORT - Campaign: {campaign.campaign_id}"
    if not deterministic:
        header += f" - Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}"
    report.append('=' * 80)
    report.append(header)
    report.append('=' * 80)

    results = campaign.results
    passed = sum(1 for r in results if r.ok)

    report.append("\n1. CAMPAIGN OVERVIEW")
    report.append("--------------------")
    if campaign.description:
        report.append(f"Description: {campaign.description}")
    report.append(f"Instances checked: {len(results)}")
    report.append(f"Instances passed: {passed}")
    report.append(f"Instances failed: {len(results) - passed}")
    report.append(f"Overall result: {'PASS' if campaign.ok else 'FAIL'}")

    report.append("\n2. CHECK RESULTS")
    report.append("----------------")
    report.append(f"  {'Check':<18} | {'Passed':>6} | {'Total':>6}")
    report.append(f"  {'-' * 18}-|-{'-' * 6}-|-{'-' * 6}")
    for name, ok_count, total in _summarise_by_check(results):
        report.append(f"  {name:<18} | {ok_count:>6} | {total:>6}")
    report.append("")
    for r in results:
        report.append(f"  [{'ok' if r.ok else 'FAIL':>4}] {r.check}: {r.label}")

    report.append("\n3. FAILURES")
    report.append("-----------")
    failures = campaign.failures()
    if not failures:
        report.append("None")
    for r in failures:
        report.append(f"\n  {r.check}: {r.label}")
        for key, value in sorted(r.details.items()):
            report.append(f"    {key}: {json.dumps(value, sort_keys=True)}")

    report.append("\n" + '=' * 80)
    text = "\n".join(report) + "\n"

    if output_file:
        directory = os.path.dirname(output_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(output_file, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"Verification report saved to {output_file}")

    return text


def results_to_json(campaign: CampaignResult) -> Dict[str, Any]:
    """Machine-readable form of a campaign outcome."""
    return {
        "campaign_id": campaign.campaign_id,
        "description": campaign.description,
        "ok": campaign.ok,
        "passed": sum(1 for r in campaign.results if r.ok),
        "total": len(campaign.results),
        "results": [r.to_json() for r in campaign.results],
    }
