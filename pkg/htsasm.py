#!/usr/bin/env python3
"""
Half-turn symmetric ASM toolkit.

Subcommands:
    enumerate  list lambda-HTSASMs (or shifted tableaux) as JSON lines
    convert    attach compass, tableau, primed tableau and path forms to an input object
    weigh      print the weighted sum of a scheme over all lambda-HTSASMs
    verify     check a factorization identity over a grid of n and mu
    render     draw square ice or lattice paths as SVG
    lemma      check one of the determinant lemmas
    campaign   run a stored campaign from scenarios/

Exit codes: 0 success, 1 identity failure, 2 bad flags, 3 size limit, 4 invalid input object.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.core.asm import HalfTurnAsm, Kind, StrictPartition, embed_central, enumerate_asms, to_compass
from src.core.campaign import run_campaign, verification_campaign
from src.core.config import get_limits, load_campaign
from src.core.detkit import LEMMAS, LemmaCheckConfig, check_lemma
from src.core.errors import (
    DimensionMismatch,
    HtsasmError,
    InvalidAsm,
    InvalidTableau,
    PolynomialParseError,
    SizeLimitExceeded,
)
from src.core.identities import SCHEME_NAMES, sum_wgt
from src.core.paths import LatticePathConfig, is_non_intersecting, to_paths
from src.core.tableaux import (
    Alphabet,
    ShiftedTableau,
    enumerate_primed,
    enumerate_unprimed,
    from_asm,
    primings,
    to_asm,
    validate_tableau,
)
from src.reporting.report_verification import generate_verification_report, results_to_json
from src.visualization.render import render_paths, render_square_ice

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
)
logger: logging.Logger = logging.getLogger('htsasm')

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_BAD_FLAGS = 2
EXIT_SIZE_LIMIT = 3
EXIT_INVALID_INPUT = 4

CONVERT_TARGETS = ("cpm", "tableau", "asm", "primings", "paths")


class InputError(HtsasmError):
    """The input object could not be read."""


# -- flag types ---------------------------------------------------------------------------

def strict_partition_arg(text: str) -> StrictPartition:
    try:
        return StrictPartition.parse(text)
    except HtsasmError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def partition_arg(text: str) -> List[int]:
    try:
        parts = [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot read partition {text!r}") from exc
    if any(p <= 0 for p in parts) or any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise argparse.ArgumentTypeError(f"{text!r} is not a partition")
    return parts


def kind_arg(text: str) -> Kind:
    try:
        return Kind.parse(text)
    except HtsasmError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def targets_arg(text: str) -> List[str]:
    targets = [t.strip() for t in text.split(",") if t.strip()]
    unknown = [t for t in targets if t not in CONVERT_TARGETS]
    if unknown or not targets:
        raise argparse.ArgumentTypeError(f"targets must be among {', '.join(CONVERT_TARGETS)}")
    return targets


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"{value} must be at least 0")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1")
    return value


# -- input objects --------------------------------------------------------------------------

def read_json(path: str) -> Dict[str, Any]:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def read_object(data: Dict[str, Any]):
    """An ASM (half or unfolded), a shifted tableau or a lattice path configuration."""
    try:
        return _decode_object(data)
    except (InvalidAsm, InvalidTableau, DimensionMismatch, InputError):
        raise
    except HtsasmError as exc:
        raise InputError(str(exc)) from exc


def _decode_object(data: Dict[str, Any]):
    if "entries" in data:
        return HalfTurnAsm.from_json(data)
    if "full" in data:
        try:
            kind, n, lam = Kind.parse(data["kind"]), int(data["n"]), StrictPartition(tuple(data["lambda"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed unfolded matrix: {exc}") from exc
        return HalfTurnAsm.from_full_matrix(kind, n, lam, data["full"])
    if "rows" in data:
        return ShiftedTableau.from_json(data)
    if "paths" in data:
        return LatticePathConfig.from_json(data)
    raise InputError("input object has none of the keys entries, full, rows, paths")


def _odd(A: HalfTurnAsm) -> HalfTurnAsm:
    return embed_central(A) if A.kind is Kind.EVEN_B else A


def convert_object(obj, targets: Sequence[str]) -> Dict[str, Any]:
    """Attach the requested representations and the round-trip flag."""
    out: Dict[str, Any] = {}
    if isinstance(obj, HalfTurnAsm):
        out["input"] = "asm"
        T = from_asm(obj)
        odd = _odd(obj)
        out["round_trip"] = to_asm(T) == odd
        if "asm" in targets:
            out["asm"] = obj.to_json()
        if "cpm" in targets:
            out["cpm"] = to_compass(obj).to_json()
        if "tableau" in targets:
            out["tableau"] = T.to_json()
        lifted = primings(T, odd) if ("primings" in targets or "paths" in targets) else []
        if "primings" in targets:
            out["primings"] = [P.to_json() for P in lifted]
        if "paths" in targets:
            out["paths"] = [to_paths(P).to_json() for P in lifted]
        return out
    if isinstance(obj, ShiftedTableau):
        out["input"] = "primed_tableau" if obj.primed else "tableau"
        problems = validate_tableau(obj, primed=obj.primed)
        if problems:
            raise InvalidTableau(problems)
        skeleton = ShiftedTableau(obj.lam, tuple(tuple(e.unprimed() for e in row) for row in obj.rows))
        A = to_asm(skeleton)
        out["round_trip"] = from_asm(A) == skeleton
        if "asm" in targets:
            out["asm"] = A.to_json()
        if "cpm" in targets:
            out["cpm"] = to_compass(A).to_json()
        if "tableau" in targets:
            out["tableau"] = skeleton.to_json()
        if "primings" in targets:
            out["primings"] = [P.to_json() for P in primings(skeleton, A)]
        if "paths" in targets:
            config = to_paths(obj)
            out["paths"] = config.to_json()
            out["non_intersecting"] = is_non_intersecting(config)
        return out
    out["input"] = "paths"
    out["non_intersecting"] = is_non_intersecting(obj)
    out["end_columns"] = list(obj.end_columns())
    out["shared_points"] = [list(p) for p in obj.shared_points()]
    return out


# -- commands -------------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    limits = get_limits()
    n = args.n if args.n is not None else args.lam.length()
    if args.lam.length() != n:
        raise HtsasmError(f"lambda=({args.lam}) does not have n={n} parts")
    if args.objects == "asm":
        items = [A.to_json() for A in enumerate_asms(args.kind, n, args.lam, limits, args.workers)]
    elif args.objects == "tableau":
        items = [T.to_json() for T in enumerate_unprimed(n, args.lam, limits)]
    else:
        items = [P.to_json() for P in enumerate_primed(n, args.lam, Alphabet(args.alphabet), limits)]
    for item in items:
        print(json.dumps(item))
    logger.info(f"{len(items)} objects written")
    return EXIT_OK


def cmd_convert(args) -> int:
    obj = read_object(read_json(args.input))
    print(json.dumps(convert_object(obj, args.to), indent=2))
    return EXIT_OK


def _weigh_shape(args) -> Tuple[int, StrictPartition]:
    if args.mu is None:
        return (args.n if args.n is not None else args.lam.length()), args.lam
    n = args.n if args.n is not None else max(len(args.mu), 1)
    return n, StrictPartition.from_mu(args.mu, n)


def cmd_weigh(args) -> int:
    n, lam = _weigh_shape(args)
    total = sum_wgt(args.kind, n, lam, args.scheme, get_limits(), args.workers)
    if args.json:
        print(json.dumps({
            "kind": args.kind.value, "n": n, "lambda": list(lam.parts),
            "scheme": args.scheme, "sum": str(total),
        }, indent=2))
    else:
        print(total)
    return EXIT_OK


def _emit_campaign(outcome, args) -> int:
    text = generate_verification_report(outcome, args.report)
    if args.json:
        print(json.dumps(results_to_json(outcome), indent=2))
    else:
        print(text, end="")
    return EXIT_OK if outcome.ok else EXIT_IDENTITY_FAILURE


def cmd_verify(args) -> int:
    campaign = verification_campaign(args.scheme, args.kind, args.n_max, args.mu_max, args.perturb, args.mu)
    return _emit_campaign(run_campaign(campaign, get_limits(), args.workers), args)


def cmd_campaign(args) -> int:
    try:
        campaign = load_campaign(args.path)
    except OSError as exc:
        raise InputError(f"{args.path}: {exc}") from exc
    return _emit_campaign(run_campaign(campaign, get_limits(), args.workers), args)


def cmd_render(args) -> int:
    obj = read_object(read_json(args.input))
    if isinstance(obj, HalfTurnAsm) and args.what != "paths":
        render_square_ice(obj, args.out)
        return EXIT_OK
    if isinstance(obj, HalfTurnAsm):
        odd = _odd(obj)
        lifted = primings(from_asm(odd), odd)
        obj = min(lifted, key=lambda P: (P.count_primed(), P.sort_key()))
    if isinstance(obj, ShiftedTableau):
        if args.what == "ice":
            skeleton = ShiftedTableau(obj.lam, tuple(tuple(e.unprimed() for e in row) for row in obj.rows))
            render_square_ice(to_asm(skeleton), args.out)
            return EXIT_OK
        problems = validate_tableau(obj, primed=obj.primed)
        if problems:
            raise InvalidTableau(problems)
        obj = to_paths(obj)
    if args.what == "ice":
        raise InputError("a path configuration cannot be drawn as square ice")
    render_paths(obj, args.out)
    return EXIT_OK


def cmd_lemma(args) -> int:
    cfg = LemmaCheckConfig(args.which, args.n, args.mode, args.trials, args.seed, args.r)
    report = check_lemma(cfg, args.workers)
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK if report.ok else EXIT_IDENTITY_FAILURE


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="htsasm",
        description="Exact weighted sums and factorization checks for half-turn symmetric ASMs",
    )
    parser.add_argument("--workers", type=positive_int, default=1, help="Worker processes (default: 1)")
    parser.add_argument("--verbose", action="store_true", help="Enable verbose logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="List lambda-HTSASMs or shifted tableaux as JSON lines")
    p.add_argument("--kind", type=kind_arg, default=Kind.ODD_B_PRIME, help="B or Bprime (default: Bprime)")
    p.add_argument("--n", type=positive_int, default=None, help="Rank (default: length of lambda)")
    p.add_argument("--lambda", dest="lam", type=strict_partition_arg, required=True, help="Strict partition, e.g. 3,2,1")
    p.add_argument("--objects", choices=("asm", "tableau", "primed"), default="asm", help="What to enumerate")
    p.add_argument("--alphabet", choices=[a.value for a in Alphabet], default="odd", help="Alphabet of primed tableaux")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("convert", help="Convert an ASM, tableau or path object")
    p.add_argument("--input", required=True, help="JSON file, or - for stdin")
    p.add_argument("--to", type=targets_arg, default=list(CONVERT_TARGETS),
                   help=f"Comma separated targets among {','.join(CONVERT_TARGETS)}")
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser("weigh", help="Weighted sum of a scheme")
    p.add_argument("--kind", type=kind_arg, default=Kind.ODD_B_PRIME, help="B or Bprime (default: Bprime)")
    p.add_argument("--n", type=positive_int, default=None, help="Rank (default: length of lambda)")
    shape = p.add_mutually_exclusive_group(required=True)
    shape.add_argument("--lambda", dest="lam", type=strict_partition_arg, help="Strict partition")
    shape.add_argument("--mu", type=partition_arg, default=None, help="Partition mu, weighs lambda = mu + delta")
    p.add_argument("--scheme", choices=SCHEME_NAMES, default="generic", help="Weight table")
    p.add_argument("--json", action="store_true", help="Print a JSON object")
    p.set_defaults(handler=cmd_weigh)

    p = sub.add_parser("verify", help="Check a factorization over a grid of n and mu")
    p.add_argument("--scheme", choices=SCHEME_NAMES, default="generic", help="Weight table")
    p.add_argument("--kind", type=kind_arg, default=None, help="B or Bprime (default: the scheme's kind)")
    p.add_argument("--n-max", type=positive_int, default=2, help="Largest rank (default: 2)")
    p.add_argument("--mu-max", type=non_negative_int, default=2, help="Largest |mu| (default: 2)")
    p.add_argument("--mu", type=partition_arg, default=None, help="Check only this partition mu, e.g. 2,1")
    p.add_argument("--perturb", action="store_true", help="Perturb one table weight; exits 1 when the damage is detected")
    p.add_argument("--report", default=None, help="Write the text report to this file")
    p.add_argument("--json", action="store_true", help="Print the JSON report instead of text")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("render", help="Draw square ice or lattice paths as SVG")
    p.add_argument("--input", required=True, help="JSON file, or - for stdin")
    p.add_argument("--out", required=True, help="Output SVG path")
    p.add_argument("--what", choices=("auto", "ice", "paths"), default="auto", help="Diagram type")
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser("lemma", help="Check a determinant lemma")
    p.add_argument("--which", choices=LEMMAS, required=True, help="Lemma to check")
    p.add_argument("--n", type=int, default=2, help="Matrix side, or number of y variables for hr")
    p.add_argument("--r", type=int, default=2, help="Degree for hr (default: 2)")
    p.add_argument("--mode", choices=("symbolic", "random"), default="symbolic", help="Comparison mode")
    p.add_argument("--seed", type=int, default=0, help="Master seed of the random trials")
    p.add_argument("--trials", type=positive_int, default=20, help="Number of random trials")
    p.set_defaults(handler=cmd_lemma)

    p = sub.add_parser("campaign", help="Run a stored verification campaign")
    p.add_argument("path", help="Campaign JSON file")
    p.add_argument("--report", default=None, help="Write the text report to this file")
    p.add_argument("--json", action="store_true", help="Print the JSON report instead of text")
    p.set_defaults(handler=cmd_campaign)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_BAD_FLAGS
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return args.handler(args)
    except SizeLimitExceeded as exc:
        logger.error(f"Size limit exceeded: {exc}")
        return EXIT_SIZE_LIMIT
    except InvalidAsm as exc:
        logger.error(f"Invalid ASM: {exc}")
        for violation in exc.violations:
            print(str(violation), file=sys.stderr)
        return EXIT_INVALID_INPUT
    except (InvalidTableau, PolynomialParseError, DimensionMismatch, InputError) as exc:
        logger.error(f"Invalid input: {exc}")
        return EXIT_INVALID_INPUT
    except HtsasmError as exc:
        logger.error(str(exc))
        return EXIT_BAD_FLAGS


if __name__ == "__main__":
    sys.exit(main())
