"""
Command-line front end.

    padic-stark fan --d 37 --f 2
    padic-stark zeta --d 37 --f 2 --mode exact --m -2
    padic-stark phi --example 1 --p 7 --assert
    padic-stark verify --example 4
    padic-stark cn --p 3 --n 4
    padic-stark plan --p 3 --digits 24
    padic-stark selftest

Every mathematical input is a flag. Errors are printed to stderr as
{"error": ..., "detail": ...}; the exit status is 2 for errors and 1 for a
failed --assert.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional

from pydantic import BaseModel, ValidationError

from src.app.core.config import get_settings
from src.app.core.errors import PadicStarkError
from src.app.core.logging import configure_logging
from src.app.schemas.fan import FanRequest
from src.app.schemas.phi import PhiRequest
from src.app.schemas.verify import VerifyRequest
from src.app.schemas.zeta import ZetaRequest
from src.app.services.fan_service import process_fan
from src.app.services.phi_service import process_phi
from src.app.services.selftest_service import run_selftest
from src.app.services.tables_service import cn_table, plan_for
from src.app.services.verify_service import process_verify
from src.app.services.zeta_service import process_zeta
from src.ingestion.ingest import load_examples, summarize

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERT = 1
EXIT_ERROR = 2


class CliUsageError(PadicStarkError):
    """Missing or conflicting command-line flags."""


def _label(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _add_field_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, help="Discriminant of the real quadratic field")
    parser.add_argument("--f", help="Modulus literal, e.g. 2, P5, P2*P2', [a,b]^2")
    parser.add_argument("--f-hnf", help="Modulus as a JSON HNF [[a, b], [0, c]]")
    parser.add_argument("--f-rational", type=int, help="Modulus nO for a rational integer n")
    parser.add_argument("--config", help='JSON file {"d_k": ..., "ideal": ...}')


def _add_embedding_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--root-choice", type=int, default=0, help="Square root of d_k mod p")
    parser.add_argument("--zeta-choice", type=int, default=0, help="Primitive f-th root of unity mod p")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit JSON on stdout")
    common.add_argument("--log-level", help="Override the configured log level")

    parser = argparse.ArgumentParser(
        prog="padic-stark", description="p-adic twisted zeta values of real quadratic fields"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    fan = subparsers.add_parser("fan", parents=[common], help="Shintani fan of a ray class")
    _add_field_args(fan)
    fan.add_argument("--label", type=_label, help="Class label, e.g. 1 or 1,0")
    fan.add_argument("--p", type=int, help="Prime the representative avoids")

    zeta = subparsers.add_parser("zeta", parents=[common], help="Twisted zeta value of a ray class")
    _add_field_args(zeta)
    _add_embedding_args(zeta)
    zeta.add_argument("--label", type=_label)
    zeta.add_argument("--mode", choices=["exact", "padic"], default="padic")
    zeta.add_argument("--m", type=int, default=0, help="Non-positive integer (exact mode)")
    zeta.add_argument("--s1", action="store_true", help="The p-adic value at s = 1")
    zeta.add_argument("--tp", action="store_true", help="Remove the Euler factors at p (exact mode)")
    zeta.add_argument("--p", type=int)
    zeta.add_argument("--digits", type=int)

    phi = subparsers.add_parser("phi", parents=[common], help="Phi_{f,T_p,p}(1) mod p^N")
    _add_field_args(phi)
    _add_embedding_args(phi)
    phi.add_argument("--example", type=int, help="Bundled example id")
    phi.add_argument("--p", type=int, required=True)
    phi.add_argument("--digits", type=int)
    phi.add_argument("--threads", type=int, help="Worker processes over ray classes")
    phi.add_argument("--assert", dest="assert_match", action="store_true",
                     help="Compare with the bundled digits over every embedding choice")

    verify = subparsers.add_parser("verify", parents=[common], help="Solve for A and check the lattice statements")
    verify.add_argument("--example", type=int, required=True)
    verify.add_argument("--assert", dest="assert_match", action="store_true",
                        help="Exit 1 unless every clause and comparison passes")

    cn = subparsers.add_parser("cn", parents=[common], help="Terms of the c_n recurrence")
    cn.add_argument("--p", type=int, required=True)
    cn.add_argument("--n", type=int, default=10)

    plan = subparsers.add_parser("plan", parents=[common], help="Precision plan for N digits")
    plan.add_argument("--p", type=int, required=True)
    plan.add_argument("--digits", type=int, required=True)

    subparsers.add_parser("selftest", parents=[common], help="Run the fast property checks")
    subparsers.add_parser("examples", parents=[common], help="List the bundled examples")
    return parser


def resolve_field_args(args: argparse.Namespace) -> tuple:
    """(d, modulus literal) from --config or the explicit flags."""
    d, f = args.d, None
    if args.config:
        with open(Path(args.config), encoding="utf-8") as fh:
            config = json.load(fh)
        d = config.get("d_k", d)
        f = config.get("ideal")
    chosen = [x for x in (args.f, args.f_hnf, args.f_rational) if x is not None]
    if len(chosen) > 1:
        raise CliUsageError("give only one of --f, --f-hnf, --f-rational")
    if args.f is not None:
        f = args.f
    elif args.f_hnf is not None:
        f = {"hnf": json.loads(args.f_hnf)}
    elif args.f_rational is not None:
        f = args.f_rational
    return d, f


def _emit(payload: Any, as_json: bool, text: Optional[str] = None) -> None:
    if as_json or text is None:
        if isinstance(payload, BaseModel):
            print(payload.model_dump_json(indent=2))
        else:
            print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _run_fan(args) -> int:
    d, f = resolve_field_args(args)
    response = process_fan(FanRequest(d=d, f=f, label=args.label, p=args.p))
    text = "\n".join(
        [f"I = {response.ideal}", f"epsilon = {response.epsilon}", f"b_n = {response.partial_quotients}"]
        + [f"C({c.tau1}, {c.tau2}): {c.points} points" for c in response.cones]
    )
    _emit(response, args.json, text)
    return EXIT_OK


def _run_zeta(args) -> int:
    d, f = resolve_field_args(args)
    mode = "padic" if args.s1 else args.mode
    response = process_zeta(
        ZetaRequest(
            d=d, f=f, label=args.label, p=args.p, mode=mode, m=args.m, tp_mode=args.tp,
            digits=args.digits, root_choice=args.root_choice, zeta_choice=args.zeta_choice,
        )
    )
    if mode == "exact":
        text = f"Z({args.m}) = {response.rational_part} (sqrt part vanishes: {response.sqrt_part_vanishes})"
    else:
        text = f"Z_(T_p,p)(1) = {response.formatted}"
    _emit(response, args.json, text)
    return EXIT_OK


def _run_phi(args) -> int:
    d, f = (None, None) if args.example is not None else resolve_field_args(args)
    response = process_phi(
        PhiRequest(
            example=args.example, d=d, f=f, p=args.p, digits=args.digits,
            root_choice=args.root_choice, zeta_choice=args.zeta_choice,
            check=args.assert_match, workers=args.threads,
        )
    )
    lines = [response.sigma_sum]
    if response.match is not None:
        if response.match.matched:
            lines.append(
                f"matched: root_choice={response.match.root_choice}, "
                f"zeta_choice={response.match.zeta_choice}"
            )
        else:
            lines.append("no embedding choice reproduces the published digits")
    _emit(response, args.json, "\n".join(lines))
    if args.assert_match and not response.match.matched:
        return EXIT_ASSERT
    return EXIT_OK


def _run_verify(args) -> int:
    response = process_verify(VerifyRequest(example=args.example))
    text = "\n".join(
        [f"A = {response.A}", f"d_f = {response.d_f}", f"index = {response.index_eta}"]
        + [f"{k}: {v}" for k, v in response.clauses.items()]
        + [f"expected {k}: {'ok' if v else 'MISMATCH'}" for k, v in response.expected.items()]
    )
    _emit(response, args.json, text)
    if args.assert_match and not response.passed:
        return EXIT_ASSERT
    return EXIT_OK


def _run_cn(args) -> int:
    response = cn_table(args.p, args.n)
    _emit(response, args.json, " ".join(str(c) for c in response.values))
    return EXIT_OK


def _run_plan(args) -> int:
    response = plan_for(args.p, args.digits)
    _emit(response, args.json, f"M = {response.M}, W = {response.W}, W_guard = {response.W_guard}")
    return EXIT_OK


def _run_selftest(args) -> int:
    results = run_selftest()
    payload = [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    text = "\n".join(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results)
    _emit(payload, args.json, text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ASSERT


def _run_examples(args) -> int:
    summaries = [summarize(b) for _, b in sorted(load_examples().items())]
    text = "\n".join(
        f"{s.id:>2}  d_k={s.d_k:<5} f={s.f:<8} G={s.group} p in {s.primes}" for s in summaries
    )
    _emit([s.model_dump() for s in summaries], args.json, text)
    return EXIT_OK


COMMANDS = {
    "fan": _run_fan,
    "zeta": _run_zeta,
    "phi": _run_phi,
    "verify": _run_verify,
    "cn": _run_cn,
    "plan": _run_plan,
    "selftest": _run_selftest,
    "examples": _run_examples,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or get_settings().log_level)
    try:
        return COMMANDS[args.command](args)
    except PadicStarkError as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
    except ValidationError as e:
        print(json.dumps({"error": "ValidationError", "detail": str(e)}), file=sys.stderr)
    except (OSError, json.JSONDecodeError) as e:
        print(json.dumps({"error": type(e).__name__, "detail": str(e)}), file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
