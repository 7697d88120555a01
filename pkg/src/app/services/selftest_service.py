"""
Fast property checks run by `padic-stark selftest`.

Each check returns a short detail string and raises AssertionError on failure;
run_selftest collects the verdicts without stopping at the first failure.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Tuple

from src.app.arith.phi import check_hypotheses
from src.app.arith.quadfield import make_padic_embedding
from src.app.arith.rayclass import build_ray_class_group
from src.app.arith.shintani import enumerate_parallelogram
from src.app.arith.zeta import (
    c_explicit,
    c_sequence,
    exact_Z_at_m,
    p_valuation,
    padic_z_at_1,
    padic_Z_at_1,
    precision_plan,
)
from src.app.core.errors import PadicStarkError
from src.app.services.fan_service import build_fan, resolve_class
from src.app.services.verify_service import verify_example
from src.ingestion.ingest import load_examples, to_field_and_modulus, to_injection

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_cn_recurrence() -> str:
    for p in (3, 5, 7, 11, 13):
        table = c_sequence(p, 120)
        for n in range(1, 121):
            assert table[n] == c_explicit(p, n), f"c_{n} differs for p = {p}"
            if table[n]:
                assert p_valuation(table[n], p) >= -(-n // (p - 1)), f"ord_p(c_{n}) too small for p = {p}"
    return "c_n recurrence agrees with the binomial formula for n <= 120"


def check_precision_plan() -> str:
    plan = precision_plan(3, 24)
    assert plan.M == 63, f"M = {plan.M} for p = 3, N = 24"
    return f"p = 3, N = 24 gives M = {plan.M}, W = {plan.W}"


def check_fan_additivity() -> str:
    p, N = 3, 6
    resolved = resolve_class(37, "2", None, p)
    fan = build_fan(resolved)
    f_int = check_hypotheses(resolved.field, resolved.f, p)
    plan = precision_plan(p, N)
    embedding = make_padic_embedding(resolved.field, p, f_int, W=plan.W_guard)
    whole = padic_Z_at_1(resolved.pair, fan, plan, embedding)
    rho0, rho_last = fan.rho[0], fan.rho[-1]
    points = enumerate_parallelogram(resolved.pair.ideal, rho0, rho_last)
    single = padic_z_at_1(resolved.pair, rho0, rho_last, points, plan, embedding)
    q = p**N
    single = embedding.rational(resolved.pair.norm) % q * single % q
    assert whole == single, f"fan gives {whole}, single cone gives {single}"
    return f"{len(fan.cones)} cones agree with one cone mod {p}^{N}"


def check_exact_values() -> str:
    resolved = resolve_class(37, "2")
    fan = build_fan(resolved)
    for m in (0, -2):
        _, sqrt_part = exact_Z_at_m(resolved.pair, fan, m)
        assert not any(sqrt_part), f"sqrt(d)-part of Z({m}) does not vanish"
    return "sqrt(d)-parts vanish at m = 0, -2"


def check_ray_class_orders() -> str:
    bundles = load_examples()
    for example_id, bundle in sorted(bundles.items()):
        field, f = to_field_and_modulus(bundle)
        G = build_ray_class_group(field, f, injection=to_injection(bundle, field))
        assert list(G.orders) == bundle.group, f"example {example_id}: {list(G.orders)} != {bundle.group}"
    return f"{len(bundles)} ray class groups match their bundles"


def check_verification_example_1() -> str:
    report = verify_example(1)
    assert report.passed, f"example 1 failed: {report.clauses} {report.expected} {report.errors}"
    assert report.d_f == 2, f"d_f = {report.d_f}"
    return f"A = {report.A.rational_str()}, d_f = {report.d_f}"


CHECKS: List[Tuple[str, Callable[[], str]]] = [
    ("cn_recurrence", check_cn_recurrence),
    ("precision_plan", check_precision_plan),
    ("fan_additivity", check_fan_additivity),
    ("exact_values", check_exact_values),
    ("ray_class_orders", check_ray_class_orders),
    ("verification_example_1", check_verification_example_1),
]


def run_selftest() -> List[CheckResult]:
    results = []
    for name, check in CHECKS:
        try:
            detail = check()
            results.append(CheckResult(name, True, detail))
        except (AssertionError, PadicStarkError) as e:
            logger.error("selftest %s failed: %s", name, e)
            results.append(CheckResult(name, False, str(e)))
        else:
            logger.info("selftest %s passed", name)
    return results
