import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional

from src.app.arith.groupring import FiniteAbelianGroup
from src.app.arith.phi import (
    ExpectedTerm,
    MatchReport,
    PhiResult,
    check_hypotheses,
    compute_phi,
    galois_symmetry_check,
    match_expected,
    zeta_choices,
)
from src.app.arith.quadfield import QuadField, QuadIdeal
from src.app.core.config import get_settings
from src.app.core.errors import BundleError, HypothesisViolation
from src.app.schemas.bundle import ExampleBundle, PrimeEntry
from src.app.schemas.phi import MatchInfo, PhiRequest, PhiResponse, SymmetryInfo
from src.app.utils.literal_utils import parse_ideal
from src.ingestion.ingest import get_example, to_field_and_modulus, to_injection

logger = logging.getLogger(__name__)


def run_phi(
    field: QuadField,
    f: QuadIdeal,
    p: int,
    N: int,
    root_choice: int = 0,
    zeta_choice: int = 0,
    injection: Optional[Dict[str, Any]] = None,
    workers: Optional[int] = None,
) -> PhiResult:
    """
    Compute Phi_{f,T_p,p}(1) mod p^N, spreading the classes over worker processes.

    Args:
        workers: Number of processes; settings.max_workers when absent. One
            worker runs everything in this process.
    """
    workers = workers or get_settings().max_workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return compute_phi(field, f, p, N, root_choice, zeta_choice, injection, mapper=pool.map)
    return compute_phi(field, f, p, N, root_choice, zeta_choice, injection)


def expected_terms(group: FiniteAbelianGroup, entry: PrimeEntry) -> List[ExpectedTerm]:
    """Published digit strings with element names normalized to the group's own spelling."""
    terms = []
    for key, digits in entry.expected.items():
        names = tuple(group.element_name(group.parse_element(name)) for name in key.split("+"))
        terms.append(ExpectedTerm(names, digits))
    return terms


def check_against_bundle(
    bundle: ExampleBundle, p: int, workers: Optional[int] = None
) -> tuple:
    """
    Recompute the example's value for p under every embedding choice until the
    published digits are reproduced.

    Returns:
        tuple: (the matching or last computed PhiResult, MatchReport)

    Raises:
        BundleError: If the bundle has no digits for p.
    """
    try:
        entry = bundle.prime(p)
    except KeyError as e:
        raise BundleError(f"example {bundle.id} has no digits for p = {p}") from e
    field, f = to_field_and_modulus(bundle)
    injection = to_injection(bundle, field)
    f_int = check_hypotheses(field, f, p)
    result: Optional[PhiResult] = None
    for root_choice in range(2):
        for zeta_choice in range(zeta_choices(f_int)):
            result = run_phi(field, f, p, entry.digits, root_choice, zeta_choice, injection, workers)
            report = match_expected([result], expected_terms(result.group, entry))
            if report.matched:
                return result, report
            logger.info("no match with root_choice=%d, zeta_choice=%d", root_choice, zeta_choice)
    logger.warning("example %d, p=%d: no embedding choice reproduces the digits", bundle.id, p)
    return result, MatchReport(False)


def to_phi_response(result: PhiResult, match: Optional[MatchReport] = None) -> PhiResponse:
    symmetry = galois_symmetry_check(result.phi, result.inversion)
    group = result.group
    return PhiResponse(
        d=result.field.d,
        f=str(result.f),
        p=result.p,
        digits=result.N,
        M=result.plan.M,
        group=list(group.orders),
        elements=[group.element_name(e) for e in group.elements],
        coefficients=list(result.phi.coeffs),
        formatted=result.formatted(),
        sigma_sum=result.sigma_sum(),
        kernel_size=result.kernel_size,
        euler_factor=result.euler_factor,
        sqrt_unit=result.sqrt_unit,
        cone_counts={group.element_name(c): n for c, n in result.cone_counts.items()},
        symmetry=SymmetryInfo(
            checked=symmetry.checked,
            symmetric=symmetry.symmetric,
            max_discrepancy=symmetry.max_discrepancy,
            mismatches=list(symmetry.mismatches),
        ),
        match=(
            MatchInfo(
                matched=match.matched,
                root_choice=match.root_choice,
                zeta_choice=match.zeta_choice,
                automorphism=list(match.automorphism) if match.automorphism else None,
            )
            if match is not None
            else None
        ),
    )


def process_phi(request: PhiRequest) -> PhiResponse:
    """
    Compute Phi_{f,T_p,p}(1) for explicit data or a bundled example.

    Args:
        request: PhiRequest naming either an example or (d, f).

    Returns:
        PhiResponse: The coefficients, formatting, symmetry report and, in
            check mode, the comparison with the published digits.

    Raises:
        HypothesisViolation: If neither an example nor (d, f) is given, or
            check mode is requested without an example.
    """
    if request.example is not None:
        bundle = get_example(request.example)
        if request.check:
            result, match = check_against_bundle(bundle, request.p, request.workers)
            return to_phi_response(result, match)
        field, f = to_field_and_modulus(bundle)
        injection = to_injection(bundle, field)
        try:
            default_digits = bundle.prime(request.p).digits
        except KeyError:
            default_digits = None
    else:
        if request.d is None or request.f is None:
            raise HypothesisViolation("give either an example id or both d and f")
        if request.check:
            raise HypothesisViolation("check mode needs a bundled example")
        field = QuadField(request.d)
        f = parse_ideal(field, request.f)
        injection = None
        default_digits = None

    N = request.digits or default_digits or get_settings().default_digits
    result = run_phi(
        field, f, request.p, N, request.root_choice, request.zeta_choice, injection, request.workers
    )
    return to_phi_response(result)
