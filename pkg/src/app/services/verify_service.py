import logging
from typing import Optional

from src.app.arith.verify import VerificationReport, check_conjecture_parts
from src.app.core.errors import HypothesisViolation
from src.app.schemas.verify import VerifyRequest, VerifyResponse
from src.ingestion.ingest import build_verification_input, get_example, to_verification_input

logger = logging.getLogger(__name__)


def _str_or_none(x) -> Optional[str]:
    return None if x is None else str(x)


def to_verify_response(report: VerificationReport) -> VerifyResponse:
    return VerifyResponse(
        A=report.A.rational_str() if report.A is not None else None,
        residual=report.residual,
        bound=report.bound,
        model=report.model,
        upper_bound=report.upper_bound,
        gamma_index=_str_or_none(report.gamma_index),
        d_f=report.d_f,
        d_f_sigma=report.d_f_sigma,
        index_eta=_str_or_none(report.index_eta),
        prime_power=report.prime_power,
        clauses=report.clauses,
        expected=report.expected,
        errors=report.errors,
        passed=report.passed,
    )


def verify_example(example_id: int) -> VerificationReport:
    return check_conjecture_parts(to_verification_input(get_example(example_id)))


def process_verify(request: VerifyRequest) -> VerifyResponse:
    """
    Run the verification pipeline on a bundled example or on explicit data.

    Raises:
        HypothesisViolation: If the request names neither an example nor
            complete explicit data.
    """
    if request.example is not None:
        report = verify_example(request.example)
    else:
        if request.d is None or request.f is None or request.group is None or request.data is None:
            raise HypothesisViolation("give an example id or all of d, f, group and data")
        data = build_verification_input(request.d, request.f, request.group, request.data)
        report = check_conjecture_parts(data)
    logger.info("verification %s", "passed" if report.passed else "failed")
    return to_verify_response(report)
