import logging

from src.app.arith.phi import check_hypotheses, format_digits
from src.app.arith.quadfield import make_padic_embedding
from src.app.arith.zeta import exact_Z_at_m, padic_Z_at_1, precision_plan
from src.app.core.config import get_settings
from src.app.core.errors import HypothesisViolation
from src.app.schemas.zeta import ZetaRequest, ZetaResponse
from src.app.services.fan_service import build_fan, resolve_class

logger = logging.getLogger(__name__)


def _cyc_to_strings(values) -> list:
    return [str(c) for c in values]


def process_zeta(request: ZetaRequest) -> ZetaResponse:
    """
    Twisted zeta value of one ray class.

    In exact mode the value Z(m) at a non-positive integer m is returned in
    the power basis of Q(mu_f); in p-adic mode Z_{T_p,p}(1) mod p^N.

    Raises:
        HypothesisViolation: If p-adic mode is requested without p.
    """
    if request.mode == "padic" and request.p is None:
        raise HypothesisViolation("p-adic values need a prime p")
    if request.mode == "exact" and request.tp_mode and request.p is None:
        raise HypothesisViolation("the p-modified value needs p")

    resolved = resolve_class(request.d, request.f, request.label, request.p)
    fan = build_fan(resolved)

    if request.mode == "exact":
        rational, sqrt_part = exact_Z_at_m(
            resolved.pair, fan, request.m, Tp_mode=request.tp_mode, p=request.p
        )
        logger.info("exact Z(%d) of class %s over %d cones", request.m, resolved.label, len(fan.cones))
        return ZetaResponse(
            mode="exact",
            cones=len(fan.cones),
            rational_part=_cyc_to_strings(rational),
            sqrt_part_vanishes=not any(sqrt_part),
        )

    p = request.p
    N = request.digits or get_settings().default_digits
    f_int = check_hypotheses(resolved.field, resolved.f, p)
    plan = precision_plan(p, N)
    embedding = make_padic_embedding(
        resolved.field, p, f_int, request.root_choice, request.zeta_choice, W=plan.W_guard
    )
    value = padic_Z_at_1(resolved.pair, fan, plan, embedding)
    return ZetaResponse(
        mode="padic",
        cones=len(fan.cones),
        value=value,
        formatted=format_digits(value, p, N),
        p=p,
        digits=N,
    )
