import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from src.app.arith.charpairs import CharPair, act, base_pair
from src.app.arith.quadfield import QuadElem, QuadField, QuadIdeal, ray_unit_generator
from src.app.arith.rayclass import build_ray_class_group, lift_and_kernel
from src.app.arith.shintani import ConeFan, continued_fraction_fan
from src.app.schemas.fan import ConeInfo, FanRequest, FanResponse
from src.app.utils.literal_utils import parse_ideal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolvedClass:
    """A ray class of Cl_f(k) turned into the pair and unit its fan is built from."""

    field: QuadField
    f: QuadIdeal
    label: tuple
    pair: CharPair
    epsilon: QuadElem
    kernel_size: int


def resolve_class(
    d: int, f_literal, label: Optional[Sequence[int]] = None, p: Optional[int] = None
) -> ResolvedClass:
    """
    Build the pair (xi|aI, aI) for the lift of a class of Cl_f(k) to Cl_{f+}(k).

    Args:
        d: Discriminant of the field.
        f_literal: The modulus as an ideal literal.
        label: Class label; the identity when absent.
        p: Prime the representative a has to avoid.

    Returns:
        ResolvedClass: The pair, the unit generating E_{f+} and |ker(Cl_{f+} -> Cl_f)|.
    """
    field = QuadField(d)
    f = parse_ideal(field, f_literal)
    aux = p or 1
    G = build_ray_class_group(field, f, aux_coprime=aux)
    G_plus = build_ray_class_group(field, f, with_infinite=True, aux_coprime=aux)
    lift, kernel_size = lift_and_kernel(G_plus, G)
    c = G.group.reduce(tuple(label) if label else G.group.identity)
    pair = act(base_pair(field, f), lift(c), G_plus, aux)
    logger.debug("class %s of Cl_f lifts to the pair on %s", c, pair.ideal)
    return ResolvedClass(field, f, c, pair, ray_unit_generator(field, f), kernel_size)


def build_fan(resolved: ResolvedClass) -> ConeFan:
    return continued_fraction_fan(resolved.pair, resolved.epsilon)


def to_fan_response(resolved: ResolvedClass, fan: ConeFan) -> FanResponse:
    return FanResponse(
        ideal=str(resolved.pair.ideal),
        epsilon=str(fan.epsilon),
        rho=[str(r) for r in fan.rho],
        partial_quotients=fan.partial_quotients,
        cones=[
            ConeInfo(tau1=str(t1), tau2=str(t2), points=len(fan.points[t]))
            for t, (t1, t2) in enumerate(fan.cones)
        ],
        skipped=fan.skipped,
        point_count=fan.point_count,
    )


def process_fan(request: FanRequest) -> FanResponse:
    """
    Compute the Shintani fan of the pair attached to a ray class.

    Args:
        request: FanRequest with the field, modulus and class.

    Returns:
        FanResponse: Cone generators, partial quotients and point counts.
    """
    resolved = resolve_class(request.d, request.f, request.label, request.p)
    return to_fan_response(resolved, build_fan(resolved))
