from src.app.arith.zeta import c_sequence, precision_plan
from src.app.schemas.tables import CnResponse, PlanResponse


def cn_table(p: int, n: int) -> CnResponse:
    """The first n terms c_1, ..., c_n of the recurrence for p."""
    return CnResponse(p=p, values=list(c_sequence(p, n).values))


def plan_for(p: int, N: int) -> PlanResponse:
    plan = precision_plan(p, N)
    return PlanResponse(p=plan.p, N=plan.N, M=plan.M, W=plan.W, W_guard=plan.W_guard)
