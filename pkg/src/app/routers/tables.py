from fastapi import APIRouter, HTTPException, Query

from src.app.core.errors import PadicStarkError
from src.app.schemas.tables import CnResponse, PlanResponse
from src.app.services.tables_service import cn_table, plan_for

router = APIRouter(prefix="/tables", tags=["tables"])


@router.get("/cn", response_model=CnResponse)
def cn(p: int = Query(..., description="Odd prime"), n: int = Query(10, ge=1, le=10_000)):
    """First n terms of the c_n recurrence"""
    try:
        return cn_table(p, n)
    except PadicStarkError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())


@router.get("/plan", response_model=PlanResponse)
def plan(p: int = Query(..., description="Odd prime"), digits: int = Query(..., ge=1)):
    """Series degree and working precision for N digits"""
    try:
        return plan_for(p, digits)
    except PadicStarkError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())
