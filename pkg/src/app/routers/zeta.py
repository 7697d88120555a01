from fastapi import APIRouter, HTTPException

from src.app.core.errors import PadicStarkError
from src.app.schemas.zeta import ZetaRequest, ZetaResponse
from src.app.services.zeta_service import process_zeta

router = APIRouter(tags=["zeta"])


@router.post("/zeta", response_model=ZetaResponse)
def zeta(request: ZetaRequest):
    """Exact or p-adic twisted zeta value of a ray class"""
    try:
        return process_zeta(request)
    except PadicStarkError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error computing zeta value: {str(e)}")
