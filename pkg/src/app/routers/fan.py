from fastapi import APIRouter, HTTPException

from src.app.core.errors import PadicStarkError
from src.app.schemas.fan import FanRequest, FanResponse
from src.app.services.fan_service import process_fan

router = APIRouter(tags=["fan"])


@router.post("/fan", response_model=FanResponse)
def fan(request: FanRequest):
    """Shintani fan of the pair attached to a ray class"""
    try:
        return process_fan(request)
    except PadicStarkError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error computing fan: {str(e)}")
