from fastapi import APIRouter, HTTPException

from src.app.core.errors import PadicStarkError
from src.app.schemas.phi import PhiRequest, PhiResponse
from src.app.services.phi_service import process_phi

router = APIRouter(tags=["phi"])


@router.post("/phi", response_model=PhiResponse)
def phi(request: PhiRequest):
    """Phi_{f,T_p,p}(1) mod p^N, optionally checked against a bundled example"""
    try:
        return process_phi(request)
    except PadicStarkError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error computing Phi: {str(e)}")
