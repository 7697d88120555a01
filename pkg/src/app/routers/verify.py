from fastapi import APIRouter, HTTPException

from src.app.core.errors import PadicStarkError
from src.app.schemas.verify import VerifyRequest, VerifyResponse
from src.app.services.verify_service import process_verify

router = APIRouter(tags=["verify"])


@router.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest):
    """Solve for A and check the lattice statements"""
    try:
        return process_verify(request)
    except PadicStarkError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error during verification: {str(e)}")
