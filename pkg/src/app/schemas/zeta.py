from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from src.app.schemas.fan import ClassRequest


class ZetaRequest(ClassRequest):
    """Twisted zeta value of a ray class."""

    mode: Literal["exact", "padic"] = Field(
        default="padic", description="Exact value at m <= 0 or p-adic value at s = 1"
    )
    m: int = Field(default=0, le=0, description="Non-positive integer for exact mode")
    tp_mode: bool = Field(default=False, description="Remove the Euler factors at p (exact mode)")
    digits: Optional[int] = Field(default=None, ge=1, description="Base-p digits N (p-adic mode)")
    root_choice: int = Field(default=0, ge=0, description="Which square root of d_k mod p")
    zeta_choice: int = Field(default=0, ge=0, description="Which primitive f-th root of unity mod p")


class ZetaResponse(BaseModel):
    """Zeta response model."""

    mode: str = Field(description="exact or padic")
    cones: int = Field(description="Number of cones summed")
    rational_part: Optional[List[str]] = Field(
        default=None, description="Exact value in the power basis of Q(mu_f)"
    )
    sqrt_part_vanishes: Optional[bool] = Field(
        default=None, description="Whether the sqrt(d_k)-component is zero"
    )
    value: Optional[int] = Field(default=None, description="p-adic value as an integer mod p^N")
    formatted: Optional[str] = Field(default=None, description="p-adic value as base-p digits")
    p: Optional[int] = Field(default=None, description="The prime p")
    digits: Optional[int] = Field(default=None, description="The number of digits N")
