from typing import List

from pydantic import BaseModel, Field


class CnResponse(BaseModel):
    p: int = Field(description="The prime p")
    values: List[int] = Field(description="c_1, ..., c_n")


class PlanResponse(BaseModel):
    """Precision plan for N base-p digits."""

    p: int = Field(description="The prime p")
    N: int = Field(description="Target digits")
    M: int = Field(description="Series degree")
    W: int = Field(description="Working modulus exponent")
    W_guard: int = Field(description="Guard exponent W + ord_p(M!)")
