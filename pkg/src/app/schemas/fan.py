from typing import List, Optional

from pydantic import BaseModel, Field

from src.app.schemas.bundle import IdealField


class ClassRequest(BaseModel):
    """A field, a modulus and a ray class of it."""

    d: int = Field(description="Discriminant of the real quadratic field")
    f: IdealField = Field(description="The modulus as an ideal literal, e.g. '2', 'P5', 'P2*P2\\''")
    label: Optional[List[int]] = Field(
        default=None, description="Ray class label in Cl_f(k); the identity class when absent"
    )
    p: Optional[int] = Field(
        default=None, description="Prime the class representative must avoid"
    )


class FanRequest(ClassRequest):
    """Fan request model."""


class ConeInfo(BaseModel):
    tau1: str = Field(description="First generator in the basis (1, omega)")
    tau2: str = Field(description="Second generator in the basis (1, omega)")
    points: int = Field(description="Number of ideal points in the half-open parallelogram")


class FanResponse(BaseModel):
    """Shintani fan of the pair attached to a ray class."""

    ideal: str = Field(description="The ideal I of the pair")
    epsilon: str = Field(description="Totally positive unit generating E_{f+}")
    rho: List[str] = Field(description="Cone generators rho_0, ..., rho_n")
    partial_quotients: List[int] = Field(description="The b_n of the continued fraction")
    cones: List[ConeInfo] = Field(description="Cones C(rho_{t-1}, rho_t)")
    skipped: List[int] = Field(default_factory=list, description="Indices of rho in ker xi")
    point_count: int = Field(description="Total number of points over all cones")
