from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src.app.schemas.bundle import IdealField


class PhiRequest(BaseModel):
    """Phi request model: explicit data or a bundled example."""

    example: Optional[int] = Field(default=None, description="Bundled example id")
    d: Optional[int] = Field(default=None, description="Field discriminant")
    f: Optional[IdealField] = Field(default=None, description="Modulus literal")
    p: int = Field(description="Split prime p")
    digits: Optional[int] = Field(
        default=None, ge=1, description="Base-p digits N; the bundle's count when absent"
    )
    root_choice: int = Field(default=0, ge=0, description="Which square root of d_k mod p")
    zeta_choice: int = Field(default=0, ge=0, description="Which primitive f-th root of unity mod p")
    check: bool = Field(
        default=False, description="Compare against the bundle over all embedding choices"
    )
    workers: Optional[int] = Field(default=None, ge=1, description="Worker processes")


class SymmetryInfo(BaseModel):
    checked: bool = Field(description="Whether conjugation acts by inversion on G")
    symmetric: bool = Field(description="coefficient(g) == coefficient(g^-1) for all g")
    max_discrepancy: int = Field(description="Largest discrepancy mod p^N")
    mismatches: List[str] = Field(default_factory=list, description="Elements breaking symmetry")


class MatchInfo(BaseModel):
    matched: bool = Field(description="Whether some embedding choice reproduces the digits")
    root_choice: Optional[int] = Field(default=None, description="Matching root choice")
    zeta_choice: Optional[int] = Field(default=None, description="Matching zeta choice")
    automorphism: Optional[List[int]] = Field(
        default=None, description="Matching automorphism of G as an index permutation"
    )


class PhiResponse(BaseModel):
    """Phi_{f,T_p,p}(1) mod p^N."""

    d: int = Field(description="Field discriminant")
    f: str = Field(description="Modulus")
    p: int = Field(description="The prime p")
    digits: int = Field(description="The number of digits N")
    M: int = Field(description="Series degree used")
    group: List[int] = Field(description="Invariant factors of Cl_f(k)")
    elements: List[str] = Field(description="Group elements in coefficient order")
    coefficients: List[int] = Field(description="Coefficients as integers mod p^N")
    formatted: List[str] = Field(description="Coefficients as base-p digit strings")
    sigma_sum: str = Field(description="The value written as a sum of sigma powers")
    kernel_size: int = Field(description="|ker(Cl_{f+} -> Cl_f)|")
    euler_factor: str = Field(description="(1 - p^-1 sigma_P1)(1 - p^-1 sigma_P2)")
    sqrt_unit: int = Field(description="4 / j(sqrt d_k) mod p^N")
    cone_counts: Dict[str, int] = Field(description="Cones per class")
    symmetry: SymmetryInfo = Field(description="Galois symmetry report")
    match: Optional[MatchInfo] = Field(default=None, description="Comparison with published digits")
