from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src.app.schemas.bundle import VerificationData


class VerifyRequest(BaseModel):
    """Verify request model: a bundled example or explicit data."""

    example: Optional[int] = Field(default=None, description="Bundled example id")
    d: Optional[int] = Field(default=None, description="Field discriminant")
    f: Optional[str] = Field(default=None, description="Modulus literal")
    group: Optional[List[int]] = Field(default=None, description="Invariant factors of G")
    data: Optional[VerificationData] = Field(default=None, description="Explicit verification data")


class VerifyResponse(BaseModel):
    """Verification report."""

    A: Optional[str] = Field(default=None, description="Reconstructed A")
    residual: Optional[str] = Field(default=None, description="Reconstruction residual")
    bound: Optional[int] = Field(default=None, description="Denominator bound 2 b g^e")
    model: Optional[str] = Field(default=None, description="Lattice model: wedge or group_ring")
    upper_bound: bool = Field(default=False, description="d_f is relative to ZG gamma only")
    gamma_index: Optional[str] = Field(default=None, description="Computed index of ZG gamma")
    d_f: Optional[int] = Field(default=None, description="Least d with d eta_f in the lattice")
    d_f_sigma: List[int] = Field(default_factory=list, description="d_{f,σ_j-1} per generator")
    index_eta: Optional[str] = Field(default=None, description="Index of ZG eta_f in d_f^-1 lattice")
    prime_power: Optional[bool] = Field(default=None, description="Whether f is a prime power")
    clauses: Dict[str, str] = Field(default_factory=dict, description="pass / fail / inconclusive")
    expected: Dict[str, bool] = Field(default_factory=dict, description="Agreement with published values")
    errors: Dict[str, Dict] = Field(default_factory=dict, description="Failed stages")
    passed: bool = Field(description="No failed clause, comparison or stage")
