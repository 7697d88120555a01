from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from src.app.arith.phi import parse_digits

IdealField = Union[str, int, Dict[str, Any]]


class RayClassInjection(BaseModel):
    """Declared ray class group structure with one generating ideal per cyclic factor."""

    orders: List[int] = Field(description="Invariant factors of the declared group")
    generators: List[IdealField] = Field(description="Ideal literals, one per factor")


class PrimeEntry(BaseModel):
    """One row of the published p-adic digit tables."""

    p: int = Field(description="Split prime p")
    expected: Dict[str, str] = Field(
        description="Digit strings keyed by group elements, e.g. {'1': ..., 'σ+σ²': ...}"
    )
    digits: Optional[int] = Field(
        default=None, description="Number of base-p digits; derived from the strings when absent"
    )

    @model_validator(mode="after")
    def check_digit_strings(self) -> "PrimeEntry":
        lengths = set()
        for key, text in self.expected.items():
            body = text if "_" in text else f"{text}_{self.p}"
            _, base, n = parse_digits(body)
            if base != self.p:
                raise ValueError(f"digit string for {key} is in base {base}, not {self.p}")
            lengths.add(n)
            self.expected[key] = body
        if len(lengths) > 1:
            raise ValueError(f"digit strings for p = {self.p} have different lengths {sorted(lengths)}")
        n = lengths.pop() if lengths else None
        if self.digits is not None and n is not None and self.digits != n:
            raise ValueError(f"declared {self.digits} digits but the strings carry {n}")
        self.digits = self.digits or n
        return self


class IsotypicBlock(BaseModel):
    """The vectors v_{i,j} spanning one isotypic component."""

    character: List[int] = Field(description="A character of the rational class, as an exponent vector")
    vectors: List[List[int]] = Field(description="Unit-coordinate vectors v_{i,1}, v_{i,2}, ...")


class ThetaPolynomial(BaseModel):
    """(1/den) * sum coeffs[k] theta^(n-k), leading coefficient first."""

    coeffs: List[int] = Field(description="Integer numerators, leading coefficient first")
    den: int = Field(default=1, ge=1, description="Common denominator")


class UnitFieldData(BaseModel):
    """The field K, the generators of G and a Z-basis of U_S / torsion, all through theta."""

    polynomial: List[int] = Field(description="Minimal polynomial of theta, leading coefficient first")
    sigma: List[ThetaPolynomial] = Field(description="sigma_t(theta) for each generator of G")
    units: List[ThetaPolynomial] = Field(description="The basis u_1, ..., u_r")


class ExpectedVerification(BaseModel):
    A: Optional[Dict[str, str]] = Field(default=None, description="Published A as rational literals")
    d_f: Optional[int] = Field(default=None, description="Published d_f")
    d_f_sigma: Optional[List[int]] = Field(
        default=None, description="Published d_{f,σ_j-1}, one per generator"
    )
    index: Optional[int] = Field(default=None, description="Published index of ZG eta_f")
    prime_power: Optional[bool] = Field(default=None, description="Published 'is f = q^l?' flag")


class VerificationData(BaseModel):
    """Numerical and structural data feeding the verification pipeline."""

    digits: int = Field(ge=5, description="Decimal digits carried by Rgamma and Phi0")
    Rgamma: Dict[str, str] = Field(description="4/sqrt(d_k) R(gamma) as decimal strings")
    Phi0: Dict[str, str] = Field(description="Phi_{f,empty}(1) as decimal strings")
    e_gt2: Dict[str, str] = Field(
        default_factory=dict, description="The integral idempotent multiple e~_{S,>2}; empty means 0"
    )
    decomposition_groups: Optional[List[List[str]]] = Field(
        default=None, description="Generators of G(q) for each q | f, as element names"
    )
    gamma_index: int = Field(default=1, ge=1, description="Index b of ZG gamma in the wedge lattice")
    isotypic: Optional[List[IsotypicBlock]] = Field(default=None, description="Isotypic unit data")
    gamma_wedges: Optional[List[Tuple[List[int], List[int]]]] = Field(
        default=None, description="gamma as a sum of wedges of unit-coordinate vectors"
    )
    unit_field: Optional[UnitFieldData] = Field(
        default=None, description="Data fixing the Galois action on the unit coordinates"
    )
    expected: ExpectedVerification = Field(default_factory=ExpectedVerification)


class ExampleBundle(BaseModel):
    """A published example: field, modulus, digit tables and verification data."""

    id: int = Field(ge=1, description="Example number")
    d_k: int = Field(description="Discriminant of the real quadratic field")
    f: IdealField = Field(description="The modulus as an ideal literal")
    f_name: str = Field(default="", description="Human-readable name of f")
    group: List[int] = Field(description="Invariant factors of Cl_f(k)")
    ray_class: Optional[RayClassInjection] = Field(default=None, description="Optional injection")
    primes: List[PrimeEntry] = Field(default_factory=list, description="Published p-adic values")
    verification: Optional[VerificationData] = Field(default=None, description="Verification data")

    @field_validator("group")
    @classmethod
    def check_group(cls, v: List[int]) -> List[int]:
        if not v or any(n < 1 for n in v):
            raise ValueError(f"invalid invariant factors {v}")
        return v

    def prime(self, p: int) -> PrimeEntry:
        for entry in self.primes:
            if entry.p == p:
                return entry
        raise KeyError(p)


class ExampleSummary(BaseModel):
    id: int = Field(description="Example number")
    d_k: int = Field(description="Field discriminant")
    f: str = Field(description="Human-readable modulus")
    group: List[int] = Field(description="Invariant factors of Cl_f(k)")
    primes: List[int] = Field(description="Primes with published digits")
    has_verification: bool = Field(description="Whether verification data is bundled")
