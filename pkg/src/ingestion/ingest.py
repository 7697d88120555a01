import json
import logging
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from mpmath import mp, mpf
from pydantic import ValidationError

from src.app.arith.groupring import REAL, FiniteAbelianGroup, GroupRingElem
from src.app.arith.quadfield import QuadField, QuadIdeal
from src.app.arith.units import UnitBasis
from src.app.arith.verify import VerificationInput
from src.app.core.config import get_settings
from src.app.core.errors import BundleError
from src.app.schemas.bundle import (
    ExampleBundle,
    ExampleSummary,
    IdealField,
    ThetaPolynomial,
    UnitFieldData,
    VerificationData,
)
from src.app.utils.literal_utils import expand_terms, parse_group_ring, parse_ideal

logger = logging.getLogger(__name__)


def load_bundle(path: str) -> ExampleBundle:
    """
    Load and validate one example bundle.

    Args:
        path: Path to the JSON file.

    Returns:
        ExampleBundle: The validated bundle.

    Raises:
        BundleError: If the file is missing, not JSON, or fails validation.
    """
    file = Path(path)
    if not file.exists():
        raise BundleError(f"bundle not found: {path}")
    try:
        with open(file, encoding="utf-8") as f:
            raw = json.load(f)
        return ExampleBundle.model_validate(raw)
    except json.JSONDecodeError as e:
        raise BundleError(f"{file.name} is not valid JSON: {e}") from e
    except ValidationError as e:
        raise BundleError(f"{file.name} failed validation: {e}") from e


def ingest_directory(directory: Optional[str] = None) -> List[Dict[str, Any]]:
    """
    Validate every bundle in the examples directory.

    Returns:
        List[Dict[str, Any]]: One status record per file.
    """
    root = Path(directory or get_settings().examples_directory)
    if not root.exists():
        raise BundleError(f"examples directory not found: {root}")
    results = []
    for file in sorted(root.glob("*.json")):
        try:
            bundle = load_bundle(str(file))
            results.append({"status": "success", "path": str(file), "id": bundle.id})
        except BundleError as e:
            logger.warning("skipping %s: %s", file.name, e)
            results.append({"status": "error", "path": str(file), "error": str(e)})
    return results


@lru_cache()
def load_examples(directory: Optional[str] = None) -> Dict[int, ExampleBundle]:
    root = Path(directory or get_settings().examples_directory)
    if not root.exists():
        raise BundleError(f"examples directory not found: {root}")
    bundles: Dict[int, ExampleBundle] = {}
    for file in sorted(root.glob("*.json")):
        bundle = load_bundle(str(file))
        if bundle.id in bundles:
            raise BundleError(f"duplicate example id {bundle.id} in {file.name}")
        bundles[bundle.id] = bundle
    logger.debug("loaded %d example bundles from %s", len(bundles), root)
    return bundles


def get_example(example_id: int, directory: Optional[str] = None) -> ExampleBundle:
    bundles = load_examples(directory)
    if example_id not in bundles:
        raise BundleError(f"no example with id {example_id}")
    return bundles[example_id]


def summarize(bundle: ExampleBundle) -> ExampleSummary:
    return ExampleSummary(
        id=bundle.id,
        d_k=bundle.d_k,
        f=bundle.f_name or str(bundle.f),
        group=bundle.group,
        primes=[entry.p for entry in bundle.primes],
        has_verification=bundle.verification is not None,
    )


# conversion to domain objects


def to_field_and_modulus(bundle: ExampleBundle) -> Tuple[QuadField, QuadIdeal]:
    field = QuadField(bundle.d_k)
    return field, parse_ideal(field, bundle.f)


def to_injection(bundle: ExampleBundle, field: QuadField) -> Optional[Dict[str, Any]]:
    if bundle.ray_class is None:
        return None
    return {
        "orders": bundle.ray_class.orders,
        "generators": [parse_ideal(field, g) for g in bundle.ray_class.generators],
    }


def real_group_ring(group: FiniteAbelianGroup, terms: Dict[str, str], digits: int) -> GroupRingElem:
    """Decimal strings keyed by element names as a real group ring element."""
    values = expand_terms(group, terms)
    if len(values) != group.order:
        raise BundleError(f"expected {group.order} coefficients, got {len(values)}")
    with mp.workdps(digits + get_settings().reconstruction_guard_digits):
        coeffs = tuple(mpf(values[e]) for e in group.elements)
    return GroupRingElem(group, coeffs, REAL)


def truncate_verification(data: VerificationData, digits: int) -> VerificationData:
    """The same data with Rgamma and Phi0 cut to the given number of decimal places."""
    if digits > data.digits:
        raise BundleError(f"cannot extend {data.digits} digits to {digits}")

    def cut(text: str) -> str:
        whole, _, frac = text.partition(".")
        return f"{whole}.{frac[:digits]}" if frac else whole

    return data.model_copy(
        update={
            "digits": digits,
            "Rgamma": {k: cut(v) for k, v in data.Rgamma.items()},
            "Phi0": {k: cut(v) for k, v in data.Phi0.items()},
        }
    )


def to_unit_basis(data: UnitFieldData) -> UnitBasis:
    def theta(poly: ThetaPolynomial) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, poly.den) for c in poly.coeffs)

    return UnitBasis(
        polynomial=tuple(data.polynomial),
        images=tuple(theta(s) for s in data.sigma),
        units=tuple(theta(u) for u in data.units),
    )


def to_verification_input(bundle: ExampleBundle) -> VerificationInput:
    """
    Raises:
        BundleError: If the bundle has no verification data.
    """
    if bundle.verification is None:
        raise BundleError(f"example {bundle.id} carries no verification data")
    return build_verification_input(bundle.d_k, bundle.f, bundle.group, bundle.verification)


def build_verification_input(
    d_k: int, f_literal: IdealField, orders: List[int], data: VerificationData
) -> VerificationInput:
    field = QuadField(d_k)
    f = parse_ideal(field, f_literal)
    group = FiniteAbelianGroup(tuple(orders))
    expected = data.expected
    return VerificationInput(
        number_field=field,
        f=f,
        group=group,
        Rgamma=real_group_ring(group, data.Rgamma, data.digits),
        Phi0=real_group_ring(group, data.Phi0, data.digits),
        digits=data.digits,
        e_gt2=parse_group_ring(group, data.e_gt2),
        decomposition_groups=(
            [[group.parse_element(name) for name in gens] for gens in data.decomposition_groups]
            if data.decomposition_groups is not None
            else None
        ),
        gamma_index=data.gamma_index,
        isotypic_vectors=(
            {group.reduce(block.character): block.vectors for block in data.isotypic}
            if data.isotypic
            else None
        ),
        gamma_wedges=[tuple(w) for w in data.gamma_wedges] if data.gamma_wedges else None,
        unit_basis=to_unit_basis(data.unit_field) if data.unit_field is not None else None,
        expected_A=parse_group_ring(group, expected.A) if expected.A is not None else None,
        expected_d_f=expected.d_f,
        expected_d_f_sigma=expected.d_f_sigma,
        expected_index=expected.index,
        expected_prime_power=expected.prime_power,
    )
