import re
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.app.arith.groupring import FiniteAbelianGroup, GroupRingElem
from src.app.arith.quadfield import QuadField, QuadIdeal
from src.app.core.errors import BadF, InconsistentGroups, ZeroIdeal

_FACTOR = re.compile(r"^(?:(\d+)O?|P(\d+)('?)|\[(-?\d+),(-?\d+)\])(?:\^(\d+))?$")

IdealLiteral = Union[str, int, Mapping[str, Any]]


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse an exact rational such as "3", "-1/2" or "0.25".

    Raises:
        ValueError: If the text is not a rational literal.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational literal: {text!r}") from e


def ideal_from_hnf(
    field: QuadField, hnf: Sequence[Sequence[int]], scale: Union[str, Fraction, int] = 1
) -> QuadIdeal:
    """
    The ideal scale * (Z a + Z (b + c omega)) for hnf = [[a, b], [0, c]].

    Raises:
        BadF: If the Z-module is not an O-ideal.
    """
    (a, b), (zero, c) = hnf
    if zero != 0 or a == 0 or c == 0:
        raise BadF(f"malformed ideal HNF {hnf}")
    s = parse_fraction(scale)
    ideal = QuadIdeal.from_generators(field, [field.elem(a * s), field.elem(b * s, c * s)])
    if ideal.norm != abs(a * c) * s * s:
        raise BadF(f"the module with HNF {hnf} is not an ideal of Q(sqrt({field.d}))")
    return ideal


def _factor(field: QuadField, token: str) -> QuadIdeal:
    m = _FACTOR.match(token)
    if not m:
        raise BadF(f"cannot parse ideal factor {token!r}")
    rational, ell, prime, a, b, power = m.groups()
    if rational is not None:
        if int(rational) == 0:
            raise ZeroIdeal("the zero ideal is not allowed")
        ideal = QuadIdeal.principal(field, int(rational))
    elif ell is not None:
        primes = field.prime_ideals_above(int(ell))
        if prime and len(primes) < 2:
            raise BadF(f"{ell} does not split in Q(sqrt({field.d}))")
        ideal = primes[1] if prime else primes[0]
    else:
        ideal = ideal_from_hnf(field, [[int(a), int(b)], [0, 1]])
    return ideal ** int(power) if power else ideal


def parse_ideal(field: QuadField, literal: IdealLiteral) -> QuadIdeal:
    """
    Parse an ideal literal.

    Strings are products of factors joined by "*": an integer n (or "nO") for
    nO, "P5" / "P5'" for the first / second prime above 5, "[a,b]" for the
    HNF Z a + Z (b + omega), each optionally raised to "^k". Mappings follow
    the bundle form {"hnf": [[a, b], [0, c]], "scale": "p/q"}.
    """
    if isinstance(literal, int):
        return _factor(field, str(literal))
    if isinstance(literal, Mapping):
        if "hnf" not in literal:
            raise BadF("ideal mapping needs an 'hnf' entry")
        return ideal_from_hnf(field, literal["hnf"], literal.get("scale", 1))
    text = str(literal).replace(" ", "")
    if not text:
        raise BadF("empty ideal literal")
    result: Optional[QuadIdeal] = None
    for token in text.split("*"):
        factor = _factor(field, token)
        result = factor if result is None else result * factor
    return result


def ideal_to_literal(ideal: QuadIdeal) -> Dict[str, Any]:
    """Bundle form of an ideal; parse_ideal(field, ideal_to_literal(I)) == I."""
    s = ideal.scale
    return {"hnf": [[ideal.a, ideal.b], [0, 1]], "scale": str(s)}


def expand_terms(group: FiniteAbelianGroup, terms: Mapping[str, Any]) -> Dict[Tuple[int, ...], Any]:
    """
    {"1": c0, "σ+σ²": c1} -> {identity: c0, sigma: c1, sigma^2: c1}.

    Raises:
        InconsistentGroups: If an element is named twice.
    """
    out: Dict[Tuple[int, ...], Any] = {}
    for key, value in terms.items():
        for name in key.split("+"):
            e = group.parse_element(name)
            if e in out:
                raise InconsistentGroups(f"element {name!r} appears twice")
            out[e] = value
    return out


def parse_group_ring(group: FiniteAbelianGroup, terms: Mapping[str, Any]) -> GroupRingElem:
    """A rational group ring element from {"1": "1/2", "σ+σ²": "-1/2", ...}."""
    values = {e: parse_fraction(v) for e, v in expand_terms(group, terms).items()}
    return GroupRingElem.from_dict(group, values)


def parse_vectors(rows: Sequence[Sequence[Any]]) -> List[List[Fraction]]:
    return [[parse_fraction(x) for x in row] for row in rows]
