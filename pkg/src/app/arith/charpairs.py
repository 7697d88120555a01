"""
Pairs (xi, I): an additive character xi(x) = exp(2 pi i Tr(x)) restricted to a
fractional ideal I = a * f^-1 * D^-1. Character values are exponents t in
Z/f_int, standing for zeta_f^t.
"""

from dataclasses import dataclass
from typing import Sequence

from src.app.arith.quadfield import QuadElem, QuadField, QuadIdeal
from src.app.arith.rayclass import RayClassGroup
from src.app.core.errors import NotCoprime, NotInIdeal, TrivialModulus


@dataclass(frozen=True)
class CharPair:
    field: QuadField
    f: QuadIdeal
    ideal: QuadIdeal
    multiplier: QuadIdeal
    f_int: int

    def evaluate(self, x: QuadElem) -> int:
        if not self.ideal.contains(x):
            raise NotInIdeal(f"{x} is not in {self.ideal}")
        t = self.f_int * x.trace
        return int(t) % self.f_int

    def kernel_test(self, x: QuadElem) -> bool:
        return self.evaluate(x) == 0

    def annihilator_contains(self, c: QuadElem) -> bool:
        """True iff xi vanishes on c*I."""
        return all(self.kernel_test(c * g) for g in self.ideal.z_basis())

    @property
    def norm(self):
        return self.ideal.norm


def base_pair(field: QuadField, f: QuadIdeal) -> CharPair:
    """The pair (xi_f, f^-1 D^-1)."""
    if f.is_unit_ideal:
        raise TrivialModulus("the modulus f = O carries no character")
    ideal = (f * field.different()).inverse()
    return CharPair(
        field=field,
        f=f,
        ideal=ideal,
        multiplier=field.unit_ideal(),
        f_int=int(f.min_integer),
    )


def act(pair: CharPair, label: Sequence[int], group: RayClassGroup, p: int = 1) -> CharPair:
    """The pair (xi|aI, aI) for a prime representative a of the class, coprime to f and p."""
    a = group.representative(label, coprime_to=p)
    if not group.is_coprime(a):
        raise NotCoprime(f"{a} is not coprime to the modulus")
    return CharPair(
        field=pair.field,
        f=pair.f,
        ideal=pair.ideal * a,
        multiplier=pair.multiplier * a,
        f_int=pair.f_int,
    )


def evaluate(pair: CharPair, x: QuadElem) -> int:
    return pair.evaluate(x)


def kernel_test(pair: CharPair, x: QuadElem) -> bool:
    return pair.kernel_test(x)
