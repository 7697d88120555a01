"""
Finite abelian groups given by invariant factors, and their group rings.

Elements are exponent tuples listed in lexicographic order; generators are
named sigma (cyclic case) or sigma1, sigma2, ...
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpf

from src.app.core.errors import InconsistentGroups

Element = Tuple[int, ...]

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_FROM_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")
_TOKEN = re.compile(r"(?:σ|s)(\d*)(?:\^(\d+)|([⁰¹²³⁴⁵⁶⁷⁸⁹]+))?")

RATIONAL = "rational"
REAL = "real"
PADIC = "padic"


@dataclass(frozen=True)
class FiniteAbelianGroup:
    orders: Tuple[int, ...]

    def __post_init__(self):
        if any(n < 1 for n in self.orders):
            raise InconsistentGroups(f"invalid invariant factors {self.orders}")

    @property
    def order(self) -> int:
        result = 1
        for n in self.orders:
            result *= n
        return result

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    @cached_property
    def elements(self) -> List[Element]:
        return [tuple(e) for e in product(*(range(n) for n in self.orders))]

    @cached_property
    def _index(self) -> Dict[Element, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def index(self, e: Sequence[int]) -> int:
        return self._index[self.reduce(e)]

    @property
    def identity(self) -> Element:
        return tuple(0 for _ in self.orders)

    def reduce(self, e: Sequence[int]) -> Element:
        return tuple(int(x) % n for x, n in zip(e, self.orders))

    def add(self, e1: Sequence[int], e2: Sequence[int]) -> Element:
        return self.reduce([x + y for x, y in zip(e1, e2)])

    def neg(self, e: Sequence[int]) -> Element:
        return self.reduce([-x for x in e])

    def scale(self, e: Sequence[int], k: int) -> Element:
        return self.reduce([k * x for x in e])

    def element_order(self, e: Sequence[int]) -> int:
        result = 1
        for x, n in zip(self.reduce(e), self.orders):
            result = lcm(result, n // gcd(x, n))
        return result

    def generator_names(self) -> List[str]:
        if len(self.orders) == 1:
            return ["σ"]
        return [f"σ{i + 1}" for i in range(len(self.orders))]

    def element_name(self, e: Sequence[int]) -> str:
        parts = []
        for name, x in zip(self.generator_names(), self.reduce(e)):
            if x == 1:
                parts.append(name)
            elif x > 1:
                parts.append(name + str(x).translate(_SUPERSCRIPTS))
        return "".join(parts) or "1"

    def parse_element(self, name: str) -> Element:
        """Inverse of element_name; also accepts ASCII forms such as s1^2s2."""
        text = name.replace(" ", "").replace("*", "")
        if text in ("", "1"):
            return self.identity
        exps = [0] * len(self.orders)
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise InconsistentGroups(f"cannot parse group element {name!r}")
            if m.group(1):
                idx = int(m.group(1)) - 1
            elif len(self.orders) == 1:
                idx = 0
            else:
                raise InconsistentGroups(f"generator index missing in {name!r}")
            if not 0 <= idx < len(self.orders):
                raise InconsistentGroups(f"no generator {idx + 1} in {name!r}")
            if m.group(2):
                power = int(m.group(2))
            elif m.group(3):
                power = int(m.group(3).translate(_FROM_SUPERSCRIPTS))
            else:
                power = 1
            exps[idx] += power
            pos = m.end()
        return self.reduce(exps)

    def automorphisms(self) -> List[List[int]]:
        """Every automorphism as a permutation of element indices."""
        gens = [
            tuple(1 if j == i else 0 for j in range(len(self.orders)))
            for i in range(len(self.orders))
        ]
        options = [
            [x for x in self.elements if self.element_order(x) == self.element_order(g)]
            for g in gens
        ]
        autos = []
        for images in product(*options):
            if any(self.scale(img, n) != self.identity for img, n in zip(images, self.orders)):
                continue
            perm = []
            for e in self.elements:
                target = self.identity
                for x, img in zip(e, images):
                    target = self.add(target, self.scale(img, x))
                perm.append(self.index(target))
            if len(set(perm)) == self.order:
                autos.append(perm)
        return autos


@dataclass(frozen=True)
class GroupRingElem:
    """
    Sum of coeffs[i] * elements[i] over a finite abelian group.

    `kind` is one of rational, real (mpmath) or padic (integers mod `modulus`).
    """

    group: FiniteAbelianGroup
    coeffs: Tuple
    kind: str = RATIONAL
    modulus: Optional[int] = None

    @classmethod
    def zero(cls, group: FiniteAbelianGroup, kind: str = RATIONAL, modulus: Optional[int] = None):
        z = Fraction(0) if kind == RATIONAL else (mpf(0) if kind == REAL else 0)
        return cls(group, tuple(z for _ in group.elements), kind, modulus)

    @classmethod
    def basis(cls, group: FiniteAbelianGroup, e: Sequence[int], kind: str = RATIONAL, modulus=None):
        one = Fraction(1) if kind == RATIONAL else (mpf(1) if kind == REAL else 1)
        zero = cls.zero(group, kind, modulus)
        coeffs = list(zero.coeffs)
        coeffs[group.index(e)] = one
        return cls(group, tuple(coeffs), kind, modulus)

    @classmethod
    def from_dict(cls, group, values: Dict[Element, object], kind: str = RATIONAL, modulus=None):
        coeffs = list(cls.zero(group, kind, modulus).coeffs)
        for e, c in values.items():
            coeffs[group.index(e)] += c
        return cls(group, tuple(coeffs), kind, modulus)._normalized()

    def _normalized(self) -> "GroupRingElem":
        if self.kind == PADIC:
            return GroupRingElem(
                self.group, tuple(int(c) % self.modulus for c in self.coeffs), self.kind, self.modulus
            )
        return self

    def _check(self, other: "GroupRingElem") -> None:
        if other.group != self.group or other.kind != self.kind or other.modulus != self.modulus:
            raise InconsistentGroups("group ring elements live in different rings")

    def coefficient(self, e: Sequence[int]):
        return self.coeffs[self.group.index(e)]

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        self._check(other)
        return GroupRingElem(
            self.group, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)), self.kind, self.modulus
        )._normalized()

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return self + other.scalar(-1)

    def scalar(self, c) -> "GroupRingElem":
        return GroupRingElem(
            self.group, tuple(c * x for x in self.coeffs), self.kind, self.modulus
        )._normalized()

    def __mul__(self, other):
        if not isinstance(other, GroupRingElem):
            return self.scalar(other)
        self._check(other)
        g = self.group
        out = list(GroupRingElem.zero(g, self.kind, self.modulus).coeffs)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(other.coeffs):
                if y:
                    out[g.index(g.add(g.elements[i], g.elements[j]))] += x * y
        return GroupRingElem(g, tuple(out), self.kind, self.modulus)._normalized()

    def involution(self) -> "GroupRingElem":
        """The ring map sending each g to g^-1."""
        g = self.group
        out = [None] * g.order
        for i, e in enumerate(g.elements):
            out[g.index(g.neg(e))] = self.coeffs[i]
        return GroupRingElem(g, tuple(out), self.kind, self.modulus)

    def permuted(self, perm: Sequence[int]) -> "GroupRingElem":
        """Apply a group automorphism given as an index permutation."""
        out = [None] * self.group.order
        for i, target in enumerate(perm):
            out[target] = self.coeffs[i]
        return GroupRingElem(self.group, tuple(out), self.kind, self.modulus)

    def augmentation(self):
        return sum(self.coeffs, self.zero(self.group, self.kind, self.modulus).coeffs[0])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def grouped(self, key: Callable = None) -> List[Tuple[object, List[Element]]]:
        """Group elements sharing a coefficient, in order of first appearance."""
        key = key or (lambda c: c)
        groups: Dict = {}
        order: List = []
        for e, c in zip(self.group.elements, self.coeffs):
            k = key(c)
            if k not in groups:
                groups[k] = (c, [])
                order.append(k)
            groups[k][1].append(e)
        return [groups[k] for k in order]

    def sigma_sum(self, formatter: Callable = str, key: Callable = None) -> str:
        """Render as `c0 + c1(σ+σ²)` with equal coefficients combined."""
        terms = []
        for c, elems in self.grouped(key):
            names = "+".join(self.group.element_name(e) for e in elems)
            if elems == [self.group.identity]:
                terms.append(formatter(c))
            elif len(elems) == 1:
                terms.append(f"{formatter(c)}{names}")
            else:
                terms.append(f"{formatter(c)}({names})")
        return " + ".join(terms)

    def rational_str(self) -> str:
        """Render a rational element as (1/D)(n0 + n1σ + ...)."""
        den = 1
        for c in self.coeffs:
            den = lcm(den, Fraction(c).denominator)
        parts = []
        for e, c in zip(self.group.elements, self.coeffs):
            n = int(c * den)
            if n == 0:
                continue
            name = self.group.element_name(e)
            mag = abs(n)
            body = str(mag) if name == "1" else (name if mag == 1 else f"{mag}{name}")
            sign = "-" if n < 0 else "+"
            parts.append(body if not parts and sign == "+" else (f"-{body}" if not parts else f" {sign} {body}"))
        inner = "".join(parts) or "0"
        return inner if den == 1 else f"(1/{den})({inner})"

    def to_real(self, digits: int = 30) -> "GroupRingElem":
        with mp.workdps(digits):
            coeffs = tuple(mpf(Fraction(c).numerator) / Fraction(c).denominator for c in self.coeffs)
        return GroupRingElem(self.group, coeffs, REAL, None)
