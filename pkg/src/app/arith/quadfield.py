"""
Exact arithmetic in a real quadratic field k = Q(sqrt(d)).

Elements are a + b*omega with omega = (d + sqrt(d))/2, so {1, omega} is the
integral basis of the maximal order. Ideals are held as scale * [a, b + omega]
with 0 <= b < a and a | N(b + omega); this canonical form makes equality a
field comparison.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from heapq import heappop, heappush
from math import gcd, isqrt, lcm
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from mpmath import mp, workdps
from sympy import factorint, isprime, n_order, nextprime, sqrt_mod

from src.app.arith.lattice import hnf_rows
from src.app.core.errors import (
    BadF,
    HypothesisViolation,
    InvalidDiscriminant,
    NegativeValuation,
    NonSplitPrime,
    ZeroIdeal,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_sqrt(A: Fraction, B: Fraction, d: int) -> int:
    """Sign of A + B*sqrt(d) for non-square d."""
    if B == 0:
        return _sign(A)
    if A == 0:
        return _sign(B)
    if (A > 0) == (B > 0):
        return _sign(A)
    diff = A * A - B * B * d
    return _sign(diff) if A > 0 else -_sign(diff)


def _floor_sqrt_form(A: Fraction, B: Fraction, d: int) -> int:
    """floor(A + B*sqrt(d)) computed with integers only."""
    R = lcm(A.denominator, B.denominator)
    P = int(A * R)
    Q = int(B * R)
    if Q >= 0:
        t = isqrt(Q * Q * d)
    else:
        t = -isqrt(Q * Q * d) - 1
    return (P + t) // R


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        d = self.d
        if d <= 1 or d % 4 not in (0, 1):
            raise InvalidDiscriminant(f"{d} is not a real quadratic discriminant")
        core = d if d % 4 == 1 else d // 4
        if d % 4 == 0 and core % 4 not in (2, 3):
            raise InvalidDiscriminant(f"{d} is not fundamental")
        if any(e > 1 for e in factorint(core).values()):
            raise InvalidDiscriminant(f"{d} is not fundamental")

    @property
    def n(self) -> int:
        """N(omega); omega^2 = d*omega - n."""
        return (self.d * self.d - self.d) // 4

    def elem(self, a: Rational = 0, b: Rational = 0) -> "QuadElem":
        return QuadElem(self, Fraction(a), Fraction(b))

    def from_sqrt(self, A: Rational, B: Rational) -> "QuadElem":
        """The element A + B*sqrt(d)."""
        A, B = Fraction(A), Fraction(B)
        return QuadElem(self, A - B * self.d, 2 * B)

    @property
    def one(self) -> "QuadElem":
        return self.elem(1)

    @property
    def omega(self) -> "QuadElem":
        return self.elem(0, 1)

    @property
    def sqrt_d(self) -> "QuadElem":
        return self.from_sqrt(0, 1)

    @cached_property
    def fundamental_unit(self) -> "QuadElem":
        eta = _cycle_unit(self)
        logger.debug("fundamental unit of Q(sqrt(%d)): %s", self.d, eta)
        return eta

    def unit_ideal(self) -> "QuadIdeal":
        return QuadIdeal(self, 1, 0, Fraction(1))

    def different(self) -> "QuadIdeal":
        return QuadIdeal.principal(self, self.sqrt_d)

    def prime_ideals_above(self, ell: int) -> List["QuadIdeal"]:
        """Prime ideals over the rational prime ell, sorted by (norm, b)."""
        if ell == 2:
            bs = [b for b in range(2) if (b * b + b * self.d + self.n) % 2 == 0]
        else:
            roots = sqrt_mod(self.d % ell, ell, all_roots=True) or []
            inv2 = pow(2, -1, ell)
            bs = sorted({((r - self.d) * inv2) % ell for r in roots})
        if not bs:
            return [QuadIdeal(self, 1, 0, Fraction(ell))]
        return [QuadIdeal(self, ell, b, Fraction(1)) for b in bs]

    def prime_ideals(self, bound: int) -> Iterator["QuadIdeal"]:
        """Prime ideals of norm <= bound, lazily, in increasing (norm, b) order."""
        pending: List[Tuple[int, int, "QuadIdeal"]] = []
        ell = 2
        while ell <= bound:
            while pending and pending[0][0] < ell:
                yield heappop(pending)[2]
            for P in self.prime_ideals_above(ell):
                if P.norm == ell:
                    yield P
                elif P.norm <= bound:
                    heappush(pending, (int(P.norm), ell, P))
            ell = nextprime(ell)
        while pending:
            yield heappop(pending)[2]


@dataclass(frozen=True)
class QuadElem:
    field: QuadField
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            return other
        return self.field.elem(other)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QuadElem):
            c = Fraction(other)
            return QuadElem(self.field, self.a * c, self.b * c)
        d, n = self.field.d, self.field.n
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return QuadElem(
            self.field,
            a1 * a2 - n * b1 * b2,
            a1 * b2 + a2 * b1 + d * b1 * b2,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        nm = self.norm
        if nm == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.conj() * (1 / nm)

    def __truediv__(self, other):
        if isinstance(other, QuadElem):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "QuadElem":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.field.one
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "QuadElem":
        return QuadElem(self.field, self.a + self.b * self.field.d, -self.b)

    @property
    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.d

    @property
    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b * self.field.d + self.b * self.b * self.field.n

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def sqrt_parts(self) -> Tuple[Fraction, Fraction]:
        """(A, B) with self = A + B*sqrt(d)."""
        return self.a + self.b * self.field.d / 2, self.b / 2

    def sign(self, which: int = 1) -> int:
        A, B = self.sqrt_parts()
        return _sign_sqrt(A, B if which == 1 else -B, self.field.d)

    @property
    def is_totally_positive(self) -> bool:
        return self.sign(1) > 0 and self.sign(2) > 0

    def floor(self, which: int = 1) -> int:
        A, B = self.sqrt_parts()
        return _floor_sqrt_form(A, B if which == 1 else -B, self.field.d)

    def ceil(self, which: int = 1) -> int:
        return -(-self).floor(which)

    def greater(self, other, which: int = 1) -> bool:
        """iota_which(self) > iota_which(other), decided exactly."""
        return (self - self._coerce(other)).sign(which) > 0

    def embed_real(self, digits: int = 15):
        A, B = self.sqrt_parts()
        with workdps(digits + 10):
            root = mp.sqrt(self.field.d)
            return (
                mp.mpf(A.numerator) / A.denominator + mp.mpf(B.numerator) / B.denominator * root,
                mp.mpf(A.numerator) / A.denominator - mp.mpf(B.numerator) / B.denominator * root,
            )

    def coords(self) -> Tuple[Fraction, Fraction]:
        return self.a, self.b

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*w"


@dataclass(frozen=True)
class QuadIdeal:
    """The Z-module scale * (Z*a + Z*(b + omega))."""

    field: QuadField
    a: int
    b: int
    scale: Fraction

    @classmethod
    def from_generators(cls, field: QuadField, gens: Sequence[QuadElem]) -> "QuadIdeal":
        """The O-module generated by `gens`."""
        zgens = []
        for g in gens:
            zgens.extend([g, g * field.omega])
        den = 1
        for g in zgens:
            den = lcm(den, g.a.denominator, g.b.denominator)
        rows = [[int(g.b * den), int(g.a * den)] for g in zgens]
        h = hnf_rows(rows)
        if len(h) < 2:
            raise ZeroIdeal("ideal generated by zero")
        (c, b1), (_, a1) = h
        return cls(field, a1 // c, (b1 // c) % (a1 // c), Fraction(c, den))

    @classmethod
    def principal(cls, field: QuadField, x: Union[QuadElem, Rational]) -> "QuadIdeal":
        if not isinstance(x, QuadElem):
            x = field.elem(x)
        if x.is_zero:
            raise ZeroIdeal("principal ideal of zero")
        return cls.from_generators(field, [x])

    def z_basis(self) -> Tuple[QuadElem, QuadElem]:
        f = self.field
        return f.elem(self.scale * self.a), f.elem(self.scale * self.b, self.scale)

    @property
    def norm(self) -> Fraction:
        return self.scale * self.scale * self.a

    @property
    def is_integral(self) -> bool:
        return self.scale.denominator == 1

    @property
    def is_unit_ideal(self) -> bool:
        return self.a == 1 and self.scale == 1

    @property
    def min_integer(self) -> Fraction:
        """The positive generator of I ∩ Q."""
        return self.scale * self.a

    @property
    def sort_key(self) -> Tuple:
        return (self.norm, self.scale, self.a, self.b)

    def __mul__(self, other):
        if isinstance(other, QuadIdeal):
            x1, y1 = self.z_basis()
            x2, y2 = other.z_basis()
            return QuadIdeal.from_generators(self.field, [x1 * x2, x1 * y2, y1 * x2, y1 * y2])
        if isinstance(other, QuadElem):
            if other.is_zero:
                raise ZeroIdeal("product with zero")
            return QuadIdeal.from_generators(self.field, [g * other for g in self.z_basis()])
        c = abs(Fraction(other))
        if c == 0:
            raise ZeroIdeal("product with zero")
        return QuadIdeal(self.field, self.a, self.b, self.scale * c)

    __rmul__ = __mul__

    def conj(self) -> "QuadIdeal":
        return QuadIdeal.from_generators(self.field, [g.conj() for g in self.z_basis()])

    def inverse(self) -> "QuadIdeal":
        return self.conj() * (1 / self.norm)

    def __truediv__(self, other):
        if isinstance(other, QuadIdeal):
            return self * other.inverse()
        if isinstance(other, QuadElem):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __pow__(self, k: int) -> "QuadIdeal":
        base = self if k >= 0 else self.inverse()
        result = self.field.unit_ideal()
        for _ in range(abs(k)):
            result = result * base
        return result

    def contains(self, x: Union[QuadElem, Rational]) -> bool:
        if not isinstance(x, QuadElem):
            x = self.field.elem(x)
        y = x / self.scale
        if y.b.denominator != 1:
            return False
        return ((y.a - y.b * self.b) / self.a).denominator == 1

    def contains_ideal(self, other: "QuadIdeal") -> bool:
        """other ⊆ self, i.e. self divides other."""
        return all(self.contains(g) for g in other.z_basis())

    def coprime_to(self, ell: int) -> bool:
        """True iff no prime above the rational integer ell occurs in I."""
        s = self.scale
        value = s.numerator * s.denominator * self.a
        return gcd(value, ell) == 1

    def element_index(self, x: QuadElem) -> Fraction:
        """Generalized index |I : (x)| = |N(x)| / N(I)."""
        return abs(x.norm) / self.norm

    def valuation(self, P: "QuadIdeal") -> int:
        """v_P(I) for a prime ideal P."""
        m = self.scale.denominator
        J = self * m
        ell = P.min_integer.numerator
        e_P = 2 if P * P == QuadIdeal.principal(self.field, ell) else 1
        v_m = 0
        while m % ell == 0:
            m //= ell
            v_m += 1
        P_inv = P.inverse()
        v = 0
        while P.contains_ideal(J):
            J = J * P_inv
            v += 1
        return v - e_P * v_m

    def __str__(self) -> str:
        return f"{self.scale}*[{self.a}, {self.b} + w]"


def factor_ideal(I: QuadIdeal) -> List[Tuple[QuadIdeal, int]]:
    """Prime factorization of a fractional ideal, sorted by (norm, a, b)."""
    s = I.scale
    support = set(factorint(s.numerator)) | set(factorint(s.denominator)) | set(factorint(I.a))
    support.discard(1)
    result = []
    for ell in sorted(support):
        for P in I.field.prime_ideals_above(ell):
            v = I.valuation(P)
            if v:
                result.append((P, v))
    result.sort(key=lambda pe: pe[0].sort_key)
    return result


def is_prime_power(I: QuadIdeal) -> bool:
    """True iff I = q^l for a single prime q and l >= 1."""
    factors = factor_ideal(I)
    return len(factors) == 1 and factors[0][1] > 0


def _rho(field: QuadField, a: int, B: int) -> Tuple[int, int, QuadElem]:
    """One reduction step on the state (a, B) of the ideal [a, (B + sqrt d)/2]."""
    d = field.d
    s = isqrt(d)
    C = (B * B - d) // (4 * a)
    c = abs(C)
    target = -B
    if c <= s:
        lo = s - 2 * c + 1
    else:
        lo = -c + 1
    B_next = lo + (target - lo) % (2 * c)
    mu = field.elem(Fraction(B + d, 2), -1) / a
    return c, B_next, mu


def _state(I: QuadIdeal) -> Tuple[int, int]:
    return I.a, 2 * I.b + I.field.d


def reduction_cycle(I: QuadIdeal) -> Tuple[List[Tuple[int, int]], List[QuadElem], int]:
    """
    Walk the reduction map from I until a state repeats.

    Returns the visited states, the multipliers mu_k (state k+1 = mu_k * state k)
    and the index where the periodic part starts.
    """
    field = I.field
    a, B = _state(I)
    states = [(a, B)]
    seen = {(a, B): 0}
    mus: List[QuadElem] = []
    while True:
        a, B, mu = _rho(field, a, B)
        mus.append(mu)
        if (a, B) in seen:
            return states, mus, seen[(a, B)]
        seen[(a, B)] = len(states)
        states.append((a, B))


def class_key(I: QuadIdeal) -> Tuple[int, int]:
    """An invariant of the (wide) ideal class: least reduced state of its cycle."""
    states, _, start = reduction_cycle(I)
    return min(states[start:])


def principal_generator(I: QuadIdeal) -> Optional[QuadElem]:
    """A generator of I, or None when I is not principal."""
    field = I.field
    if I.a == 1:
        return field.elem(I.scale)
    states, mus, _ = reduction_cycle(I)
    product = field.one
    for k, mu in enumerate(mus):
        product = product * mu
        if k + 1 < len(states) and states[k + 1][0] == 1:
            return field.elem(I.scale) / product
    return None


def _cycle_unit(field: QuadField) -> QuadElem:
    d = field.d
    s = isqrt(d)
    B0 = s if (s - d) % 2 == 0 else s - 1
    a, B = 1, B0
    eta = field.one
    while True:
        a, B, mu = _rho(field, a, B)
        eta = eta * mu
        if a == 1:
            break
    if eta.sign(1) < 0:
        eta = -eta
    if not eta.greater(1):
        eta = eta.inverse()
    return eta


def trace_norm(x: QuadElem) -> Tuple[Fraction, Fraction]:
    return x.trace, x.norm


def fundamental_unit(field: QuadField) -> QuadElem:
    return field.fundamental_unit


def embed_real(x: QuadElem, digits: int = 15):
    return x.embed_real(digits)


def ray_unit_generator(field: QuadField, f: QuadIdeal) -> QuadElem:
    """Generator of the totally positive units congruent to 1 mod f."""
    eps0 = field.fundamental_unit
    u = eps0
    n = 1
    while not (u.is_totally_positive and f.contains(u - 1)):
        u = u * eps0
        n += 1
    logger.debug("ray unit for %s is eps0^%d", f, n)
    return u


@dataclass(frozen=True)
class PadicEmbedding:
    field: QuadField
    p: int
    W: int
    root: int
    f: int
    zeta: int

    @property
    def modulus(self) -> int:
        return self.p**self.W

    def iota(self, x: QuadElem, which: int = 1) -> int:
        """iota_{which,p}(x) mod p^W."""
        q = self.modulus
        for c in (x.a, x.b):
            if c.denominator % self.p == 0:
                raise NegativeValuation(f"{x} is not p-integral")
        r = self.root if which == 1 else -self.root
        w = (self.field.d + r) * pow(2, -1, q)
        num = x.a.numerator * pow(x.a.denominator, -1, q) + x.b.numerator * pow(x.b.denominator, -1, q) * w
        return num % q

    def zeta_power(self, t: int) -> int:
        return pow(self.zeta, t % self.f, self.modulus)

    def rational(self, x: Fraction) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise NegativeValuation(f"{x} is not p-integral")
        q = self.modulus
        return x.numerator * pow(x.denominator, -1, q) % q


def _primitive_roots_of_order(f: int, p: int) -> List[int]:
    if f == 1:
        return [1]
    return [c for c in range(2, p) if n_order(c, p) == f]


def make_padic_embedding(
    field: QuadField, p: int, f: int, root_choice: int = 0, zeta_choice: int = 0, W: int = 1
) -> PadicEmbedding:
    if p == 2 or not isprime(p):
        raise HypothesisViolation(f"p = {p} must be an odd prime")
    if field.d % p == 0:
        raise NonSplitPrime(f"{p} ramifies in Q(sqrt({field.d}))")
    roots = sqrt_mod(field.d % p, p, all_roots=True) or []
    if not roots:
        raise NonSplitPrime(f"{p} is inert in Q(sqrt({field.d}))")
    if (p - 1) % f:
        raise BadF(f"f = {f} does not divide p - 1 = {p - 1}")
    q = p**W
    r = roots[root_choice % len(roots)]
    while (r * r - field.d) % q:
        r = (r - (r * r - field.d) * pow(2 * r, -1, q)) % q
    candidates = _primitive_roots_of_order(f, p)
    c = candidates[zeta_choice % len(candidates)]
    zeta = pow(c, p ** (W - 1), q)
    return PadicEmbedding(field=field, p=p, W=W, root=r, f=f, zeta=zeta)
