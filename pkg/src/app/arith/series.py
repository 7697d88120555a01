"""
Total-degree truncated power series in X1, X2 over exact coefficient rings.

A series keeps homogeneous components H_0..H_M; H_nu[i] is the coefficient of
X1^i * X2^(nu - i). Two rings are provided: CycQuad, the field Q(mu_f)(sqrt d)
for exact values, and ModP, the integers mod p^W for p-adic values. Products
and quotients over ModP pack each component into one Python integer
(Kronecker substitution) so that a single big-integer product replaces an
inner convolution loop.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from sympy import Poly, QQ, Symbol, cyclotomic_poly, totient
from sympy.functions.combinatorial.numbers import stirling

from src.app.core.errors import InsufficientDegree, NonUnitDivisor, PrecisionExhausted

logger = logging.getLogger(__name__)

_X = Symbol("x")


class CoeffRing(ABC):
    """Exact commutative ring used for series coefficients."""

    zero = None
    one = None

    @abstractmethod
    def add(self, x, y):
        ...

    @abstractmethod
    def sub(self, x, y):
        ...

    @abstractmethod
    def mul(self, x, y):
        ...

    @abstractmethod
    def times_int(self, x, n: int):
        ...

    @abstractmethod
    def is_unit(self, x) -> bool:
        ...

    @abstractmethod
    def inverse(self, x):
        ...

    def neg(self, x):
        return self.sub(self.zero, x)

    def is_zero(self, x) -> bool:
        return x == self.zero

    def from_int(self, n: int):
        return self.times_int(self.one, n)


class ModP(CoeffRing):
    """Integers mod p^W."""

    def __init__(self, p: int, W: int):
        self.p = p
        self.W = W
        self.q = p**W
        self.zero = 0
        self.one = 1 % self.q

    def add(self, x, y):
        return (x + y) % self.q

    def sub(self, x, y):
        return (x - y) % self.q

    def mul(self, x, y):
        return x * y % self.q

    def times_int(self, x, n: int):
        return x * n % self.q

    def is_unit(self, x) -> bool:
        return x % self.p != 0

    def inverse(self, x):
        if not self.is_unit(x):
            raise NonUnitDivisor(f"{x} is not a unit mod {self.p}^{self.W}")
        return pow(x, -1, self.q)

    def from_rational(self, x: Fraction) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise NonUnitDivisor(f"{x} has a denominator divisible by {self.p}")
        return x.numerator * pow(x.denominator, -1, self.q) % self.q

    def valuation(self, x) -> int:
        x %= self.q
        if x == 0:
            return self.W
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v


Cyc = Tuple[Fraction, ...]


class CyclotomicField:
    """Q(mu_f) as coefficient tuples in zeta_f, reduced mod the f-th cyclotomic polynomial."""

    def __init__(self, f: int):
        self.f = max(f, 1)
        self.phi = int(totient(self.f))
        coeffs = Poly(cyclotomic_poly(self.f, _X), _X).all_coeffs()
        self._cyclo = [int(c) for c in reversed(coeffs)]
        self.zero: Cyc = tuple(Fraction(0) for _ in range(self.phi))
        self.one: Cyc = (Fraction(1),) + self.zero[1:]

    def reduce(self, poly: Sequence) -> Cyc:
        a = [Fraction(c) for c in poly] + [Fraction(0)] * max(0, self.phi - len(poly))
        for k in range(len(a) - 1, self.phi - 1, -1):
            c = a[k]
            if c:
                shift = k - self.phi
                for j, cj in enumerate(self._cyclo):
                    a[shift + j] -= c * cj
        return tuple(a[: self.phi])

    def rational(self, c) -> Cyc:
        return (Fraction(c),) + self.zero[1:]

    def add(self, x: Cyc, y: Cyc) -> Cyc:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: Cyc, y: Cyc) -> Cyc:
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, x: Cyc, c) -> Cyc:
        c = Fraction(c)
        return tuple(a * c for a in x)

    def mul(self, x: Cyc, y: Cyc) -> Cyc:
        out = [Fraction(0)] * (2 * self.phi - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        out[i + j] += a * b
        return self.reduce(out)

    def inverse(self, x: Cyc) -> Cyc:
        if not any(x):
            raise NonUnitDivisor("division by zero in Q(mu_f)")
        if self.phi == 1:
            return (1 / x[0],)
        px = Poly(list(reversed(x)), _X, domain=QQ)
        pc = Poly(list(reversed(self._cyclo)), _X, domain=QQ)
        inv = px.invert(pc)
        return self.reduce([Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())])

    def power(self, t: int) -> Cyc:
        """zeta_f^t."""
        poly = [Fraction(0)] * self.f
        poly[t % self.f] = Fraction(1)
        return self.reduce(poly)

    def galois(self, x: Cyc, s: int) -> Cyc:
        """The automorphism zeta_f -> zeta_f^s, s prime to f."""
        poly = [Fraction(0)] * self.f
        for k, c in enumerate(x):
            poly[(k * s) % self.f] += c
        return self.reduce(poly)

    def evaluate(self, terms: Sequence[Tuple[int, object]]) -> Cyc:
        """sum of c * zeta_f^k over (k, c) pairs."""
        poly = [Fraction(0)] * self.f
        for k, c in terms:
            poly[k % self.f] += Fraction(c)
        return self.reduce(poly)


class CycQuad(CoeffRing):
    """
    Q(mu_f)(sqrt d) as pairs (u, v) meaning u + v*sqrt(d), with u, v in
    Q(mu_f).
    """

    def __init__(self, f: int, d: int):
        self.cyc = CyclotomicField(f)
        self.f = self.cyc.f
        self.d = d
        self.phi = self.cyc.phi
        self.zero = (self.cyc.zero, self.cyc.zero)
        self.one = (self.cyc.one, self.cyc.zero)

    def zeta_power(self, t: int) -> Tuple[Cyc, Cyc]:
        return (self.cyc.power(t), self.cyc.zero)

    def from_sqrt(self, A, B) -> Tuple[Cyc, Cyc]:
        return (self.cyc.rational(A), self.cyc.rational(B))

    # ring contract

    def add(self, x, y):
        return (self.cyc.add(x[0], y[0]), self.cyc.add(x[1], y[1]))

    def sub(self, x, y):
        return (self.cyc.sub(x[0], y[0]), self.cyc.sub(x[1], y[1]))

    def mul(self, x, y):
        u1, v1 = x
        u2, v2 = y
        mul = self.cyc.mul
        return (
            self.cyc.add(mul(u1, u2), self.cyc.scale(mul(v1, v2), self.d)),
            self.cyc.add(mul(u1, v2), mul(u2, v1)),
        )

    def times_int(self, x, n: int):
        return (self.cyc.scale(x[0], n), self.cyc.scale(x[1], n))

    def is_unit(self, x) -> bool:
        return any(x[0]) or any(x[1])

    def inverse(self, x):
        if not self.is_unit(x):
            raise NonUnitDivisor("division by zero")
        u, v = x
        mul = self.cyc.mul
        n_inv = self.cyc.inverse(self.cyc.sub(mul(u, u), self.cyc.scale(mul(v, v), self.d)))
        return (mul(u, n_inv), self.cyc.scale(mul(v, n_inv), -1))

    def conj(self, x):
        """The automorphism sqrt(d) -> -sqrt(d)."""
        return (x[0], self.cyc.scale(x[1], -1))

    def galois(self, x, s: int):
        return (self.cyc.galois(x[0], s), self.cyc.galois(x[1], s))

    def is_rational_part(self, x) -> bool:
        """True iff the sqrt(d)-component vanishes."""
        return not any(x[1])


def _slot_bytes(q: int, M: int) -> int:
    bits = 2 * q.bit_length() + 2 * (M + 1).bit_length() + 1
    return (bits + 7) // 8


def _pack(coeffs: Sequence[int], sb: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(sb, "little") for c in coeffs), "little")


def _unpack(x: int, n: int, sb: int, q: int) -> List[int]:
    raw = x.to_bytes(n * sb, "little")
    return [int.from_bytes(raw[i * sb: (i + 1) * sb], "little") % q for i in range(n)]


@dataclass(frozen=True)
class TruncSeries:
    ring: CoeffRing
    M: int
    comps: Tuple[Tuple, ...]

    @classmethod
    def zero(cls, ring: CoeffRing, M: int) -> "TruncSeries":
        return cls(ring, M, tuple(tuple(ring.zero for _ in range(nu + 1)) for nu in range(M + 1)))

    @classmethod
    def constant(cls, ring: CoeffRing, M: int, c) -> "TruncSeries":
        z = cls.zero(ring, M)
        return cls(ring, M, ((c,),) + z.comps[1:])

    @classmethod
    def from_function(cls, ring: CoeffRing, M: int, fn: Callable[[int, int], object]) -> "TruncSeries":
        """Coefficient of X1^i X2^l is fn(i, l)."""
        return cls(ring, M, tuple(tuple(fn(i, nu - i) for i in range(nu + 1)) for nu in range(M + 1)))

    @classmethod
    def product_of_univariate(
        cls, ring: CoeffRing, M: int, scalar, c1: Sequence, c2: Sequence
    ) -> "TruncSeries":
        """scalar * (sum c1[i] X1^i) * (sum c2[l] X2^l)."""
        mul = ring.mul
        left = [mul(scalar, c) for c in c1[: M + 1]]
        return cls(
            ring,
            M,
            tuple(tuple(mul(left[i], c2[nu - i]) for i in range(nu + 1)) for nu in range(M + 1)),
        )

    def coeff(self, i: int, l: int):
        return self.comps[i + l][i]

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        M = min(self.M, other.M)
        add = self.ring.add
        return TruncSeries(
            self.ring,
            M,
            tuple(tuple(add(a, b) for a, b in zip(self.comps[nu], other.comps[nu])) for nu in range(M + 1)),
        )

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        M = min(self.M, other.M)
        sub = self.ring.sub
        return TruncSeries(
            self.ring,
            M,
            tuple(tuple(sub(a, b) for a, b in zip(self.comps[nu], other.comps[nu])) for nu in range(M + 1)),
        )

    def __neg__(self) -> "TruncSeries":
        return TruncSeries.zero(self.ring, self.M) - self

    def scale(self, c) -> "TruncSeries":
        mul = self.ring.mul
        return TruncSeries(self.ring, self.M, tuple(tuple(mul(c, a) for a in h) for h in self.comps))

    def map(self, fn: Callable) -> "TruncSeries":
        return TruncSeries(self.ring, self.M, tuple(tuple(fn(a) for a in h) for h in self.comps))

    def truncate(self, M: int) -> "TruncSeries":
        return TruncSeries(self.ring, min(M, self.M), self.comps[: min(M, self.M) + 1])

    def swap(self) -> "TruncSeries":
        """Exchange X1 and X2."""
        return TruncSeries(self.ring, self.M, tuple(tuple(reversed(h)) for h in self.comps))

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        M = min(self.M, other.M)
        if isinstance(self.ring, ModP):
            return self._mul_packed(other, M)
        ring = self.ring
        out = []
        for nu in range(M + 1):
            acc = [ring.zero] * (nu + 1)
            for k in range(nu + 1):
                A = self.comps[k]
                B = other.comps[nu - k]
                for i, a in enumerate(A):
                    if ring.is_zero(a):
                        continue
                    for j, b in enumerate(B):
                        if not ring.is_zero(b):
                            acc[i + j] = ring.add(acc[i + j], ring.mul(a, b))
            out.append(tuple(acc))
        return TruncSeries(ring, M, tuple(out))

    def _mul_packed(self, other: "TruncSeries", M: int) -> "TruncSeries":
        q = self.ring.q
        sb = _slot_bytes(q, M)
        pa = [_pack(h, sb) for h in self.comps[: M + 1]]
        pb = [_pack(h, sb) for h in other.comps[: M + 1]]
        out = []
        for nu in range(M + 1):
            acc = 0
            for k in range(nu + 1):
                if pa[k] and pb[nu - k]:
                    acc += pa[k] * pb[nu - k]
            out.append(tuple(_unpack(acc, nu + 1, sb, q)))
        return TruncSeries(self.ring, M, tuple(out))

    def __truediv__(self, other: "TruncSeries") -> "TruncSeries":
        M = min(self.M, other.M)
        ring = self.ring
        b0 = other.comps[0][0]
        if not ring.is_unit(b0):
            raise NonUnitDivisor("constant term of the divisor is not a unit")
        b_inv = ring.inverse(b0)
        if isinstance(ring, ModP):
            return self._div_packed(other, M, b_inv)
        quotient: List[Tuple] = []
        for nu in range(M + 1):
            acc = list(self.comps[nu])
            for k in range(1, nu + 1):
                B = other.comps[k]
                Q = quotient[nu - k]
                for i, bcoef in enumerate(B):
                    if ring.is_zero(bcoef):
                        continue
                    for j, qcoef in enumerate(Q):
                        if not ring.is_zero(qcoef):
                            acc[i + j] = ring.sub(acc[i + j], ring.mul(bcoef, qcoef))
            quotient.append(tuple(ring.mul(b_inv, a) for a in acc))
        return TruncSeries(ring, M, tuple(quotient))

    def _div_packed(self, other: "TruncSeries", M: int, b_inv: int) -> "TruncSeries":
        q = self.ring.q
        sb = _slot_bytes(q, M)
        pb = [_pack(h, sb) for h in other.comps[: M + 1]]
        pq: List[int] = []
        quotient: List[Tuple] = []
        for nu in range(M + 1):
            acc = 0
            for k in range(1, nu + 1):
                if pb[k] and pq[nu - k]:
                    acc += pb[k] * pq[nu - k]
            s = _unpack(acc, nu + 1, sb, q) if acc else [0] * (nu + 1)
            h = tuple((b_inv * (a - c)) % q for a, c in zip(self.comps[nu], s))
            quotient.append(h)
            pq.append(_pack(h, sb))
        return TruncSeries(self.ring, M, tuple(quotient))


def mul(A: TruncSeries, B: TruncSeries) -> TruncSeries:
    return A * B


def add(A: TruncSeries, B: TruncSeries) -> TruncSeries:
    return A + B


def div(A: TruncSeries, B: TruncSeries) -> TruncSeries:
    return A / B


def binomial_coefficients_padic(a: int, M: int, ring: ModP, guard_exponent: int) -> List[int]:
    """
    binom(a, n) mod p^W for n = 0..M, where a is known mod p^guard_exponent.

    The falling products are formed mod p^guard_exponent and the p-part of n!
    is divided out exactly.
    """
    p, q = ring.p, ring.q
    big = p**guard_exponent
    out = [1 % q]
    prod = 1
    v = 0
    unit = 1
    for n in range(1, M + 1):
        prod = prod * (a - n + 1) % big
        m = n
        while m % p == 0:
            m //= p
            v += 1
        unit = unit * m % big
        if v > guard_exponent or prod % (p**v):
            raise PrecisionExhausted(
                f"binomial coefficient {n} needs more than {guard_exponent} digits"
            )
        out.append((prod // p**v) * pow(unit, -1, q) % q)
    return out


def binomial_coefficients_exact(A: Fraction, B: Fraction, d: int, M: int) -> List[Tuple[Fraction, Fraction]]:
    """binom(A + B sqrt d, n) for n = 0..M as pairs (A_n, B_n)."""
    out = [(Fraction(1), Fraction(0))]
    cur_a, cur_b = Fraction(1), Fraction(0)
    for n in range(1, M + 1):
        fa, fb = A - (n - 1), B
        cur_a, cur_b = (cur_a * fa + d * cur_b * fb) / n, (cur_a * fb + cur_b * fa) / n
        out.append((cur_a, cur_b))
    return out


def binom_power(a, M: int, ring: CoeffRing, sign_unit=None, guard_exponent: Optional[int] = None) -> List:
    """
    Coefficients of sign_unit * (1 + X)^a up to X^M.

    For ModP, `a` is an integer residue; for CycQuad it is a pair (A, B)
    standing for A + B sqrt(d).
    """
    if isinstance(ring, ModP):
        coeffs = binomial_coefficients_padic(a, M, ring, guard_exponent or ring.W)
    else:
        A, B = a
        coeffs = [ring.from_sqrt(x, y) for x, y in binomial_coefficients_exact(A, B, ring.d, M)]
    if sign_unit is None:
        return coeffs
    return [ring.mul(sign_unit, c) for c in coeffs]


def apply_Delta(A: TruncSeries) -> TruncSeries:
    """(1+X1)(1+X2) d^2/dX1 dX2, exact on total degrees <= M - 2."""
    ring = A.ring
    if A.M < 2:
        raise InsufficientDegree("Delta needs total degree at least 2")
    M = A.M - 2
    g = TruncSeries.from_function(
        ring, M, lambda i, l: ring.times_int(A.coeff(i + 1, l + 1), (i + 1) * (l + 1))
    )

    def h(i: int, l: int):
        val = g.coeff(i, l)
        if i > 0:
            val = ring.add(val, g.coeff(i - 1, l))
        if l > 0:
            val = ring.add(val, g.coeff(i, l - 1))
        if i > 0 and l > 0:
            val = ring.add(val, g.coeff(i - 1, l - 1))
        return val

    return TruncSeries.from_function(ring, M, h)


def delta_power_at_zero(A: TruncSeries, n: int):
    """Constant term of Delta^n A, read off from total degrees <= 2n."""
    if A.M < 2 * n:
        raise InsufficientDegree(f"Delta^{n} at 0 needs total degree {2 * n}, have {A.M}")
    ring = A.ring
    weights = [_factorial(i) * int(stirling(n, i)) for i in range(n + 1)]
    total = ring.zero
    for i in range(n + 1):
        if not weights[i]:
            continue
        for l in range(n + 1):
            if weights[l]:
                total = ring.add(total, ring.times_int(A.coeff(i, l), weights[i] * weights[l]))
    return total


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _binomial_rows(n: int) -> List[List[int]]:
    rows = [[1]]
    for m in range(1, n + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, m)] + [1])
    return rows


def _apply_V1(A: TruncSeries, p: int) -> TruncSeries:
    ring = A.ring
    M = A.M
    C = _binomial_rows(M)
    new = [[ring.zero] * (nu + 1) for nu in range(M + 1)]
    for l in range(M + 1):
        top = M - l
        a = [A.coeff(m, l) for m in range(top + 1)]
        # expand in powers of (1 + X1), keep exponents divisible by p, expand back
        b = []
        for k in range(top + 1):
            acc = ring.zero
            for m in range(k, top + 1):
                term = ring.times_int(a[m], C[m][k])
                acc = ring.sub(acc, term) if (m - k) % 2 else ring.add(acc, term)
            b.append(acc if k % p == 0 else ring.zero)
        for j in range(top + 1):
            acc = ring.zero
            for k in range(j, top + 1):
                if k % p == 0:
                    acc = ring.add(acc, ring.times_int(b[k], C[k][j]))
            new[j + l][j] = acc
    return TruncSeries(ring, M, tuple(tuple(h) for h in new))


def apply_V(A: TruncSeries, axis: int, p: int) -> TruncSeries:
    """
    Average of F(zeta(1+X)-1) over the p-th roots of unity zeta, in one variable.

    Each coefficient is a finite binomial transform of the kept coefficients,
    so the result is exact for polynomial input of degree <= M and otherwise
    p-adically close on low degrees.
    """
    if axis == 1:
        return _apply_V1(A, p)
    return _apply_V1(A.swap(), p).swap()


def apply_U(A: TruncSeries, p: int) -> TruncSeries:
    """(1 - V1)(1 - V2)."""
    v1 = apply_V(A, 1, p)
    v2 = apply_V(A, 2, p)
    v12 = apply_V(v1, 2, p)
    return A - v1 - v2 + v12
