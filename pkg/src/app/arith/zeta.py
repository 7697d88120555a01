"""
Twisted partial zeta values of a cone: exact values at non-positive integers
and p-adic values at s = 1.

Every value starts from the generating series

    F(X1, X2) = sum_a xi(a) (1+X)^a / prod_i (1 - xi(tau_i) (1+X)^tau_i)

where a runs over the points of I in P(tau1, tau2) and (1+X)^x stands for
(1+X1)^iota1(x) (1+X2)^iota2(x).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import List, Optional, Sequence, Tuple

from mpmath import iv, log, mpf

from src.app.arith.charpairs import CharPair
from src.app.arith.quadfield import PadicEmbedding, QuadElem
from src.app.arith.series import (
    CoeffRing,
    CycQuad,
    ModP,
    TruncSeries,
    binom_power,
    delta_power_at_zero,
)
from src.app.arith.shintani import ConeFan, enumerate_parallelogram
from src.app.core.errors import HypothesisViolation, KernelGenerator, PrecisionExhausted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CnTable:
    """c_n = sum over p-th roots of unity zeta of (zeta - 1)^n, for n = 1..len(values)."""

    p: int
    values: Tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n - 1]

    def __len__(self) -> int:
        return len(self.values)

    def bracket(self, n: int, modulus: int) -> int:
        """c_n / (p n) reduced mod `modulus`; the quotient is p-integral."""
        x = Fraction(self[n], self.p * n)
        if x.denominator % self.p == 0:
            raise PrecisionExhausted(f"c_{n}/({self.p}*{n}) is not {self.p}-integral")
        return x.numerator * pow(x.denominator, -1, modulus) % modulus


def c_sequence(p: int, n_max: int) -> CnTable:
    """c_1..c_{n_max} from c_n = (-1)^n p (n < p) and the order-p recurrence."""
    if p < 3 or p % 2 == 0:
        raise HypothesisViolation(f"p = {p} must be an odd prime")
    binoms = [comb(p, j) for j in range(p + 1)]
    c: List[int] = []
    for n in range(1, n_max + 1):
        if n < p:
            c.append(p if n % 2 == 0 else -p)
        else:
            c.append(-sum(binoms[j] * c[n - p + j - 1] for j in range(1, p)))
    return CnTable(p=p, values=tuple(c))


def c_explicit(p: int, n: int) -> int:
    """p * sum over r = 0 mod p of binom(n, r) (-1)^(n-r)."""
    return p * sum(comb(n, r) * (-1) ** (n - r) for r in range(0, n + 1, p))


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorial_valuation(n: int, p: int) -> int:
    v, pk = 0, p
    while pk <= n:
        v += n // pk
        pk *= p
    return v


@dataclass(frozen=True)
class PrecisionPlan:
    p: int
    N: int
    M: int
    W: int
    W_guard: int


def _f_p_lower(p: int, M: int):
    x = iv.mpf(M)
    value = (x + 2) / (p - 1) - 2 / iv.log(p) * iv.log(x / 2 + 1) - 2
    return value.a


def precision_plan(p: int, N: int) -> PrecisionPlan:
    """
    Least series degree M with f_p(M) > N, where
    f_p(x) = (x+2)/(p-1) - (2/log p) log(x/2+1) - 2, on the range where f_p increases.
    """
    if N < 1:
        raise HypothesisViolation("the number of digits must be at least 1")
    old_prec = iv.prec
    iv.prec = 128
    try:
        m_min = max(1, ceil(2 * (p - 1) / log(mpf(p)) - 2))
        M = m_min
        while not _f_p_lower(p, M) > N:
            M += 1
    finally:
        iv.prec = old_prec
    plan = PrecisionPlan(p=p, N=N, M=M, W=N, W_guard=N + factorial_valuation(M, p))
    logger.info("precision plan for p=%d, N=%d: M=%d, W'=%d", p, N, plan.M, plan.W_guard)
    return plan


def _exponent_series(
    x: QuadElem, M: int, ring: CoeffRing, embedding: Optional[PadicEmbedding], shift: int = 0
) -> Tuple[list, list]:
    if embedding is None:
        A, B = x.sqrt_parts()
        return (
            binom_power((A + shift, B), M, ring),
            binom_power((A + shift, -B), M, ring),
        )
    big = embedding.modulus
    return (
        binom_power((embedding.iota(x, 1) + shift) % big, M, ring, guard_exponent=embedding.W),
        binom_power((embedding.iota(x, 2) + shift) % big, M, ring, guard_exponent=embedding.W),
    )


def _coefficient_ring(pair: CharPair, embedding: Optional[PadicEmbedding], W: Optional[int]) -> CoeffRing:
    if embedding is None:
        return CycQuad(pair.f_int, pair.field.d)
    return ModP(embedding.p, W or embedding.W)


def _xi(pair: CharPair, x: QuadElem, ring: CoeffRing, embedding, galois_exponent: int):
    t = pair.evaluate(x) * galois_exponent
    if embedding is None:
        return ring.zeta_power(t)
    return embedding.zeta_power(t) % ring.q


def _series(
    pair: CharPair,
    tau1: QuadElem,
    tau2: QuadElem,
    points: Sequence[QuadElem],
    M: int,
    embedding: Optional[PadicEmbedding],
    W: Optional[int],
    galois_exponent: int,
    shift: int,
) -> TruncSeries:
    ring = _coefficient_ring(pair, embedding, W)
    for tau in (tau1, tau2):
        if pair.kernel_test(tau):
            raise KernelGenerator(f"cone generator {tau} lies in the kernel of the character")
    numerator = TruncSeries.zero(ring, M)
    for a in points:
        c1, c2 = _exponent_series(a, M, ring, embedding, shift)
        numerator = numerator + TruncSeries.product_of_univariate(
            ring, M, _xi(pair, a, ring, embedding, galois_exponent), c1, c2
        )
    one = TruncSeries.constant(ring, M, ring.one)
    denominator = one
    for tau in (tau1, tau2):
        c1, c2 = _exponent_series(tau, M, ring, embedding)
        term = TruncSeries.product_of_univariate(
            ring, M, _xi(pair, tau, ring, embedding, galois_exponent), c1, c2
        )
        denominator = denominator * (one - term)
    return numerator / denominator


def build_F(
    pair: CharPair,
    tau1: QuadElem,
    tau2: QuadElem,
    points: Sequence[QuadElem],
    M: int,
    embedding: Optional[PadicEmbedding] = None,
    W: Optional[int] = None,
    galois_exponent: int = 1,
    shift: int = 0,
) -> TruncSeries:
    """
    The cone series to total degree M. Exact (over Q(mu_f)(sqrt d)) when no
    embedding is given, otherwise mod p^W. `shift` multiplies by
    ((1+X1)(1+X2))^shift.
    """
    return _series(pair, tau1, tau2, points, M, embedding, W, galois_exponent, shift)


def fstar_points(pair: CharPair, tau1: QuadElem, tau2: QuadElem, p: int) -> List[QuadElem]:
    """Points of I in P(p tau1, p tau2) whose index in I is prime to p."""
    ideal = pair.ideal
    return [
        a
        for a in enumerate_parallelogram(ideal, tau1 * p, tau2 * p)
        if ideal.element_index(a).numerator % p
    ]


def build_Fstar(
    pair: CharPair,
    tau1: QuadElem,
    tau2: QuadElem,
    M: int,
    p: int,
    embedding: Optional[PadicEmbedding] = None,
    W: Optional[int] = None,
    galois_exponent: int = 1,
) -> TruncSeries:
    """The series with the Euler factors at p removed."""
    if pair.f.norm.numerator % p == 0:
        raise HypothesisViolation(f"p = {p} divides the norm of f")
    points = fstar_points(pair, tau1, tau2, p)
    return _series(pair, tau1 * p, tau2 * p, points, M, embedding, W, galois_exponent, 0)


def exact_z_at_m(
    pair: CharPair,
    tau1: QuadElem,
    tau2: QuadElem,
    m: int,
    Tp_mode: bool = False,
    p: Optional[int] = None,
    galois_exponent: int = 1,
):
    """z(m) for m <= 0 as an element of Q(mu_f)(sqrt d); its sqrt(d)-part vanishes."""
    if m > 0:
        raise HypothesisViolation("exact values are available at non-positive integers only")
    n = -m
    M = 2 * n
    if Tp_mode:
        if p is None:
            raise HypothesisViolation("the p-modified value needs p")
        F = build_Fstar(pair, tau1, tau2, M, p, galois_exponent=galois_exponent)
    else:
        points = enumerate_parallelogram(pair.ideal, tau1, tau2)
        F = build_F(pair, tau1, tau2, points, M, galois_exponent=galois_exponent)
    return delta_power_at_zero(F, n)


def padic_z_at_1(
    pair: CharPair,
    tau1: QuadElem,
    tau2: QuadElem,
    points: Sequence[QuadElem],
    plan: PrecisionPlan,
    embedding: PadicEmbedding,
    cn: Optional[CnTable] = None,
    galois_exponent: int = 1,
) -> int:
    """
    z_{T_p,p}(1) of the cone mod p^N as

        sum over i + l < M of [c_{i+1}/(p(i+1))] [c_{l+1}/(p(l+1))] a_{i,l}

    with a_{i,l} the coefficients of (1+X1)^-1 (1+X2)^-1 F.
    """
    if not pair.ideal.coprime_to(plan.p):
        raise HypothesisViolation(f"the ideal of the pair is not prime to {plan.p}")
    q = plan.p**plan.N
    cn = cn or c_sequence(plan.p, plan.M + 1)
    F = build_F(
        pair, tau1, tau2, points, plan.M, embedding, W=plan.W, galois_exponent=galois_exponent, shift=-1
    )
    brackets = [0] + [cn.bracket(n, q) for n in range(1, plan.M + 1)]
    total = 0
    for nu in range(plan.M):
        h = F.comps[nu]
        for i in range(nu + 1):
            if h[i]:
                total += brackets[i + 1] * brackets[nu - i + 1] * h[i]
    return total % q


def padic_Z_at_1(
    pair: CharPair,
    fan: ConeFan,
    plan: PrecisionPlan,
    embedding: PadicEmbedding,
    cn: Optional[CnTable] = None,
    galois_exponent: int = 1,
) -> int:
    """N(I) times the sum of the cone values over the fan, mod p^N."""
    q = plan.p**plan.N
    cn = cn or c_sequence(plan.p, plan.M + 1)
    total = 0
    for t, (rho_prev, rho) in enumerate(fan.cones):
        logger.debug("cone %d of %d", t + 1, len(fan.cones))
        total += padic_z_at_1(pair, rho_prev, rho, fan.points[t], plan, embedding, cn, galois_exponent)
    norm = embedding.rational(pair.norm) % q
    return norm * total % q


def exact_Z_at_m(
    pair: CharPair,
    fan: ConeFan,
    m: int,
    Tp_mode: bool = False,
    p: Optional[int] = None,
    galois_exponent: int = 1,
):
    """N(I)^m times the sum of the exact cone values, as a pair (u, v) meaning u + v sqrt(d)."""
    ring = CycQuad(pair.f_int, pair.field.d)
    total = ring.zero
    for t, (rho_prev, rho) in enumerate(fan.cones):
        z = exact_z_at_m(pair, rho_prev, rho, m, Tp_mode, p, galois_exponent)
        total = ring.add(total, z)
    scale = Fraction(pair.norm) ** m
    return (ring.cyc.scale(total[0], scale), ring.cyc.scale(total[1], scale))
