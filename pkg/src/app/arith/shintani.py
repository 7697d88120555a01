"""
Cone geometry in the totally positive quadrant: fundamental parallelograms
and the continued-fraction fan along the convexity polygon of an ideal.

P(t1, t2) = {l*t1 + m*t2 : 0 < l <= 1, 0 <= m < 1}.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import List, Tuple

from src.app.arith.charpairs import CharPair
from src.app.arith.lattice import hnf_rows
from src.app.arith.quadfield import QuadElem, QuadIdeal
from src.app.core.errors import DependentGenerators, KernelObstruction

logger = logging.getLogger(__name__)

MAX_FAN_STEPS = 100_000


@dataclass(frozen=True)
class ConeFan:
    rho: List[QuadElem]
    points: List[List[QuadElem]]
    partial_quotients: List[int]
    epsilon: QuadElem
    skipped: List[int] = field(default_factory=list)
    start: int = 0
    period: int = 0

    @property
    def cones(self) -> List[Tuple[QuadElem, QuadElem]]:
        return [(self.rho[t - 1], self.rho[t]) for t in range(1, len(self.rho))]

    @property
    def point_count(self) -> int:
        return sum(len(p) for p in self.points)


def ideal_coordinates(I: QuadIdeal, x: QuadElem) -> Tuple[Fraction, Fraction]:
    """(u, v) with x = u*alpha + v*beta for the Z-basis (alpha, beta) of I."""
    v = x.b / I.scale
    u = (x.a - v * I.scale * I.b) / (I.scale * I.a)
    return u, v


def _det_sign(x: QuadElem, y: QuadElem) -> int:
    """Sign of iota1(x)*iota2(y) - iota2(x)*iota1(y)."""
    return (x * y.conj() - x.conj() * y).sign(1)


def initial_basis_pair(I: QuadIdeal) -> Tuple[QuadElem, QuadElem]:
    """
    Totally positive x, y with Zx + Zy = I, iota1(x) > iota1(y) and a
    positive determinant.
    """
    alpha, beta = I.z_basis()
    t = (beta / alpha).floor(1) + 1
    x, y = alpha, alpha * t - beta
    if _is_admissible_pair(I, x, y):
        return x, y
    return _scan_basis_pair(I)


def _is_admissible_pair(I: QuadIdeal, x: QuadElem, y: QuadElem) -> bool:
    if not (x.is_totally_positive and y.is_totally_positive):
        return False
    if not x.greater(y, 1) or _det_sign(x, y) <= 0:
        return False
    (u1, v1), (u2, v2) = ideal_coordinates(I, x), ideal_coordinates(I, y)
    return abs(u1 * v2 - u2 * v1) == 1


def _scan_basis_pair(I: QuadIdeal) -> Tuple[QuadElem, QuadElem]:
    alpha, beta = I.z_basis()
    bound = 1
    while True:
        rng = range(-bound, bound + 1)
        for u1 in rng:
            for v1 in rng:
                x = alpha * u1 + beta * v1
                for u2 in rng:
                    for v2 in rng:
                        if abs(u1 * v2 - u2 * v1) != 1:
                            continue
                        y = alpha * u2 + beta * v2
                        if _is_admissible_pair(I, x, y):
                            return x, y
        bound *= 2


def enumerate_parallelogram(I: QuadIdeal, tau1: QuadElem, tau2: QuadElem) -> List[QuadElem]:
    """All points of I in P(tau1, tau2)."""
    (u1, v1), (u2, v2) = ideal_coordinates(I, tau1), ideal_coordinates(I, tau2)
    det = u1 * v2 - u2 * v1
    if det == 0:
        raise DependentGenerators("cone generators are linearly dependent")
    (h11, _), (_, h22) = hnf_rows([[int(u1), int(v1)], [int(u2), int(v2)]])
    alpha, beta = I.z_basis()
    points = []
    for i in range(h11):
        for j in range(h22):
            lam = (i * v2 - j * u2) / det
            mu = (j * u1 - i * v1) / det
            lam = lam - ceil(lam) + 1
            mu = mu - floor(mu)
            points.append(tau1 * lam + tau2 * mu)
    return points


class _PolygonWalk:
    """rho_{n+1} = -rho_{n-1} + b_n rho_n with b_n = ceil(iota1(rho_{n-1}/rho_n))."""

    def __init__(self, x: QuadElem, y: QuadElem):
        self.rho = [x, y]
        self.b: List[int] = []

    def __getitem__(self, n: int) -> QuadElem:
        while len(self.rho) <= n:
            self._step()
        return self.rho[n]

    def quotient(self, n: int) -> int:
        """b_n for n >= 1."""
        while len(self.b) < n:
            self._step()
        return self.b[n - 1]

    def _step(self) -> None:
        if len(self.rho) > MAX_FAN_STEPS:
            raise KernelObstruction("polygon walk did not become periodic")
        prev, cur = self.rho[-2], self.rho[-1]
        bn = (prev / cur).ceil(1)
        self.b.append(bn)
        self.rho.append(cur * bn - prev)


def continued_fraction_fan(pair: CharPair, eps: QuadElem) -> ConeFan:
    """
    Shintani fan of C(rho_0, eps*rho_0) with every rho_t outside ker xi.
    """
    I = pair.ideal
    eps_fan = eps.inverse() if eps.greater(1, 1) else eps
    walk = _PolygonWalk(*initial_basis_pair(I))

    n_start = 1
    while not walk[n_start].greater(walk[n_start - 1], 2):
        n_start += 1
    target = walk[n_start] * eps_fan
    period = 1
    while walk[n_start + period] != target:
        period += 1

    n0 = next((n for n in range(n_start, n_start + period) if not pair.kernel_test(walk[n])), None)
    if n0 is None:
        raise KernelObstruction("every polygon vertex lies in the kernel of the character")
    primed = [walk[n0 + m] for m in range(period + 1)]
    bad = [m for m in range(1, period) if pair.kernel_test(primed[m])]
    if any(b2 == b1 + 1 for b1, b2 in zip(bad, bad[1:])):
        raise KernelObstruction("two consecutive polygon vertices lie in the kernel")

    rho: List[QuadElem] = [primed[0]]
    points: List[List[QuadElem]] = []
    m = 1
    while m <= period:
        if m in bad:
            b_m = walk.quotient(n0 + m)
            points.append([primed[m - 1]] + [primed[m] * j for j in range(1, b_m)])
            rho.append(primed[m + 1])
            m += 2
        else:
            points.append([primed[m - 1]])
            rho.append(primed[m])
            m += 1
    partial = [walk.quotient(n) for n in range(n0 + 1, n0 + period + 1)]
    logger.debug(
        "fan: N=%d, M=%d, n0=%d, %d cones, %d skipped", n_start, period, n0, len(points), len(bad)
    )
    return ConeFan(
        rho=rho,
        points=points,
        partial_quotients=partial,
        epsilon=eps_fan,
        skipped=bad,
        start=n0,
        period=period,
    )
