"""
The action of G on S-unit exponent vectors.

K = Q(theta) is given by the minimal polynomial of theta, each generator of G
by its image sigma(theta) as a polynomial in theta, and a Z-basis u_1..u_r of
U_S / torsion by polynomials in theta. K is totally real, so sigma permutes the
real embeddings theta_j and log|sigma(u_l)(theta_j)| = log|u_l(theta_{pi(j)})|.
The integer matrix T with sigma(u_l) = +-prod_m u_m^{T[l][m]} is read off the
log embeddings and rounded. Every polynomial is listed leading coefficient first.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from mpmath import mp, mpf

from src.app.core.errors import InconsistentDimensions

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]


def _mpf(c) -> mpf:
    c = Fraction(c)
    return mpf(c.numerator) / c.denominator


def _evaluate(poly: Sequence, x) -> mpf:
    return mp.polyval([_mpf(c) for c in poly], x)


def real_roots(polynomial: Sequence[int]) -> List[mpf]:
    """The roots of a polynomial with only real roots, in increasing order."""
    try:
        roots = mp.polyroots([_mpf(c) for c in polynomial], maxsteps=400, extraprec=mp.prec)
    except mp.NoConvergence as exc:
        raise InconsistentDimensions(f"roots of the unit field polynomial did not converge: {exc}")
    tol = mpf(10) ** (-(mp.dps // 2))
    out = []
    for r in roots:
        if abs(mp.im(r)) > tol:
            raise InconsistentDimensions("the unit field has a complex embedding")
        out.append(mp.re(r))
    return sorted(out)


def embedding_permutation(image: Sequence, roots: Sequence[mpf]) -> List[int]:
    """pi with image(theta_j) = theta_{pi(j)}."""
    tol = mpf(10) ** (-(mp.dps // 2))
    perm = []
    for r in roots:
        y = _evaluate(image, r)
        dist = [abs(y - s) for s in roots]
        k = min(range(len(roots)), key=dist.__getitem__)
        if dist[k] > tol:
            raise InconsistentDimensions("sigma(theta) is not a root of the defining polynomial")
        perm.append(k)
    if sorted(perm) != list(range(len(roots))):
        raise InconsistentDimensions("sigma(theta) does not permute the embeddings")
    return perm


def _mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(len(B[0]))] for row in A]


def _mat_power(T: IntMatrix, k: int) -> IntMatrix:
    out = [[int(i == j) for j in range(len(T))] for i in range(len(T))]
    for _ in range(k):
        out = _mat_mul(out, T)
    return out


def unit_action(
    polynomial: Sequence[int],
    images: Sequence[Sequence],
    units: Sequence[Sequence],
    orders: Sequence[int],
    digits: int = 60,
) -> List[IntMatrix]:
    """One integer matrix per generator of G; g acts on exponent rows by a -> a T_g."""
    if len(images) != len(orders):
        raise InconsistentDimensions(f"{len(images)} Galois images for {len(orders)} generators")
    with mp.workdps(digits):
        roots = real_roots(polynomial)
        n, r = len(roots), len(units)
        if r > n:
            raise InconsistentDimensions(f"{r} S-units exceed the {n} real embeddings")
        L = []
        for u in units:
            row = []
            for x in roots:
                value = _evaluate(u, x)
                if abs(value) < mpf(10) ** (-(mp.dps // 2)):
                    raise InconsistentDimensions("a listed unit vanishes at an embedding")
                row.append(mp.log(abs(value)))
            L.append(row)
        Lm = mp.matrix(L)
        gram = Lm * Lm.T
        if abs(mp.det(gram)) < mpf(10) ** (-(mp.dps // 2)):
            raise InconsistentDimensions("the listed units are multiplicatively dependent")
        right = Lm.T * gram ** -1
        tol = mpf(10) ** (-(mp.dps // 3))
        out: List[IntMatrix] = []
        for image, order in zip(images, orders):
            perm = embedding_permutation(image, roots)
            Ls = mp.matrix([[row[perm[j]] for j in range(n)] for row in L])
            approx = Ls * right
            T = []
            for l in range(r):
                row = []
                for m in range(r):
                    k = int(mp.nint(approx[l, m]))
                    if abs(approx[l, m] - k) > tol:
                        raise InconsistentDimensions("the Galois action on the listed units is not integral")
                    row.append(k)
                T.append(row)
            if _mat_power(T, order) != _mat_power(T, 0):
                raise InconsistentDimensions(f"the Galois image does not have order dividing {order}")
            out.append(T)
    logger.debug("unit action on %d units: %s", r, out)
    return out


def act_on_exponents(action: Sequence[IntMatrix], g: Sequence[int], v: Sequence) -> Tuple[Fraction, ...]:
    """g = prod sigma_t^{g_t} applied to an exponent row vector."""
    out = tuple(Fraction(x) for x in v)
    for T, k in zip(action, g):
        for _ in range(k):
            out = tuple(sum(out[l] * T[l][m] for l in range(len(out))) for m in range(len(out)))
    return out


@dataclass(frozen=True)
class UnitBasis:
    """Polynomials in theta, leading coefficient first, describing K, G and a basis of U_S / torsion."""

    polynomial: Tuple[int, ...]
    images: Tuple[Tuple[Fraction, ...], ...]
    units: Tuple[Tuple[Fraction, ...], ...]

    def action(self, orders: Sequence[int], digits: int = 60) -> List[IntMatrix]:
        return unit_action(self.polynomial, self.images, self.units, orders, digits)
