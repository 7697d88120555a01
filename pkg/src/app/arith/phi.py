"""
The group-ring valued p-adic value Phi_{f,T_p,p}(1): one twisted zeta value
per ray class c, placed at sigma_c^-1.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import isprime, legendre_symbol, totient

from src.app.arith.charpairs import CharPair, act, base_pair
from src.app.arith.groupring import PADIC, FiniteAbelianGroup, GroupRingElem
from src.app.arith.quadfield import (
    PadicEmbedding,
    QuadElem,
    QuadField,
    QuadIdeal,
    make_padic_embedding,
    ray_unit_generator,
)
from src.app.arith.rayclass import build_ray_class_group, lift_and_kernel
from src.app.arith.shintani import continued_fraction_fan
from src.app.arith.zeta import PrecisionPlan, c_sequence, padic_Z_at_1, precision_plan
from src.app.core.errors import HypothesisViolation, NegativeValuation

logger = logging.getLogger(__name__)

Label = Tuple[int, ...]


def check_hypotheses(field_: QuadField, f: QuadIdeal, p: int) -> int:
    """Returns the least positive integer in f after checking every standing hypothesis."""
    if p < 3 or not isprime(p):
        raise HypothesisViolation(f"p = {p} is not an odd prime")
    if f.is_unit_ideal:
        raise HypothesisViolation("f = O carries no character")
    if not f.is_integral:
        raise HypothesisViolation("f must be an integral ideal")
    if gcd(p, int(f.norm)) != 1:
        raise HypothesisViolation(f"p = {p} divides N(f) = {f.norm}")
    if field_.d % p == 0 or legendre_symbol(field_.d % p, p) != 1:
        raise HypothesisViolation(f"p = {p} does not split in Q(sqrt({field_.d}))")
    f_int = int(f.min_integer)
    if (p - 1) % f_int:
        raise HypothesisViolation(f"f_int = {f_int} does not divide p - 1 = {p - 1}")
    return f_int


def zeta_choices(f_int: int) -> int:
    """Number of admissible images of zeta_f in Z_p."""
    return int(totient(f_int))


@dataclass(frozen=True)
class ClassTask:
    label: Label
    pair: CharPair
    epsilon: QuadElem
    plan: PrecisionPlan
    embedding: PadicEmbedding
    kernel_size: int


def class_value(task: ClassTask) -> Tuple[Label, int, int]:
    """(label, kernel_size * Z(1; pair) mod p^N, number of cones)."""
    fan = continued_fraction_fan(task.pair, task.epsilon)
    logger.info("class %s: %d cones, %d points", task.label, len(fan.cones), fan.point_count)
    cn = c_sequence(task.plan.p, task.plan.M + 1)
    z = padic_Z_at_1(task.pair, fan, task.plan, task.embedding, cn)
    q = task.plan.p**task.plan.N
    return task.label, task.kernel_size * z % q, len(fan.cones)


@dataclass
class PhiResult:
    field: QuadField
    f: QuadIdeal
    p: int
    plan: PrecisionPlan
    group: FiniteAbelianGroup
    phi: GroupRingElem
    root_choice: int
    zeta_choice: int
    kernel_size: int
    inversion: bool
    euler_factor: str
    sqrt_unit: int
    cone_counts: Dict[Label, int] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.plan.N

    def formatted(self) -> List[str]:
        return [format_digits(c, self.p, self.N) for c in self.phi.coeffs]

    def sigma_sum(self) -> str:
        return self.phi.sigma_sum(lambda c: format_digits(c, self.p, self.N))


def compute_phi(
    field_: QuadField,
    f: QuadIdeal,
    p: int,
    N: int,
    root_choice: int = 0,
    zeta_choice: int = 0,
    injection: Optional[Dict] = None,
    mapper: Callable[[Callable, Iterable], Iterable] = map,
) -> PhiResult:
    """
    Phi_{f,T_p,p}(1) mod p^N. `mapper` distributes the per-class work
    (builtin map, or an executor's map).
    """
    f_int = check_hypotheses(field_, f, p)
    G = build_ray_class_group(field_, f, aux_coprime=p, injection=injection)
    G_plus = build_ray_class_group(field_, f, with_infinite=True, aux_coprime=p)
    lift, kernel_size = lift_and_kernel(G_plus, G)
    base = base_pair(field_, f)
    eps = ray_unit_generator(field_, f)
    plan = precision_plan(p, N)
    embedding = make_padic_embedding(field_, p, f_int, root_choice, zeta_choice, W=plan.W_guard)
    group = G.group
    tasks = [
        ClassTask(c, act(base, lift(c), G_plus, p), eps, plan, embedding, kernel_size)
        for c in group.elements
    ]
    logger.info(
        "Phi for Q(sqrt(%d)), f=%s, p=%d, N=%d: %d classes, |ker|=%d",
        field_.d, f, p, N, len(tasks), kernel_size,
    )
    values: Dict[Label, int] = {}
    cones: Dict[Label, int] = {}
    for label, value, n_cones in mapper(class_value, tasks):
        values[group.neg(label)] = value
        cones[label] = n_cones
    q = p**N
    phi = GroupRingElem.from_dict(group, values, kind=PADIC, modulus=q)
    return PhiResult(
        field=field_,
        f=f,
        p=p,
        plan=plan,
        group=group,
        phi=phi,
        root_choice=root_choice,
        zeta_choice=zeta_choice,
        kernel_size=kernel_size,
        inversion=G.acts_by_inversion(),
        euler_factor=G.euler_factor(p).rational_str(),
        sqrt_unit=4 * pow(embedding.root, -1, q) % q,
        cone_counts=cones,
    )


def _digit(d: int) -> str:
    if d < 10:
        return str(d)
    if d < 36:
        return chr(ord("A") + d - 10)
    return f"({d})"


def format_digits(x: int, p: int, N: int) -> str:
    """x mod p^N as 0.d0d1...d_{N-1}_p with x = sum d_i p^i."""
    if not isinstance(x, int):
        raise NegativeValuation(f"{x} is not a p-adic integer residue")
    x %= p**N
    digits = []
    for _ in range(N):
        x, d = divmod(x, p)
        digits.append(_digit(d))
    return "0." + "".join(digits) + f"_{p}"


def parse_digits(text: str) -> Tuple[int, int, int]:
    """Inverse of format_digits: returns (value, p, N)."""
    body, _, base = text.strip().rpartition("_")
    if not body.startswith("0.") or not base.isdigit():
        raise ValueError(f"not a digit string: {text!r}")
    p = int(base)
    digits: List[int] = []
    rest = body[2:]
    i = 0
    while i < len(rest):
        ch = rest[i]
        if ch == "(":
            j = rest.index(")", i)
            digits.append(int(rest[i + 1: j]))
            i = j + 1
            continue
        digits.append(int(ch) if ch.isdigit() else ord(ch.upper()) - ord("A") + 10)
        i += 1
    if any(d >= p for d in digits):
        raise ValueError(f"digit out of range for base {p}: {text!r}")
    value = sum(d * p**k for k, d in enumerate(digits))
    return value, p, len(digits)


@dataclass(frozen=True)
class SymmetryReport:
    checked: bool
    symmetric: bool
    max_discrepancy: int
    mismatches: Tuple[str, ...] = ()


def galois_symmetry_check(phi: GroupRingElem, inversion: bool) -> SymmetryReport:
    """coefficient(g) == coefficient(g^-1) for all g, when conjugation acts by inversion."""
    if not inversion:
        return SymmetryReport(checked=False, symmetric=True, max_discrepancy=0)
    group = phi.group
    worst = 0
    bad: List[str] = []
    for e in group.elements:
        delta = (phi.coefficient(e) - phi.coefficient(group.neg(e))) % phi.modulus
        delta = min(delta, phi.modulus - delta)
        if delta:
            bad.append(group.element_name(e))
        worst = max(worst, delta)
    return SymmetryReport(checked=True, symmetric=not bad, max_discrepancy=worst, mismatches=tuple(bad))


@dataclass(frozen=True)
class ExpectedTerm:
    elements: Tuple[str, ...]
    digits: str


@dataclass(frozen=True)
class MatchReport:
    matched: bool
    root_choice: Optional[int] = None
    zeta_choice: Optional[int] = None
    automorphism: Optional[Tuple[int, ...]] = None


def matches_expected(phi: GroupRingElem, p: int, N: int, expected: Sequence[ExpectedTerm]) -> bool:
    group = phi.group
    names = {group.element_name(e): e for e in group.elements}
    for term in expected:
        for name in term.elements:
            if name not in names:
                return False
            if format_digits(phi.coefficient(names[name]), p, N) != term.digits:
                return False
    return True


def match_expected(results: Sequence[PhiResult], expected: Sequence[ExpectedTerm]) -> MatchReport:
    """First (embedding choice, automorphism of G) under which the digits agree."""
    for result in results:
        for perm in result.group.automorphisms():
            if matches_expected(result.phi.permuted(perm), result.p, result.N, expected):
                logger.info(
                    "digits matched with root_choice=%d, zeta_choice=%d",
                    result.root_choice, result.zeta_choice,
                )
                return MatchReport(True, result.root_choice, result.zeta_choice, tuple(perm))
    return MatchReport(False)
