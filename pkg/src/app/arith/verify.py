"""
Verification of the rank-two statement on numerical data.

Solves A * (4/sqrt(d) R(gamma)) = Phi_{f,empty}(1) on the [S,2] part of QG,
reconstructs A as a rational group-ring element, and measures eta_f = A gamma
against a model of the unit wedge lattice: the isotypic wedge lattice when
unit data is available, otherwise the cyclic module ZG gamma.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import expjpi, mp, mpf
from sympy import factorint, totient

from src.app.arith.groupring import REAL, FiniteAbelianGroup, GroupRingElem
from src.app.arith.lattice import Lattice, solve_rational
from src.app.arith.quadfield import QuadField, QuadIdeal, is_prime_power
from src.app.arith.series import Cyc, CyclotomicField
from src.app.arith.units import UnitBasis, act_on_exponents
from src.app.core.config import get_settings
from src.app.core.errors import (
    InconsistentDimensions,
    InconsistentGroups,
    PadicStarkError,
    ReconstructionFailed,
    SingularRegulator,
)

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]
Vector = Tuple[Fraction, ...]

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def _mobius(n: int) -> int:
    factors = factorint(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def ramanujan_sum(d: int, k: int) -> int:
    """Sum of zeta^(s k) over the primitive d-th roots of unity zeta^s."""
    g = gcd(d, k)
    m = d // g
    return _mobius(m) * int(totient(d)) // int(totient(m))


@dataclass(frozen=True)
class RationalClass:
    index: int
    character: Element
    order: int
    members: Tuple[Element, ...]


class CharacterTable:
    """
    Characters of G as exponent vectors a, chi_a(g) = exp(2 pi i sum a_j g_j / n_j),
    grouped into Galois-conjugacy classes.
    """

    def __init__(self, group: FiniteAbelianGroup):
        self.group = group
        self.characters: List[Element] = list(group.elements)
        self.classes = self._rational_classes()
        self._class_index = {chi: c.index for c in self.classes for chi in c.members}
        self._fields: Dict[int, CyclotomicField] = {}

    def _rational_classes(self) -> List[RationalClass]:
        seen = set()
        out: List[RationalClass] = []
        for chi in self.characters:
            if chi in seen:
                continue
            d = self.group.element_order(chi)
            members = sorted({self.group.scale(chi, s) for s in range(1, d + 1) if gcd(s, d) == 1})
            seen.update(members)
            out.append(RationalClass(len(out), chi, d, tuple(members)))
        return out

    def cyclotomic(self, d: int) -> CyclotomicField:
        if d not in self._fields:
            self._fields[d] = CyclotomicField(d)
        return self._fields[d]

    def order(self, chi: Sequence[int]) -> int:
        return self.group.element_order(chi)

    def exponent(self, chi: Sequence[int], g: Sequence[int]) -> int:
        """k with chi(g) = zeta_d^k, d the order of chi."""
        d = self.order(chi)
        return sum((a * d // n) * x for a, x, n in zip(chi, g, self.group.orders)) % d

    def class_of(self, chi: Sequence[int]) -> RationalClass:
        return self.classes[self._class_index[self.group.reduce(chi)]]

    def value(self, chi: Sequence[int], g: Sequence[int]):
        return expjpi(mpf(2 * self.exponent(chi, g)) / self.order(chi))

    def transform(self, x: GroupRingElem, chi: Sequence[int]):
        """chi(x) = sum_g x_g chi(g), numerically."""
        return sum(
            (mpf(Fraction(c).numerator) / Fraction(c).denominator if x.kind != REAL else c) * self.value(chi, e)
            for e, c in zip(self.group.elements, x.coeffs)
        )

    def exact_value(self, x: GroupRingElem, chi: Sequence[int]) -> Cyc:
        """chi(x) in Q(mu_d) for a rational element x."""
        K = self.cyclotomic(self.order(chi))
        return K.evaluate([(self.exponent(chi, e), c) for e, c in zip(self.group.elements, x.coeffs)])

    def idempotent(self, cls: RationalClass) -> GroupRingElem:
        """e_X = |G|^-1 sum_g (sum_{chi in X} chi(g^-1)) g."""
        n = self.group.order
        coeffs = tuple(
            Fraction(ramanujan_sum(cls.order, self.exponent(cls.character, e)), n)
            for e in self.group.elements
        )
        return GroupRingElem(self.group, coeffs)


@dataclass(frozen=True)
class RankData:
    table: CharacterTable
    in_S2: Tuple[bool, ...]
    ranks: Tuple[Optional[int], ...]

    @property
    def g(self) -> int:
        return self.table.group.order

    @property
    def e_S2(self) -> GroupRingElem:
        result = GroupRingElem.zero(self.table.group)
        for cls in self.table.classes:
            if self.in_S2[cls.index]:
                result = result + self.table.idempotent(cls)
        return result

    @property
    def e_S2_tilde(self) -> GroupRingElem:
        return self.e_S2.scalar(self.g)

    @property
    def e_Sgt2_tilde(self) -> GroupRingElem:
        group = self.table.group
        return GroupRingElem.basis(group, group.identity).scalar(self.g) - self.e_S2_tilde

    def character_in_S2(self, chi: Sequence[int]) -> bool:
        return self.in_S2[self.table.class_of(chi).index]


def rank_data_from_idempotent(table: CharacterTable, e_gt2: GroupRingElem) -> RankData:
    """Classes where chi(e~_{S,>2}) vanishes are exactly those with r(S, chi) = 2."""
    in_S2 = tuple(not any(table.exact_value(e_gt2, cls.character)) for cls in table.classes)
    ranks = tuple(2 if flag else None for flag in in_S2)
    data = RankData(table, in_S2, ranks)
    if data.e_Sgt2_tilde != GroupRingElem(table.group, tuple(Fraction(c) for c in e_gt2.coeffs)):
        raise InconsistentGroups("the idempotent is not |G| times a sum of rational idempotents")
    return data


def ranks_from_decomposition_groups(
    table: CharacterTable, decomposition_groups: Sequence[Sequence[Sequence[int]]]
) -> RankData:
    """
    r(S, chi0) = 1 + #{q | f}; r(S, chi) = 2 + #{q | f : chi trivial on G(q)} otherwise.
    """
    n_q = len(decomposition_groups)
    ranks: List[int] = []
    for cls in table.classes:
        chi = cls.character
        if chi == table.group.identity:
            ranks.append(1 + n_q)
            continue
        trivial = sum(
            1 for gens in decomposition_groups if all(table.exponent(chi, h) == 0 for h in gens)
        )
        ranks.append(2 + trivial)
    return RankData(table, tuple(r == 2 for r in ranks), tuple(ranks))


def rational_reconstruct(x, bound: int) -> Tuple[Fraction, object]:
    """Continued-fraction best approximation with denominator <= bound, and its residual."""
    man, exp = x.man_exp
    exact = Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))
    best = exact.limit_denominator(bound)
    residual = abs(x - mpf(best.numerator) / best.denominator)
    return best, residual


@dataclass(frozen=True)
class SolveResult:
    A: GroupRingElem
    approximation: Tuple
    residual: object
    bound: int


def real_element(group: FiniteAbelianGroup, values: Sequence, dps: int) -> GroupRingElem:
    """A real group-ring element from decimal strings, at `dps` digits."""
    with mp.workdps(dps):
        coeffs = tuple(mpf(str(v)) for v in values)
    return GroupRingElem(group, coeffs, REAL)


def solve_A(
    Rgamma: GroupRingElem,
    Phi0: GroupRingElem,
    ranks: RankData,
    digits: int,
    b: int = 1,
    exponent: Optional[int] = None,
) -> SolveResult:
    """
    Character-wise A_chi = Phi0_chi / Rgamma_chi on r(S, chi) = 2 and 0
    elsewhere, transformed back and rationally reconstructed with
    denominators bounded by 2 b g^e.
    """
    settings = get_settings()
    e = settings.reconstruction_exponent if exponent is None else exponent
    table = ranks.table
    group = table.group
    bound = 2 * b * group.order**e
    with mp.workdps(digits + settings.reconstruction_guard_digits):
        tol = mpf(10) ** (-(digits // 2))
        A_hat = {}
        for chi in table.characters:
            if not ranks.character_in_S2(chi):
                A_hat[chi] = mpf(0)
                continue
            r = table.transform(Rgamma, chi)
            if abs(r) < tol:
                raise SingularRegulator(f"R(gamma) vanishes at the character {chi}")
            A_hat[chi] = table.transform(Phi0, chi) / r
        approx = []
        for g in group.elements:
            s = sum(A_hat[chi] * table.value(chi, g).conjugate() for chi in table.characters)
            approx.append((s / group.order).real)
        rec = [rational_reconstruct(a, bound) for a in approx]
        residual = max(r for _, r in rec)
        A = GroupRingElem(group, tuple(c for c, _ in rec))
        if residual > tol or any(bound % c.denominator for c, _ in rec):
            raise ReconstructionFailed(
                f"no rational solution with denominator dividing {bound}", best=A.rational_str()
            )
    logger.info("A = %s (residual %s)", A.rational_str(), mp.nstr(residual, 5))
    return SolveResult(A=A, approximation=tuple(approx), residual=residual, bound=bound)


def hnf(matrix: Sequence[Sequence]) -> Lattice:
    return Lattice.from_generators(matrix, len(matrix[0]))


def membership(L: Lattice, v: Sequence) -> Tuple[bool, Optional[int]]:
    return L.contains(v), L.denominator(v)


def index(L1: Lattice, L2: Lattice) -> Fraction:
    """|L2 : L1|."""
    return L1.index_in(L2)


class GroupRingModel:
    """The lattice ZG gamma realised as ZG e_{S,2} inside QG."""

    kind = "group_ring"

    def __init__(self, ranks: RankData):
        self.group = ranks.table.group
        self.dimension = self.group.order
        self.gamma: Vector = tuple(Fraction(c) for c in ranks.e_S2.coeffs)
        gens = [self.act(GroupRingElem.basis(self.group, g), self.gamma) for g in self.group.elements]
        self.lattice = Lattice.from_generators(gens, self.dimension)

    def act(self, x: GroupRingElem, v: Sequence) -> Vector:
        y = GroupRingElem(self.group, tuple(Fraction(c) for c in v))
        return tuple((x * y).coeffs)


class IsotypicModel:
    """
    The wedge lattice in the basis {sigma_i^k v_{i,j} ^ v_{i,j'}}: one block per
    rational class X_i and pair j < j', each block a copy of Q(X_i). Classes
    with r = 2 come first.
    """

    kind = "wedge"

    def __init__(
        self,
        ranks: RankData,
        class_vectors: Dict[Element, Sequence[Sequence]],
        gamma_wedges: Sequence[Tuple[Sequence, Sequence]],
        unit_coordinates: Optional[List[Dict[int, List[Cyc]]]] = None,
        action: Optional[List[List[List[int]]]] = None,
    ):
        self.ranks = ranks
        self.table = ranks.table
        self.group = self.table.group
        self.action = action
        self.class_vectors = {
            self.table.class_of(chi).index: [tuple(Fraction(x) for x in v) for v in vecs]
            for chi, vecs in class_vectors.items()
        }
        if action is not None:
            self._check_isotypic()
        ordered = sorted(self.table.classes, key=lambda c: (not ranks.in_S2[c.index], c.index))
        self.blocks: List[Tuple[int, int, int]] = []
        for cls in ordered:
            r = len(self.class_vectors.get(cls.index, []))
            for j in range(r):
                for j2 in range(j + 1, r):
                    self.blocks.append((cls.index, j, j2))
        self.dimension = sum(self._K(i).phi for i, _, _ in self.blocks)
        self.n_units = len(next(iter(self.class_vectors.values()))[0]) if self.class_vectors else 0
        if unit_coordinates is None:
            unit_coordinates = [
                self.isotypic_coordinates(tuple(Fraction(int(i == l)) for i in range(self.n_units)))
                for l in range(self.n_units)
            ]
        self.units = unit_coordinates
        rows = wedge_expand(self, self.units)
        self.lattice = Lattice.from_generators(rows, self.dimension)
        gamma = [0] * self.dimension
        for a, b in gamma_wedges:
            w = self.wedge(self.isotypic_coordinates(a), self.isotypic_coordinates(b))
            gamma = [x + y for x, y in zip(gamma, w)]
        self.gamma: Vector = tuple(Fraction(x) for x in gamma)

    def _K(self, class_index: int) -> CyclotomicField:
        return self.table.cyclotomic(self.table.classes[class_index].order)

    def _sigma(self, class_index: int) -> Element:
        """An element of G on which the class character is zeta_d itself."""
        cls = self.table.classes[class_index]
        return next(g for g in self.group.elements if self.table.exponent(cls.character, g) == 1 % cls.order)

    def _check_isotypic(self) -> None:
        for i, vecs in self.class_vectors.items():
            e = self.table.idempotent(self.table.classes[i])
            for v in vecs:
                image = [Fraction(0)] * len(v)
                for g, c in zip(self.group.elements, e.coeffs):
                    if c:
                        image = [x + c * y for x, y in zip(image, act_on_exponents(self.action, g, v))]
                if tuple(image) != v:
                    raise InconsistentDimensions(f"isotypic vector {list(map(str, v))} is not fixed by its idempotent")

    def isotypic_coordinates(self, vector: Sequence) -> Dict[int, List[Cyc]]:
        """Coordinates of a unit vector in the basis {sigma_i^k v_{i,j}}, read as elements of Q(X_i)."""
        basis = []
        owners = []
        for i, vecs in sorted(self.class_vectors.items()):
            phi = self._K(i).phi
            if phi > 1 and self.action is None:
                raise InconsistentDimensions("characters of order > 2 need the Galois action on the units")
            sigma = self._sigma(i) if phi > 1 else None
            for j, v in enumerate(vecs):
                w = v
                for k in range(phi):
                    basis.append(w)
                    owners.append((i, j, k))
                    if k + 1 < phi:
                        w = act_on_exponents(self.action, sigma, w)
        if len(basis) != len(vector) or any(len(v) != len(vector) for v in basis):
            raise InconsistentDimensions(
                f"{len(basis)} isotypic vectors do not form a basis of a {len(vector)}-dimensional space"
            )
        coords = solve_rational(basis, vector)
        if coords is None:
            raise InconsistentDimensions("isotypic vectors do not span the unit space")
        terms: Dict[Tuple[int, int], List[Tuple[int, Fraction]]] = {}
        for c, (i, j, k) in zip(coords, owners):
            terms.setdefault((i, j), []).append((k, c))
        return {
            i: [self._K(i).evaluate(terms[(i, j)]) for j in range(len(vecs))]
            for i, vecs in self.class_vectors.items()
        }

    def wedge(self, a: Dict[int, List[Cyc]], b: Dict[int, List[Cyc]]) -> Vector:
        out: List[Fraction] = []
        for i, j, j2 in self.blocks:
            K = self._K(i)
            out.extend(K.sub(K.mul(a[i][j], b[i][j2]), K.mul(a[i][j2], b[i][j])))
        return tuple(out)

    def act(self, x: GroupRingElem, v: Sequence) -> Vector:
        images: Dict[int, Cyc] = {}
        out: List[Fraction] = []
        pos = 0
        for i, _, _ in self.blocks:
            K = self._K(i)
            if i not in images:
                chi = self.table.classes[i].character
                images[i] = K.evaluate(
                    [(self.table.exponent(chi, e), c) for e, c in zip(self.group.elements, x.coeffs)]
                )
            chunk = tuple(Fraction(c) for c in v[pos: pos + K.phi])
            out.extend(K.mul(images[i], chunk))
            pos += K.phi
        return tuple(out)


def wedge_expand(model: IsotypicModel, units: Sequence[Dict[int, List[Cyc]]]) -> List[Vector]:
    """Rows g (u_l ^ u_l') for every g in G and l < l'."""
    rows: List[Vector] = []
    for l in range(len(units)):
        for l2 in range(l + 1, len(units)):
            w = model.wedge(units[l], units[l2])
            if not any(w):
                continue
            for g in model.group.elements:
                rows.append(model.act(GroupRingElem.basis(model.group, g), w))
    if not rows:
        raise InconsistentDimensions("the unit wedges span nothing")
    return rows


def project_S2_lattice(L: Lattice, ranks: RankData, model) -> Lattice:
    """L intersected with the kernel of e~_{S,>2}."""
    e = ranks.e_Sgt2_tilde
    if e.is_zero():
        return L
    n = model.dimension
    matrix = [model.act(e, tuple(Fraction(int(i == j)) for j in range(n))) for i in range(n)]
    return L.kernel_sublattice(matrix)


@dataclass
class VerificationInput:
    number_field: QuadField
    f: QuadIdeal
    group: FiniteAbelianGroup
    Rgamma: GroupRingElem
    Phi0: GroupRingElem
    digits: int
    e_gt2: Optional[GroupRingElem] = None
    decomposition_groups: Optional[List[List[Element]]] = None
    gamma_index: int = 1
    isotypic_vectors: Optional[Dict[Element, List[List[int]]]] = None
    gamma_wedges: Optional[List[Tuple[List[int], List[int]]]] = None
    unit_basis: Optional[UnitBasis] = None
    expected_A: Optional[GroupRingElem] = None
    expected_d_f: Optional[int] = None
    expected_d_f_sigma: Optional[List[int]] = None
    expected_index: Optional[int] = None
    expected_prime_power: Optional[bool] = None


@dataclass
class VerificationReport:
    A: Optional[GroupRingElem] = None
    residual: Optional[str] = None
    bound: Optional[int] = None
    model: Optional[str] = None
    upper_bound: bool = False
    gamma_index: Optional[Fraction] = None
    d_f: Optional[int] = None
    d_f_sigma: List[int] = field(default_factory=list)
    index_eta: Optional[Fraction] = None
    prime_power: Optional[bool] = None
    clauses: Dict[str, str] = field(default_factory=dict)
    expected: Dict[str, bool] = field(default_factory=dict)
    errors: Dict[str, Dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.errors and FAIL not in self.clauses.values() and all(self.expected.values())


def _rank_data(data: VerificationInput, table: CharacterTable) -> RankData:
    if data.decomposition_groups is not None:
        return ranks_from_decomposition_groups(table, data.decomposition_groups)
    e_gt2 = data.e_gt2 if data.e_gt2 is not None else GroupRingElem.zero(data.group)
    return rank_data_from_idempotent(table, e_gt2)


def _build_model(data: VerificationInput, ranks: RankData):
    if data.isotypic_vectors and data.gamma_wedges:
        if data.unit_basis is not None:
            action = data.unit_basis.action(data.group.orders)
            return IsotypicModel(ranks, data.isotypic_vectors, data.gamma_wedges, action=action)
        if all(c.order <= 2 for c in ranks.table.classes):
            return IsotypicModel(ranks, data.isotypic_vectors, data.gamma_wedges)
    return GroupRingModel(ranks)


def check_conjecture_parts(data: VerificationInput) -> VerificationReport:
    """
    Runs every stage and records a verdict per clause; a failing stage is
    recorded under `errors` and the stages depending on it are skipped.
    """
    settings = get_settings()
    report = VerificationReport()
    table = CharacterTable(data.group)
    g = data.group.order
    g_e = g**settings.reconstruction_exponent
    report.prime_power = is_prime_power(data.f)

    try:
        ranks = _rank_data(data, table)
        solved = solve_A(data.Rgamma, data.Phi0, ranks, data.digits, b=data.gamma_index)
    except PadicStarkError as exc:
        report.errors["solve"] = exc.to_dict()
        return report
    report.A = solved.A
    report.bound = solved.bound
    report.residual = mp.nstr(solved.residual, 5)
    report.clauses["existence"] = PASS

    try:
        model = _build_model(data, ranks)
        L = project_S2_lattice(model.lattice, ranks, model)
    except PadicStarkError as exc:
        report.errors["lattice"] = exc.to_dict()
        return report
    report.model = model.kind
    report.upper_bound = model.kind == GroupRingModel.kind and data.gamma_index > 1
    gamma_gens = [model.act(GroupRingElem.basis(data.group, e), model.gamma) for e in data.group.elements]
    try:
        report.gamma_index = Lattice.from_generators(gamma_gens, model.dimension).index_in(L)
    except PadicStarkError as exc:
        report.errors["gamma_index"] = exc.to_dict()

    eta = model.act(solved.A, model.gamma)
    d_f = L.denominator(eta)
    if d_f is None:
        report.errors["d_f"] = InconsistentDimensions("eta_f lies outside the lattice span").to_dict()
        return report
    report.d_f = d_f
    identity = GroupRingElem.basis(data.group, data.group.identity)
    for j in range(len(data.group.orders)):
        gen = tuple(int(i == j) for i in range(len(data.group.orders)))
        x = GroupRingElem.basis(data.group, gen) - identity
        report.d_f_sigma.append(L.denominator(model.act(x, eta)))

    eta_gens = [model.act(GroupRingElem.basis(data.group, e), eta) for e in data.group.elements]
    try:
        report.index_eta = Lattice.from_generators(eta_gens, model.dimension).index_in(
            L.scaled(Fraction(1, d_f))
        )
    except PadicStarkError as exc:
        report.errors["index"] = exc.to_dict()

    limit = 2 * g_e if report.prime_power else g_e
    verdict = PASS if limit % d_f == 0 else FAIL
    if verdict == FAIL and report.upper_bound:
        verdict = INCONCLUSIVE
    report.clauses["denominator"] = verdict
    sigma_ok = all(g_e % d == 0 for d in report.d_f_sigma)
    report.clauses["sigma_denominator"] = (
        PASS if sigma_ok else (INCONCLUSIVE if report.upper_bound else FAIL)
    )
    _compare_expected(data, report, ranks)
    logger.info(
        "verification: d_f=%s, d_f_sigma=%s, index=%s, clauses=%s",
        report.d_f, report.d_f_sigma, report.index_eta, report.clauses,
    )
    return report


def _compare_expected(data: VerificationInput, report: VerificationReport, ranks: RankData) -> None:
    if data.expected_A is not None:
        # compared on the [S,2] part
        report.expected["A"] = report.A == ranks.e_S2 * data.expected_A
    if data.expected_prime_power is not None:
        report.expected["prime_power"] = report.prime_power == data.expected_prime_power
    if data.expected_d_f is not None:
        if report.upper_bound:
            # only divisibility constraints are available relative to ZG gamma
            report.expected["d_f"] = (
                report.d_f % data.expected_d_f == 0
                and (data.gamma_index * data.expected_d_f) % report.d_f == 0
            )
        else:
            report.expected["d_f"] = report.d_f == data.expected_d_f
    if data.expected_d_f_sigma is not None and not report.upper_bound:
        report.expected["d_f_sigma"] = report.d_f_sigma == list(data.expected_d_f_sigma)
    if data.expected_index is not None and not report.upper_bound and report.index_eta is not None:
        report.expected["index"] = report.index_eta == data.expected_index
