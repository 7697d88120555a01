"""
Ray class groups Cl_f(k) and Cl_{f+}(k) of a real quadratic field.

The group is assembled from the exact sequence

    units -> (O/f)^x x signs -> Cl_m(k) -> Cl(k) -> 1

as a finitely presented abelian group: generators are the Schreier generators
of (O/f)^x, the two sign generators (narrow case) and prime ideals generating
the wide class group; the Smith form of the relation matrix gives the
invariant factors and the discrete log.
"""

import logging
from collections import deque
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.app.arith.groupring import FiniteAbelianGroup, GroupRingElem
from src.app.arith.lattice import smith_normal_form
from src.app.arith.quadfield import (
    QuadElem,
    QuadField,
    QuadIdeal,
    class_key,
    factor_ideal,
    principal_generator,
)
from src.app.core.config import get_settings
from src.app.core.errors import InconsistentGroups, NotCoprime

logger = logging.getLogger(__name__)

Label = Tuple[int, ...]
Residue = Tuple[int, int]


class _LocalUnits:
    """(O/f)^x by enumeration, with a Schreier presentation."""

    def __init__(self, field: QuadField, f: QuadIdeal):
        self.field = field
        self.s = int(f.scale)
        self.a = f.a
        self.b = f.b
        self.f_int = self.s * self.a
        self.primes = [P for P, _ in factor_ideal(f)]
        residues = [(x, y) for y in range(self.s) for x in range(self.f_int)]
        self.units = [r for r in residues if self._is_unit(r)]
        self.identity = self.residue(field.one)
        self.generators: List[Residue] = []
        words = {self.identity: ()}
        for u in self.units:
            if u not in words:
                self.generators.append(u)
                words = self._closure()
        self.words: Dict[Residue, Tuple[int, ...]] = words
        k = len(self.generators)
        self.relations = []
        for u, w in words.items():
            for i, g in enumerate(self.generators):
                target = words[self.mul(u, g)]
                row = [w[j] + (1 if j == i else 0) - target[j] for j in range(k)]
                if any(row):
                    self.relations.append(row)

    def _is_unit(self, r: Residue) -> bool:
        x = self.field.elem(r[0], r[1])
        return not any(P.contains(x) for P in self.primes)

    def _closure(self) -> Dict[Residue, Tuple[int, ...]]:
        k = len(self.generators)
        words = {self.identity: tuple([0] * k)}
        queue = deque([self.identity])
        while queue:
            u = queue.popleft()
            for i, g in enumerate(self.generators):
                v = self.mul(u, g)
                if v not in words:
                    w = list(words[u])
                    w[i] += 1
                    words[v] = tuple(w)
                    queue.append(v)
        return words

    def residue(self, x: QuadElem) -> Residue:
        den = x.a.denominator * x.b.denominator
        if gcd(den, self.f_int) != 1:
            raise NotCoprime(f"{x} is not integral at the primes of f")
        u = pow(den, -1, self.f_int) if self.f_int > 1 else 0
        X = int(x.a * den) * u
        Y = int(x.b * den) * u
        k = Y // self.s
        Y -= k * self.s
        X -= k * self.s * self.b
        return X % self.f_int, Y

    def mul(self, r1: Residue, r2: Residue) -> Residue:
        f = self.field
        return self.residue(f.elem(r1[0], r1[1]) * f.elem(r2[0], r2[1]))

    def dlog(self, x: QuadElem) -> Tuple[int, ...]:
        r = self.residue(x)
        if r not in self.words:
            raise NotCoprime(f"{x} is not a unit modulo f")
        return self.words[r]


class RayClassGroup:
    """
    Cl_f(k) (with_infinite False) or Cl_{f+}(k) (with_infinite True).

    Labels are exponent vectors over `orders`.
    """

    def __init__(
        self,
        field: QuadField,
        f: QuadIdeal,
        with_infinite: bool = False,
        aux_coprime: int = 1,
        injection: Optional[Dict] = None,
    ):
        if not f.is_integral:
            raise NotCoprime("the modulus must be an integral ideal")
        settings = get_settings()
        self.field = field
        self.f = f
        self.with_infinite = with_infinite
        self.aux = aux_coprime
        self.f_norm = int(f.norm)
        self.f_primes = [P for P, _ in factor_ideal(f)]
        self._scan_bound = settings.representative_scan_bound
        self._local = _LocalUnits(field, f)
        self._k = len(self._local.generators)
        self._n_signs = 2 if with_infinite else 0
        self._build_class_group(settings.class_group_generator_bound)
        self._assemble()
        self._rep_cache: Dict[int, Dict[Label, QuadIdeal]] = {}
        self._relabel: Optional[Dict[Label, Label]] = None
        if injection:
            self._inject(injection)
        logger.info(
            "ray class group of Q(sqrt(%d)) mod %s%s: orders %s",
            field.d,
            f,
            "+" if with_infinite else "",
            self.orders,
        )

    # presentation

    def _psi(self, x: QuadElem) -> List[int]:
        """Local-and-sign coordinates of an element coprime to f."""
        vec = list(self._local.dlog(x))
        if self.with_infinite:
            vec += [0 if x.sign(1) > 0 else 1, 0 if x.sign(2) > 0 else 1]
        return vec

    def _usable(self, P: QuadIdeal) -> bool:
        ell = int(P.min_integer)
        return gcd(ell, self.f_norm * self.aux) == 1

    def _build_class_group(self, bound: int) -> None:
        field = self.field
        minkowski = isqrt(field.d) // 2 + 1
        targets = {class_key(P) for P in field.prime_ideals(minkowski)}
        identity_key = class_key(field.unit_ideal())
        self._class_gens: List[QuadIdeal] = []
        self._classes: Dict[Tuple[int, int], Tuple[Tuple[int, ...], QuadIdeal]] = {
            identity_key: ((), field.unit_ideal())
        }
        for P in field.prime_ideals(bound):
            if targets <= set(self._classes):
                break
            if not self._usable(P) or class_key(P) in self._classes:
                continue
            self._class_gens.append(P)
            self._classes = self._class_closure()
        else:
            if not targets <= set(self._classes):
                raise InconsistentGroups("class group generators not found below the search bound")
        self._t = len(self._class_gens)
        logger.debug("wide class number %d", len(self._classes))

    def _class_closure(self) -> Dict[Tuple[int, int], Tuple[Tuple[int, ...], QuadIdeal]]:
        field = self.field
        t = len(self._class_gens)
        start = class_key(field.unit_ideal())
        classes = {start: (tuple([0] * t), field.unit_ideal())}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            word, ideal = classes[c]
            for i, P in enumerate(self._class_gens):
                J = ideal * P
                key = class_key(J)
                if key not in classes:
                    w = list(word)
                    w[i] += 1
                    classes[key] = (tuple(w), J)
                    queue.append(key)
        return classes

    def _assemble(self) -> None:
        k, m, t = self._k, self._n_signs, self._t
        width = k + m + t
        rows: List[List[int]] = []
        for rel in self._local.relations:
            rows.append(list(rel) + [0] * (m + t))
        for i in range(m):
            rows.append([0] * (k + i) + [2] + [0] * (m - i - 1 + t))
        for u in (self.field.elem(-1), self.field.fundamental_unit):
            rows.append(self._psi(u) + [0] * t)
        for key, (word, ideal) in self._classes.items():
            for i, P in enumerate(self._class_gens):
                J = ideal * P
                word_next, ideal_next = self._classes[class_key(J)]
                beta = principal_generator(J * ideal_next.conj())
                alpha = beta / ideal_next.norm
                psi = self._psi(alpha)
                rows.append(
                    [-x for x in psi]
                    + [word[j] + (1 if j == i else 0) - word_next[j] for j in range(t)]
                )
        diag, V, _ = smith_normal_form(rows, width)
        if any(x == 0 for x in diag):
            raise InconsistentGroups("relation matrix does not present a finite group")
        self._V = V
        self._active = [i for i, x in enumerate(diag) if x > 1]
        self._computed_orders = tuple(diag[i] for i in self._active)
        self.orders: Tuple[int, ...] = self._computed_orders

    # discrete log

    def _raw_vector(self, I: QuadIdeal) -> List[int]:
        word, P_c = self._classes[class_key(I)]
        beta = principal_generator(I * P_c.conj())
        psi_beta = self._psi(beta)
        psi_norm = self._psi(self.field.elem(P_c.norm))
        return [x - y for x, y in zip(psi_beta, psi_norm)] + list(word)

    def _computed_label(self, vec: Sequence[int]) -> Label:
        width = len(vec)
        y = [sum(vec[r] * self._V[r][c] for r in range(width)) for c in range(width)]
        return tuple(y[i] % n for i, n in zip(self._active, self._computed_orders))

    def is_coprime(self, I: QuadIdeal) -> bool:
        return all(I.valuation(P) == 0 for P in self.f_primes)

    def class_of(self, I: QuadIdeal) -> Label:
        if not self.is_coprime(I):
            raise NotCoprime(f"{I} is not coprime to the modulus")
        if I.is_integral:
            label = self._computed_label(self._raw_vector(I))
        else:
            label = tuple(0 for _ in self._computed_orders)
            for P, e in factor_ideal(I):
                part = self._computed_label(self._raw_vector(P))
                label = tuple((x + e * y) % n for x, y, n in zip(label, part, self._computed_orders))
        if self._relabel is not None:
            return self._relabel[label]
        return label

    @property
    def group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.orders)

    @property
    def order(self) -> int:
        return self.group.order

    # injection

    def _inject(self, injection: Dict) -> None:
        orders = tuple(int(n) for n in injection["orders"])
        gens: List[QuadIdeal] = injection["generators"]
        if len(orders) != len(gens):
            raise InconsistentGroups("one generator per declared cyclic order is required")
        computed = FiniteAbelianGroup(self._computed_orders)
        declared = FiniteAbelianGroup(orders)
        if computed.order != declared.order:
            raise InconsistentGroups(
                f"declared order {declared.order} but computed {computed.order}"
            )
        logs = [self.class_of(g) for g in gens]
        relabel: Dict[Label, Label] = {}
        for e in declared.elements:
            image = computed.identity
            for x, lg in zip(e, logs):
                image = computed.add(image, computed.scale(lg, x))
            relabel[image] = e
        if len(relabel) != computed.order:
            raise InconsistentGroups("injected generators do not generate the group freely")
        for lg, n in zip(logs, orders):
            if computed.scale(lg, n) != computed.identity:
                raise InconsistentGroups("injected generator order does not match")
        self._relabel = relabel
        self.orders = orders

    # representatives

    def representatives(self, coprime_to: int = 1) -> Dict[Label, QuadIdeal]:
        """Least-norm prime (O for the identity) in every class, coprime to f and coprime_to."""
        if coprime_to in self._rep_cache:
            return self._rep_cache[coprime_to]
        group = self.group
        reps: Dict[Label, QuadIdeal] = {group.identity: self.field.unit_ideal()}
        avoid = self.f_norm * coprime_to
        for P in self.field.prime_ideals(self._scan_bound):
            if len(reps) == group.order:
                break
            if gcd(int(P.min_integer), avoid) != 1:
                continue
            label = self.class_of(P)
            if label not in reps:
                reps[label] = P
        if len(reps) != group.order:
            raise InconsistentGroups("representative scan bound exhausted")
        self._rep_cache[coprime_to] = reps
        return reps

    def representative(self, label: Sequence[int], coprime_to: int = 1) -> QuadIdeal:
        return self.representatives(coprime_to)[self.group.reduce(label)]

    # Galois action and Euler factors

    def conjugation_action(self) -> Dict[Label, Label]:
        if self.f.conj() != self.f:
            raise InconsistentGroups("the modulus is not stable under conjugation")
        return {c: self.class_of(rep.conj()) for c, rep in self.representatives().items()}

    def acts_by_inversion(self) -> bool:
        try:
            action = self.conjugation_action()
        except InconsistentGroups:
            return False
        group = self.group
        return all(action[c] == group.neg(c) for c in group.elements)

    def euler_factor(self, p: int) -> GroupRingElem:
        """(1 - p^-1 sigma_P1)(1 - p^-1 sigma_P2) over the primes above p."""
        group = self.group
        result = GroupRingElem.basis(group, group.identity)
        for P in self.field.prime_ideals_above(p):
            sigma = GroupRingElem.basis(group, self.class_of(P))
            result = result * (GroupRingElem.basis(group, group.identity) - sigma.scalar(Fraction(1, p)))
        return result


def build_ray_class_group(
    field: QuadField,
    f: QuadIdeal,
    with_infinite: bool = False,
    aux_coprime: int = 1,
    injection: Optional[Dict] = None,
) -> RayClassGroup:
    return RayClassGroup(field, f, with_infinite, aux_coprime, injection)


def class_of(group: RayClassGroup, I: QuadIdeal) -> Label:
    return group.class_of(I)


def representative(group: RayClassGroup, label: Sequence[int], coprime_to: int = 1) -> QuadIdeal:
    return group.representative(label, coprime_to)


def lift_and_kernel(
    group_fplus: RayClassGroup, group_f: RayClassGroup
) -> Tuple[Callable[[Sequence[int]], Label], int]:
    """A section of Cl_{f+} -> Cl_f and the order of its kernel."""
    if group_fplus.f != group_f.f:
        raise InconsistentGroups("groups have different moduli")
    big, small = group_fplus.order, group_f.order
    if big % small:
        raise InconsistentGroups(f"|Cl_f+| = {big} is not a multiple of |Cl_f| = {small}")
    aux = group_f.aux * group_fplus.aux

    def lift(label: Sequence[int]) -> Label:
        return group_fplus.class_of(group_f.representative(label, aux))

    return lift, big // small
