import random

import pytest

from src.app.arith.phi import check_hypotheses, zeta_choices
from src.app.arith.quadfield import QuadField, make_padic_embedding
from src.app.arith.rayclass import build_ray_class_group
from src.app.arith.series import CycQuad, apply_U
from src.app.arith.shintani import enumerate_parallelogram
from src.app.arith.zeta import (
    build_F,
    build_Fstar,
    c_explicit,
    c_sequence,
    exact_Z_at_m,
    exact_z_at_m,
    factorial_valuation,
    p_valuation,
    padic_z_at_1,
    padic_Z_at_1,
    precision_plan,
)
from src.app.core.errors import HypothesisViolation
from src.app.services.fan_service import build_fan, resolve_class
from src.app.utils.literal_utils import parse_ideal


def test_cn_first_terms():
    assert list(c_sequence(3, 4).values) == [-3, 3, 0, -9]


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_cn_recurrence_matches_explicit_formula(p):
    table = c_sequence(p, 300)
    for n in range(1, 301):
        assert table[n] == c_explicit(p, n)
        if table[n]:
            assert p_valuation(table[n], p) >= -(-n // (p - 1))


def test_cn_needs_odd_prime():
    with pytest.raises(HypothesisViolation):
        c_sequence(2, 5)


def test_cn_bracket_reduces_the_quotient():
    table = c_sequence(5, 50)
    q = 5**6
    for n in range(1, 51):
        if n % 5:
            assert table.bracket(n, q) * 5 * n % q == table[n] % q


def test_precision_plan():
    plan = precision_plan(3, 24)
    assert plan.M == 63
    assert plan.W == 24
    assert plan.W_guard == 24 + factorial_valuation(63, 3)


def test_precision_plan_grows_with_digits():
    assert precision_plan(7, 10).M < precision_plan(7, 20).M


def test_precision_plan_rejects_zero_digits():
    with pytest.raises(HypothesisViolation):
        precision_plan(3, 0)


# (d, f, p) with p split, prime to f and f_int | p - 1
ADMISSIBLE = [
    (37, "2", 3),
    (37, "2", 7),
    (37, "2", 11),
    (37, "P3", 7),
    (37, "P3'", 7),
    (37, "6", 7),
    (8, "3", 7),
    (5, "2", 11),
]


def random_configuration(seed, primes=None):
    """A class of Cl_f(k) and an embedding drawn from ADMISSIBLE."""
    rng = random.Random(seed)
    d, f_literal, p = rng.choice([c for c in ADMISSIBLE if primes is None or c[2] in primes])
    field = QuadField(d)
    G = build_ray_class_group(field, parse_ideal(field, f_literal), aux_coprime=p)
    label = list(rng.choice(G.group.elements))
    resolved = resolve_class(d, f_literal, label, p)
    f_int = check_hypotheses(resolved.field, resolved.f, p)
    choices = (rng.randrange(2), rng.randrange(zeta_choices(f_int)))
    return resolved, p, f_int, choices, rng


def assert_fan_additivity(seed, primes=None, N=10):
    resolved, p, f_int, (root_choice, zeta_choice), _ = random_configuration(seed, primes)
    fan = build_fan(resolved)
    plan = precision_plan(p, N)
    embedding = make_padic_embedding(
        resolved.field, p, f_int, root_choice, zeta_choice, W=plan.W_guard
    )
    pair = resolved.pair
    whole = padic_Z_at_1(pair, fan, plan, embedding)
    rho0, rho_last = fan.rho[0], fan.rho[-1]
    points = enumerate_parallelogram(pair.ideal, rho0, rho_last)
    single = padic_z_at_1(pair, rho0, rho_last, points, plan, embedding)
    q = p**N
    assert whole == embedding.rational(pair.norm) % q * single % q


def assert_U_turns_F_into_Fstar(seed, primes=None, degree=20, W=10):
    resolved, p, f_int, (root_choice, zeta_choice), rng = random_configuration(seed, primes)
    # V is exact on low degrees only up to p^((M - degree)/(p - 1) - 2)
    M = degree + (W + 2) * (p - 1) + 2
    fan = build_fan(resolved)
    t = rng.randrange(len(fan.cones))
    tau1, tau2 = fan.cones[t]
    embedding = make_padic_embedding(
        resolved.field, p, f_int, root_choice, zeta_choice, W=W + factorial_valuation(M, p)
    )
    pair = resolved.pair
    F = build_F(pair, tau1, tau2, fan.points[t], M, embedding, W=W)
    Fstar = build_Fstar(pair, tau1, tau2, degree, p, embedding, W=W)
    assert apply_U(F, p).truncate(degree).comps == Fstar.comps


@pytest.mark.parametrize("seed", range(4))
def test_fan_additivity_at_three(seed):
    """The fan and the single cone C(rho_0, eps rho_0) give the same value"""
    assert_fan_additivity(seed, primes={3})


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_fan_additivity(seed):
    assert_fan_additivity(seed)


@pytest.mark.parametrize("seed", range(3))
def test_U_turns_F_into_Fstar_at_three(seed):
    assert_U_turns_F_into_Fstar(seed, primes={3})


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(12))
def test_U_turns_F_into_Fstar(seed):
    assert_U_turns_F_into_Fstar(seed)


@pytest.mark.parametrize("d, f_literal", [(37, "2"), (89, "P5")])
@pytest.mark.parametrize("m", [0, -2])
def test_exact_values_are_rational_in_sqrt_d(d, f_literal, m):
    resolved = resolve_class(d, f_literal)
    fan = build_fan(resolved)
    _, sqrt_part = exact_Z_at_m(resolved.pair, fan, m)
    assert not any(sqrt_part)


def test_exact_values_are_galois_equivariant():
    resolved = resolve_class(89, "P5", [1])
    pair = resolved.pair
    ring = CycQuad(pair.f_int, pair.field.d)
    fan = build_fan(resolved)
    base = exact_Z_at_m(pair, fan, -2)
    for s in (2, 3, 4):
        assert ring.galois(base, s) == exact_Z_at_m(pair, fan, -2, galois_exponent=s)


def test_exact_value_needs_non_positive_m():
    resolved = resolve_class(37, "2")
    tau1, tau2 = build_fan(resolved).cones[0]
    with pytest.raises(HypothesisViolation):
        exact_z_at_m(resolved.pair, tau1, tau2, 1)


def test_tp_mode_needs_p():
    resolved = resolve_class(37, "2")
    tau1, tau2 = build_fan(resolved).cones[0]
    with pytest.raises(HypothesisViolation):
        exact_z_at_m(resolved.pair, tau1, tau2, 0, Tp_mode=True)
