from fractions import Fraction
from math import ceil, floor

import pytest

from src.app.arith.charpairs import act, base_pair
from src.app.arith.quadfield import QuadField, ray_unit_generator
from src.app.arith.rayclass import build_ray_class_group, lift_and_kernel
from src.app.arith.shintani import (
    continued_fraction_fan,
    enumerate_parallelogram,
    ideal_coordinates,
    initial_basis_pair,
)
from src.app.core.errors import DependentGenerators
from src.app.utils.literal_utils import parse_ideal


def class_pairs(d, f_literal):
    field = QuadField(d)
    f = parse_ideal(field, f_literal)
    G = build_ray_class_group(field, f)
    G_plus = build_ray_class_group(field, f, with_infinite=True)
    lift, _ = lift_and_kernel(G_plus, G)
    base = base_pair(field, f)
    eps = ray_unit_generator(field, f)
    return [(act(base, lift(c), G_plus), eps) for c in G.group.elements]


def brute_parallelogram(I, tau1, tau2):
    """Points of I in P(tau1, tau2) found by scanning a box of ideal coordinates."""
    (u1, v1), (u2, v2) = ideal_coordinates(I, tau1), ideal_coordinates(I, tau2)
    det = u1 * v2 - u2 * v1
    lo_u = floor(min(0, u1, u2, u1 + u2))
    hi_u = ceil(max(0, u1, u2, u1 + u2))
    lo_v = floor(min(0, v1, v2, v1 + v2))
    hi_v = ceil(max(0, v1, v2, v1 + v2))
    alpha, beta = I.z_basis()
    found = set()
    for u in range(lo_u, hi_u + 1):
        for v in range(lo_v, hi_v + 1):
            lam = Fraction(u * v2 - v * u2) / det
            mu = Fraction(v * u1 - u * v1) / det
            if 0 < lam <= 1 and 0 <= mu < 1:
                found.add(str(alpha * u + beta * v))
    return found


def test_initial_basis_pair_is_admissible(k37):
    field, f = k37
    I = base_pair(field, f).ideal
    x, y = initial_basis_pair(I)
    assert x.is_totally_positive and y.is_totally_positive
    assert x.greater(y, 1)
    (u1, v1), (u2, v2) = ideal_coordinates(I, x), ideal_coordinates(I, y)
    assert abs(u1 * v2 - u2 * v1) == 1


def test_parallelogram_matches_brute_force(k37):
    field, f = k37
    I = base_pair(field, f).ideal
    alpha, beta = I.z_basis()
    tau1, tau2 = alpha * 3 + beta, alpha + beta * 2
    points = enumerate_parallelogram(I, tau1, tau2)
    assert len(points) == 5
    assert {str(x) for x in points} == brute_parallelogram(I, tau1, tau2)
    assert all(I.contains(x) for x in points)


def test_parallelogram_rejects_dependent_generators(k37):
    field, f = k37
    I = base_pair(field, f).ideal
    alpha, _ = I.z_basis()
    with pytest.raises(DependentGenerators):
        enumerate_parallelogram(I, alpha, alpha * 2)


@pytest.mark.parametrize("d, f_literal", [(37, "2"), (89, "P5"), (321, "P2")])
def test_fan_structure(d, f_literal):
    for pair, eps in class_pairs(d, f_literal):
        fan = continued_fraction_fan(pair, eps)
        assert fan.rho[-1] == fan.rho[0] * fan.epsilon
        assert len(fan.points) == len(fan.cones)
        for rho in fan.rho:
            assert rho.is_totally_positive
            assert not pair.kernel_test(rho)
        assert all(b >= 2 for b in fan.partial_quotients)


@pytest.mark.parametrize("d, f_literal", [(37, "2"), (89, "P5"), (321, "P2")])
def test_fan_points_match_parallelograms(d, f_literal):
    for pair, eps in class_pairs(d, f_literal):
        fan = continued_fraction_fan(pair, eps)
        for t, (tau1, tau2) in enumerate(fan.cones):
            listed = {str(x) for x in fan.points[t]}
            assert listed == {str(x) for x in enumerate_parallelogram(pair.ideal, tau1, tau2)}


def cone_coordinates(I, x, tau1, tau2):
    """(l, m) with x = l*tau1 + m*tau2."""
    (u, v) = ideal_coordinates(I, x)
    (u1, v1), (u2, v2) = ideal_coordinates(I, tau1), ideal_coordinates(I, tau2)
    det = u1 * v2 - u2 * v1
    return (u * v2 - v * u2) / det, (v * u1 - u * v1) / det


def in_cone(I, x, tau1, tau2):
    lam, mu = cone_coordinates(I, x, tau1, tau2)
    return lam > 0 and mu >= 0


def containing_cones(I, x, fan):
    return [t for t, (tau1, tau2) in enumerate(fan.cones) if in_cone(I, x, tau1, tau2)]


@pytest.mark.parametrize(
    "d, f_literal", [(37, "2"), (89, "P5"), (172, "P3^2"), (321, "P2"), (401, "P2*P2'")]
)
def test_fan_tiles_the_totally_positive_quadrant(d, f_literal):
    for pair, eps in class_pairs(d, f_literal):
        fan = continued_fraction_fan(pair, eps)
        I = pair.ideal
        alpha, beta = I.z_basis()
        outer = (fan.rho[0], fan.rho[-1])
        translations = [fan.epsilon**k for k in range(-10, 11)]
        for rho in fan.rho[:-1]:
            assert len(containing_cones(I, rho, fan)) == 1
        checked = 0
        for u in range(-8, 9):
            for v in range(-8, 9):
                x = alpha * u + beta * v
                if not x.is_totally_positive:
                    continue
                moved = [x * e for e in translations if in_cone(I, x * e, *outer)]
                assert len(moved) == 1
                assert len(containing_cones(I, moved[0], fan)) == 1
                checked += 1
        assert checked > 20


@pytest.mark.parametrize("d, f_literal", [(37, "2"), (401, "P2*P2'")])
def test_outer_parallelogram_reduces_into_the_fan(d, f_literal):
    for pair, eps in class_pairs(d, f_literal):
        fan = continued_fraction_fan(pair, eps)
        I = pair.ideal
        rho0, rho_last = fan.rho[0], fan.rho[-1]
        index = I.element_index(rho0) * abs(fan.epsilon.b)
        (u1, v1), (u2, v2) = ideal_coordinates(I, rho0), ideal_coordinates(I, rho_last)
        assert abs(u1 * v2 - u2 * v1) == index

        outer = enumerate_parallelogram(I, rho0, rho_last)
        assert len(outer) == index
        listed = [{str(y) for y in pts} for pts in fan.points]
        for x in outer:
            hits = containing_cones(I, x, fan)
            assert len(hits) == 1
            t = hits[0]
            lam, mu = cone_coordinates(I, x, *fan.cones[t])
            reduced = fan.cones[t][0] * (lam - ceil(lam) + 1) + fan.cones[t][1] * (mu - floor(mu))
            assert str(reduced) in listed[t]


def test_fan_point_total_is_not_the_outer_index(k37):
    field, f = k37
    pair = base_pair(field, f)
    fan = continued_fraction_fan(pair, ray_unit_generator(field, f))
    index = pair.ideal.element_index(fan.rho[0]) * abs(fan.epsilon.b)
    assert fan.point_count < index
