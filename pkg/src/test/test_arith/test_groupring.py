from fractions import Fraction

import pytest

from src.app.arith.groupring import PADIC, FiniteAbelianGroup, GroupRingElem
from src.app.core.errors import InconsistentGroups


def test_group_basics():
    G = FiniteAbelianGroup((2, 4))
    assert G.order == 8
    assert G.exponent == 4
    assert G.elements[0] == G.identity
    assert G.element_order((1, 2)) == 2
    assert G.add((1, 3), (1, 2)) == (0, 1)
    assert G.neg((1, 1)) == (1, 3)


def test_invalid_orders():
    with pytest.raises(InconsistentGroups):
        FiniteAbelianGroup((0, 2))


@pytest.mark.parametrize(
    "orders, element, name",
    [
        ((3,), (0,), "1"),
        ((3,), (1,), "σ"),
        ((3,), (2,), "σ²"),
        ((2, 2), (1, 1), "σ1σ2"),
        ((4, 2), (3, 1), "σ1³σ2"),
    ],
)
def test_element_names_round_trip(orders, element, name):
    G = FiniteAbelianGroup(orders)
    assert G.element_name(element) == name
    assert G.parse_element(name) == element


def test_parse_ascii_names():
    G = FiniteAbelianGroup((4, 2))
    assert G.parse_element("s1^2s2") == (2, 1)
    assert G.parse_element("σ1 * σ1") == (2, 0)
    with pytest.raises(InconsistentGroups):
        G.parse_element("τ")
    with pytest.raises(InconsistentGroups):
        G.parse_element("σ")


@pytest.mark.parametrize("orders, count", [((3,), 2), ((4,), 2), ((2, 2), 6), ((5,), 4), ((4, 2), 8)])
def test_automorphism_counts(orders, count):
    G = FiniteAbelianGroup(orders)
    autos = G.automorphisms()
    assert len(autos) == count
    assert list(range(G.order)) in autos


def test_group_ring_product_and_involution():
    G = FiniteAbelianGroup((3,))
    s = GroupRingElem.basis(G, (1,))
    one = GroupRingElem.basis(G, (0,))
    assert s * s * s == one
    x = one + s.scalar(2)
    assert x.involution().coefficient((2,)) == 2
    assert (x * x.involution()).coefficient((0,)) == 5
    assert x.augmentation() == 3


def test_idempotent():
    G = FiniteAbelianGroup((3,))
    e = GroupRingElem.from_dict(G, {g: Fraction(1, 3) for g in G.elements})
    assert e * e == e


def test_padic_coefficients_are_reduced():
    G = FiniteAbelianGroup((2,))
    x = GroupRingElem.from_dict(G, {(0,): 10, (1,): -1}, kind=PADIC, modulus=9)
    assert x.coeffs == (1, 8)


def test_mixed_rings_rejected():
    G = FiniteAbelianGroup((2,))
    with pytest.raises(InconsistentGroups):
        GroupRingElem.zero(G) + GroupRingElem.zero(G, kind=PADIC, modulus=9)


def test_sigma_sum_combines_equal_coefficients():
    G = FiniteAbelianGroup((3,))
    x = GroupRingElem.from_dict(G, {(0,): 5, (1,): 7, (2,): 7})
    assert x.sigma_sum() == "5 + 7(σ+σ²)"


def test_rational_str():
    G = FiniteAbelianGroup((3,))
    A = GroupRingElem.from_dict(
        G, {(0,): Fraction(1, 2), (1,): Fraction(-1, 2), (2,): Fraction(-1, 2)}
    )
    assert A.rational_str() == "(1/2)(1 - σ - σ²)"
    assert GroupRingElem.zero(G).rational_str() == "0"
