from fractions import Fraction

import pytest

from src.app.arith.groupring import FiniteAbelianGroup
from src.app.arith.quadfield import QuadField, QuadIdeal
from src.app.core.errors import BadF, InconsistentGroups, ZeroIdeal
from src.app.utils.literal_utils import (
    expand_terms,
    ideal_from_hnf,
    ideal_to_literal,
    parse_fraction,
    parse_group_ring,
    parse_ideal,
    parse_vectors,
)


@pytest.mark.parametrize(
    "text, value",
    [("3", Fraction(3)), ("-1/2", Fraction(-1, 2)), ("0.25", Fraction(1, 4)), (7, Fraction(7))],
)
def test_parse_fraction(text, value):
    assert parse_fraction(text) == value


@pytest.mark.parametrize("text", ["x", "1/0", ""])
def test_parse_fraction_rejects(text):
    with pytest.raises(ValueError):
        parse_fraction(text)


def test_rational_ideals():
    field = QuadField(37)
    assert parse_ideal(field, "2") == QuadIdeal.principal(field, 2)
    assert parse_ideal(field, "2O") == parse_ideal(field, 2)
    assert parse_ideal(field, "2").norm == 4


def test_prime_ideals():
    field = QuadField(401)
    P2, P2c = field.prime_ideals_above(2)
    assert parse_ideal(field, "P2") == P2
    assert parse_ideal(field, "P2'") == P2c
    assert parse_ideal(field, "P2*P2'") == QuadIdeal.principal(field, 2)
    assert parse_ideal(field, "P5^2").norm == 25


def test_products_and_powers():
    field = QuadField(709)
    f = parse_ideal(field, "2*P5")
    assert f.norm == 4 * 5
    assert parse_ideal(field, "P5^2") == parse_ideal(field, "P5") * parse_ideal(field, "P5")


def test_prime_of_inert_rational_prime_has_no_conjugate():
    field = QuadField(37)
    with pytest.raises(BadF):
        parse_ideal(field, "P2'")


@pytest.mark.parametrize("literal", ["", "Q3", "2**3", {"scale": 1}])
def test_malformed_literals(literal):
    with pytest.raises(BadF):
        parse_ideal(QuadField(37), literal)


def test_zero_ideal():
    with pytest.raises(ZeroIdeal):
        parse_ideal(QuadField(37), "0")


def test_hnf_literal_round_trip():
    field = QuadField(89)
    P5 = parse_ideal(field, "P5")
    literal = ideal_to_literal(P5)
    assert parse_ideal(field, literal) == P5
    assert ideal_from_hnf(field, [[2, 0], [0, 2]]) == QuadIdeal.principal(field, 2)


def test_hnf_that_is_not_an_ideal():
    with pytest.raises(BadF):
        ideal_from_hnf(QuadField(37), [[2, 0], [0, 1]])


def test_expand_terms():
    G = FiniteAbelianGroup((3,))
    assert expand_terms(G, {"1": "a", "σ+σ²": "b"}) == {(0,): "a", (1,): "b", (2,): "b"}
    with pytest.raises(InconsistentGroups):
        expand_terms(G, {"σ": 1, "σ+σ²": 2})


def test_parse_group_ring():
    G = FiniteAbelianGroup((3,))
    A = parse_group_ring(G, {"1": "1/2", "σ+σ²": "-1/2"})
    assert A.coeffs == (Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2))


def test_parse_vectors():
    assert parse_vectors([["1/2", 0], [3, "-2"]]) == [[Fraction(1, 2), 0], [3, -2]]
