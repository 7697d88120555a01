from fractions import Fraction

import pytest

from src.app.arith.rayclass import build_ray_class_group, lift_and_kernel
from src.app.core.errors import InconsistentGroups, NotCoprime
from src.app.utils.literal_utils import parse_ideal
from src.ingestion.ingest import to_field_and_modulus, to_injection


def test_ray_class_group_of_first_example(k37):
    field, f = k37
    G = build_ray_class_group(field, f)
    assert G.orders == (3,)
    assert G.class_of(field.unit_ideal()) == (0,)


def test_principal_ideals_congruent_to_one_are_trivial(k37):
    field, f = k37
    G = build_ray_class_group(field, f)
    G_plus = build_ray_class_group(field, f, with_infinite=True)
    three = parse_ideal(field, "3")
    assert G.class_of(three) == G.group.identity
    assert G_plus.class_of(three) == G_plus.group.identity


def test_dlog_is_a_homomorphism(k37):
    field, f = k37
    G = build_ray_class_group(field, f, with_infinite=True)
    primes = [P for ell in (3, 7, 11) for P in field.prime_ideals_above(ell)]
    for P in primes:
        for Q in primes:
            assert G.class_of(P * Q) == G.group.add(G.class_of(P), G.class_of(Q))
        assert G.class_of(P.inverse()) == G.group.neg(G.class_of(P))


def test_class_of_requires_coprime_ideal(k37):
    field, f = k37
    G = build_ray_class_group(field, f)
    with pytest.raises(NotCoprime):
        G.class_of(parse_ideal(field, "2"))


def test_lift_and_kernel(k37):
    field, f = k37
    G = build_ray_class_group(field, f, aux_coprime=7)
    G_plus = build_ray_class_group(field, f, with_infinite=True, aux_coprime=7)
    lift, kernel_size = lift_and_kernel(G_plus, G)
    assert kernel_size * G.order == G_plus.order
    for c in G.group.elements:
        rep = G.representative(c, coprime_to=7)
        assert G_plus.class_of(rep) == lift(c)


def test_representatives_cover_the_group(k37):
    field, f = k37
    G = build_ray_class_group(field, f)
    reps = G.representatives(coprime_to=5)
    assert set(reps) == set(G.group.elements)
    for label, P in reps.items():
        assert G.class_of(P) == label
        assert P.coprime_to(5)


def test_conjugation_acts_by_inversion(k37):
    field, f = k37
    assert build_ray_class_group(field, f).acts_by_inversion()


def test_euler_factor(k37):
    field, f = k37
    G = build_ray_class_group(field, f)
    factor = G.euler_factor(7)
    assert factor.augmentation() == (1 - Fraction(1, 7)) ** 2


def test_injection_must_match_order(k37):
    field, f = k37
    with pytest.raises(InconsistentGroups):
        build_ray_class_group(
            field, f, injection={"orders": [6], "generators": [field.prime_ideals_above(3)[0]]}
        )


def test_group_orders_match_every_bundle(examples):
    for example_id, bundle in sorted(examples.items()):
        field, f = to_field_and_modulus(bundle)
        G = build_ray_class_group(field, f, injection=to_injection(bundle, field))
        assert list(G.orders) == bundle.group, f"example {example_id}"
