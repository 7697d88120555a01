from dataclasses import replace
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from src.app.arith.groupring import FiniteAbelianGroup, GroupRingElem
from src.app.arith.lattice import Lattice
from src.app.arith.verify import (
    CharacterTable,
    IsotypicModel,
    check_conjecture_parts,
    hnf,
    index,
    membership,
    ramanujan_sum,
    rank_data_from_idempotent,
    ranks_from_decomposition_groups,
    rational_reconstruct,
    real_element,
    solve_A,
    wedge_expand,
)
from src.app.core.errors import BundleError, InconsistentDimensions, InconsistentGroups, SingularRegulator
from src.ingestion.ingest import build_verification_input, to_verification_input, truncate_verification


@pytest.mark.parametrize(
    "d, k, value",
    [(1, 0, 1), (3, 0, 2), (3, 1, -1), (4, 1, 0), (4, 2, -2), (6, 1, 1), (5, 5, 4)],
)
def test_ramanujan_sum(d, k, value):
    assert ramanujan_sum(d, k) == value


@pytest.mark.parametrize("orders, n_classes", [((3,), 2), ((4,), 3), ((2, 2), 4), ((10,), 4)])
def test_rational_classes(orders, n_classes):
    table = CharacterTable(FiniteAbelianGroup(orders))
    assert len(table.classes) == n_classes
    assert sum(len(c.members) for c in table.classes) == table.group.order


def test_idempotents_are_orthogonal_and_sum_to_one():
    G = FiniteAbelianGroup((6,))
    table = CharacterTable(G)
    idems = [table.idempotent(c) for c in table.classes]
    one = GroupRingElem.basis(G, G.identity)
    total = GroupRingElem.zero(G)
    for e in idems:
        total = total + e
        assert e * e == e
    assert total == one
    assert (idems[0] * idems[1]).is_zero()


def test_order_three_idempotent():
    G = FiniteAbelianGroup((3,))
    table = CharacterTable(G)
    nontrivial = next(c for c in table.classes if c.order == 3)
    assert table.idempotent(nontrivial).rational_str() == "(1/3)(2 - σ - σ²)"


def test_exact_character_values():
    G = FiniteAbelianGroup((2,))
    table = CharacterTable(G)
    x = GroupRingElem(G, (Fraction(3), Fraction(1)))
    assert table.exact_value(x, (1,))[0] == Fraction(2)
    assert table.exact_value(x, (0,))[0] == Fraction(4)


def test_rational_reconstruct():
    with mp.workdps(30):
        best, residual = rational_reconstruct(mpf(-3) / 82, 2 * 82 * 1000)
        assert best == Fraction(-3, 82)
        assert residual < mpf(10) ** -25


def test_idempotent_ranks_reject_non_idempotent():
    G = FiniteAbelianGroup((3,))
    bogus = GroupRingElem(G, (Fraction(1), Fraction(0), Fraction(0)))
    with pytest.raises(InconsistentGroups):
        rank_data_from_idempotent(CharacterTable(G), bogus)


def test_ranks_from_decomposition_groups():
    G = FiniteAbelianGroup((2,))
    ranks = ranks_from_decomposition_groups(CharacterTable(G), [[(1,)]])
    assert ranks.ranks == (2, 2)
    assert all(ranks.in_S2)


def test_solve_A_rejects_vanishing_regulator():
    G = FiniteAbelianGroup((2,))
    ranks = rank_data_from_idempotent(CharacterTable(G), GroupRingElem.zero(G))
    Rgamma = real_element(G, ["0", "0"], 30)
    Phi0 = real_element(G, ["1", "0"], 30)
    with pytest.raises(SingularRegulator):
        solve_A(Rgamma, Phi0, ranks, 25)


def test_first_example(examples):
    data = to_verification_input(examples[1])
    report = check_conjecture_parts(data)
    assert report.passed
    assert report.A.rational_str() == "(1/2)(1 - σ - σ²)"
    assert report.model == "wedge"
    assert report.gamma_index == 1
    assert report.d_f == 2
    assert report.d_f_sigma == [1]
    assert report.index_eta == 4
    assert report.prime_power


def test_solution_is_stable_under_fewer_digits(examples):
    bundle = examples[1]
    assert bundle.verification.digits == 29
    G = FiniteAbelianGroup(tuple(bundle.group))
    ranks = rank_data_from_idempotent(CharacterTable(G), GroupRingElem.zero(G))
    solutions = []
    for digits in (29, 25):
        data = build_verification_input(
            bundle.d_k, bundle.f, bundle.group, truncate_verification(bundle.verification, digits)
        )
        assert data.digits == digits
        result = solve_A(data.Rgamma, data.Phi0, ranks, digits)
        assert mpf(result.residual) < mpf(10) ** -20
        solutions.append(result.A)
    assert solutions[0] == solutions[1]
    assert solutions[0].rational_str() == "(1/2)(1 - σ - σ²)"


def test_truncation_cannot_add_digits(examples):
    with pytest.raises(BundleError):
        truncate_verification(examples[1].verification, 40)


def test_order_three_characters_use_the_wedge_model(examples):
    report = check_conjecture_parts(to_verification_input(examples[5]))
    assert report.model == "wedge"
    assert report.passed
    assert report.gamma_index == 1
    assert report.d_f == 2
    assert report.d_f_sigma == [1]
    assert report.index_eta == 4


@pytest.mark.parametrize("example_id", [1, 5])
def test_wedge_lattice_of_a_cyclic_cubic_extension(examples, example_id):
    data = to_verification_input(examples[example_id])
    table = CharacterTable(data.group)
    ranks = rank_data_from_idempotent(table, GroupRingElem.zero(data.group))
    model = IsotypicModel(
        ranks, data.isotypic_vectors, data.gamma_wedges, action=data.unit_basis.action(data.group.orders)
    )
    # Q(X_1) + Q(X_2) with X_2 of order 3
    assert model.dimension == 3
    rows = wedge_expand(model, model.units)
    assert len(rows) % data.group.order == 0
    assert model.lattice.rank == 3
    gamma_gens = [model.act(GroupRingElem.basis(data.group, g), model.gamma) for g in data.group.elements]
    assert Lattice.from_generators(gamma_gens, model.dimension).index_in(model.lattice) == 1


def test_order_three_without_unit_field_falls_back(examples):
    data = replace(to_verification_input(examples[5]), unit_basis=None)
    report = check_conjecture_parts(data)
    assert report.model == "group_ring"
    assert report.passed


def test_isotypic_coordinates_need_the_action(examples):
    data = to_verification_input(examples[1])
    ranks = rank_data_from_idempotent(CharacterTable(data.group), GroupRingElem.zero(data.group))
    with pytest.raises(InconsistentDimensions):
        IsotypicModel(ranks, data.isotypic_vectors, data.gamma_wedges)


def test_non_isotypic_vector_is_reported(examples):
    data = to_verification_input(examples[1])
    vectors = dict(data.isotypic_vectors)
    vectors[(0,)] = [vectors[(1,)][0], vectors[(0,)][1]]
    report = check_conjecture_parts(replace(data, isotypic_vectors=vectors))
    assert "lattice" in report.errors
    assert report.errors["lattice"]["error"] == "InconsistentDimensions"
    assert not report.passed


def test_quadratic_characters_use_the_wedge_model(examples):
    report = check_conjecture_parts(to_verification_input(examples[4]))
    assert report.model == "wedge"
    assert report.passed
    assert report.d_f == 2
    assert report.index_eta == 2


def test_non_prime_power_modulus(examples):
    report = check_conjecture_parts(to_verification_input(examples[7]))
    assert report.passed
    assert report.prime_power is False
    assert report.d_f == 1


def test_large_gamma_index_gives_upper_bounds(examples):
    report = check_conjecture_parts(to_verification_input(examples[8]))
    assert report.model == "group_ring"
    assert report.upper_bound
    assert report.passed
    assert "index" not in report.expected


def test_mismatching_expectation_fails(examples):
    data = replace(to_verification_input(examples[1]), expected_d_f=4)
    report = check_conjecture_parts(data)
    assert report.expected["d_f"] is False
    assert not report.passed


def test_lattice_wrappers():
    L = hnf([[2, 0], [0, 3]])
    assert membership(L, [4, 3]) == (True, 1)
    assert membership(L, [1, 0]) == (False, 2)
    assert index(hnf([[4, 0], [0, 3]]), L) == 2
