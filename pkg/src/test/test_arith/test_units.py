from fractions import Fraction

import pytest
from mpmath import mp

from src.app.arith.units import act_on_exponents, embedding_permutation, real_roots, unit_action
from src.app.core.errors import InconsistentDimensions
from src.ingestion.ingest import to_unit_basis


def isotypic_vectors(bundle):
    return {tuple(block.character): block.vectors for block in bundle.verification.isotypic}


@pytest.mark.parametrize("example_id", [1, 5])
def test_published_sigma_permutes_the_embeddings(examples, example_id):
    basis = to_unit_basis(examples[example_id].verification.unit_field)
    with mp.workdps(50):
        roots = real_roots(basis.polynomial)
        assert len(roots) == 6
        perm = embedding_permutation(basis.images[0], roots)
    assert sorted(perm) == list(range(6))
    assert perm != list(range(6))
    # sigma of order 3 moves the six embeddings in two 3-cycles
    assert all(perm[perm[perm[j]]] == j for j in range(6))


@pytest.mark.parametrize("example_id", [1, 5])
def test_unit_action_has_order_three(examples, example_id):
    (T,) = to_unit_basis(examples[example_id].verification.unit_field).action([3])
    identity = [[int(i == j) for j in range(6)] for i in range(6)]
    assert T != identity
    e = tuple(Fraction(int(i == 0)) for i in range(6))
    assert act_on_exponents([T], (3,), e) == e


@pytest.mark.parametrize("example_id", [1, 5])
def test_published_vectors_are_isotypic(examples, example_id):
    bundle = examples[example_id]
    (T,) = to_unit_basis(bundle.verification.unit_field).action([3])
    vectors = isotypic_vectors(bundle)
    for v in vectors[(0,)]:
        assert act_on_exponents([T], (1,), v) == tuple(Fraction(x) for x in v)
    for v in vectors[(1,)]:
        orbit = [act_on_exponents([T], (k,), v) for k in range(3)]
        assert all(sum(w[m] for w in orbit) == 0 for m in range(6))


def test_unit_field_must_be_totally_real():
    with pytest.raises(InconsistentDimensions):
        unit_action([1, 0, 1], [[-1, 0]], [[1, 1]], [2])


def test_sigma_must_map_theta_to_a_conjugate(examples):
    basis = to_unit_basis(examples[1].verification.unit_field)
    with pytest.raises(InconsistentDimensions):
        unit_action(basis.polynomial, [[1, 1]], basis.units, [3])


def test_real_quadratic_unit_action():
    # theta = sqrt 2, sigma(theta) = -theta, u = 1 + theta goes to -(1 + theta)^-1
    assert unit_action([1, 0, -2], [[-1, 0]], [[1, 1]], [2]) == [[[-1]]]
