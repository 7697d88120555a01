from fractions import Fraction

import pytest

from src.app.arith.groupring import PADIC, FiniteAbelianGroup, GroupRingElem
from src.app.arith.phi import (
    ExpectedTerm,
    check_hypotheses,
    compute_phi,
    format_digits,
    galois_symmetry_check,
    match_expected,
    parse_digits,
    zeta_choices,
)
from src.app.arith.quadfield import QuadField
from src.app.core.errors import HypothesisViolation, NegativeValuation
from src.app.services.phi_service import check_against_bundle, expected_terms
from src.app.utils.literal_utils import parse_ideal
from src.ingestion.ingest import to_field_and_modulus, to_injection


@pytest.mark.parametrize(
    "x, p, N, text",
    [(5, 3, 3, "0.210_3"), (0, 7, 2, "0.00_7"), (10, 11, 2, "0.A0_11"), (-1, 5, 3, "0.444_5")],
)
def test_format_and_parse_digits(x, p, N, text):
    assert format_digits(x, p, N) == text
    assert parse_digits(text) == (x % p**N, p, N)


def test_digits_prefix_is_lower_precision_value():
    x = 123456789
    assert format_digits(x, 7, 10).startswith(format_digits(x, 7, 4)[:-2])


def test_large_digits_use_parentheses():
    assert format_digits(40, 41, 1) == "0.(40)_41"
    assert parse_digits("0.(40)_41") == (40, 41, 1)


def test_format_rejects_non_integers():
    with pytest.raises(NegativeValuation):
        format_digits(Fraction(1, 3), 3, 4)


@pytest.mark.parametrize("text", ["1.20_3", "0.30_3", "0.12"])
def test_parse_rejects_malformed_strings(text):
    with pytest.raises(ValueError):
        parse_digits(text)


def test_check_hypotheses_accepts_first_example(k37):
    field, f = k37
    assert check_hypotheses(field, f, 3) == 2
    assert check_hypotheses(field, f, 7) == 2


@pytest.mark.parametrize(
    "d, f_literal, p",
    [
        (37, "2", 2),  # not odd
        (37, "2", 9),  # not prime
        (37, "2", 5),  # inert
        (37, "2", 37),  # ramified
        (89, "P5", 5),  # divides N(f)
        (89, "P5", 17),  # 5 does not divide 16
    ],
)
def test_check_hypotheses_rejects(d, f_literal, p):
    field = QuadField(d)
    with pytest.raises(HypothesisViolation):
        check_hypotheses(field, parse_ideal(field, f_literal), p)


@pytest.mark.parametrize("f_int, count", [(2, 1), (3, 2), (5, 4), (10, 4)])
def test_zeta_choices(f_int, count):
    assert zeta_choices(f_int) == count


def test_galois_symmetry_check():
    G = FiniteAbelianGroup((3,))
    good = GroupRingElem.from_dict(G, {(0,): 4, (1,): 7, (2,): 7}, kind=PADIC, modulus=27)
    bad = GroupRingElem.from_dict(G, {(0,): 4, (1,): 7, (2,): 9}, kind=PADIC, modulus=27)
    assert galois_symmetry_check(good, True).symmetric
    report = galois_symmetry_check(bad, True)
    assert not report.symmetric
    assert report.max_discrepancy == 2
    assert set(report.mismatches) == {"σ", "σ²"}
    assert not galois_symmetry_check(bad, False).checked


def _truncated(terms, N):
    out = []
    for term in terms:
        body, _, p = term.digits.rpartition("_")
        out.append(ExpectedTerm(term.elements, body[: 2 + N] + "_" + p))
    return out


def test_first_example_reproduces_leading_digits(examples):
    bundle = examples[1]
    field, f = to_field_and_modulus(bundle)
    injection = to_injection(bundle, field)
    results = [compute_phi(field, f, 3, 8, root_choice, 0, injection) for root_choice in range(2)]
    expected = _truncated(expected_terms(results[0].group, bundle.prime(3)), 8)
    report = match_expected(results, expected)
    assert report.matched
    result = results[report.root_choice]
    assert galois_symmetry_check(result.phi, result.inversion).symmetric


def test_wrong_digits_do_not_match(examples):
    bundle = examples[1]
    field, f = to_field_and_modulus(bundle)
    result = compute_phi(field, f, 3, 4, injection=to_injection(bundle, field))
    assert not match_expected([result], [ExpectedTerm(("1",), "0.0000_3")]).matched


@pytest.mark.slow
@pytest.mark.parametrize(
    "example_id, p", [(1, 3), (1, 7), (1, 11), (4, 11), (10, 3), (10, 5), (10, 7), (10, 11)]
)
def test_published_digits(examples, example_id, p):
    _, report = check_against_bundle(examples[example_id], p, workers=1)
    assert report.matched
