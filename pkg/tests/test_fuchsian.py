from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tririgid.errors import NonHyperbolicSignature
from tririgid.fuchsian import (
    FuchsianSignature,
    admissible_free_products,
    b1_upper_bound,
    derive_parity_rule,
    euler_characteristic,
    expected_extension_abelianizations,
    commensurability_edges,
    free_product_chi,
    reference_data,
    reference_json,
    require_hyperbolic,
)
from tririgid.presentation import index2_extensions
from tririgid.smith import AbelianInvariants, abelian_invariants

EXTENSION_PAIRS = [(3, 4), (2, 5), (3, 5), (4, 4), (5, 5)]


def test_euler_examples():
    assert euler_characteristic((2, 3, 8)) == Fraction(-1, 24)
    assert euler_characteristic((3, 3, 4)) == Fraction(-1, 12)
    assert euler_characteristic((4, 4, 4)) == Fraction(-1, 4)
    assert euler_characteristic((3, 3, 4)) / euler_characteristic((2, 3, 8)) == 2
    assert euler_characteristic((4, 4, 4)) / euler_characteristic((3, 3, 4)) == 3


def test_b1_bound_examples():
    assert b1_upper_bound((3, 3, 4)) == 2
    assert euler_characteristic(FuchsianSignature(2)) == -2
    assert b1_upper_bound(FuchsianSignature(2)) == 4
    c2_c3 = FuchsianSignature(0, (2, 3), 1)
    assert euler_characteristic(c2_c3) == Fraction(-1, 6)
    assert b1_upper_bound(c2_c3) == 1


def test_require_hyperbolic_rejects_euclidean():
    with pytest.raises(NonHyperbolicSignature):
        require_hyperbolic((3, 3, 3))
    with pytest.raises(NonHyperbolicSignature):
        require_hyperbolic((2, 4, 4))


def test_admissible_free_products_half():
    found = admissible_free_products(Fraction(-1, 2), max_order=60)
    assert all(len(t) == 2 or t == (2, 2, 2) for t in found)
    assert (2, 2, 2) in found
    assert {(3, 3), (3, 4), (3, 5), (3, 6), (4, 4)} <= set(found)
    assert (3, 7) not in found
    assert all((2, n) in found for n in range(2, 61))


def test_admissible_free_products_contains_two_two():
    found = admissible_free_products(Fraction(-1, 24), max_order=40)
    assert (2, 2) in found and (2, 3) not in found
    assert free_product_chi((2, 2)) == 0


@given(st.lists(st.integers(2, 30), min_size=2, max_size=4))
def test_admissible_free_products_are_exact(orders):
    bound = Fraction(-1, 2)
    t = tuple(sorted(orders))
    assert (t in admissible_free_products(bound, max_order=30)) == (free_product_chi(t) >= bound)


def test_parity_rule_matches_stated_cases():
    rule = derive_parity_rule()
    # q odd -> 1; p odd and q even -> 2; both even -> 3
    assert rule[(1, 1)][0] == 1 and rule[(0, 1)][0] == 1
    assert rule[(1, 0)][0] == 2
    assert rule[(0, 0)][0] == 3


def test_extension_formula_examples():
    got = expected_extension_abelianizations(3, 4)
    assert [inv.torsion for inv in got] == [(2, 4), (2, 2), (2, 2), (2, 4)]
    assert expected_extension_abelianizations(5, 5)[3] == AbelianInvariants((10,))


@pytest.mark.parametrize("p,q", EXTENSION_PAIRS)
def test_extension_formulas_match_smith(p, q):
    fam = index2_extensions(p, q)
    for (kind, P), want in zip(fam.items(), expected_extension_abelianizations(p, q)):
        assert abelian_invariants(P) == want, kind


def test_reference_entries():
    by_sig = {e.signature: e for e in reference_data()}
    assert by_sig[(3, 3, 4)].d == 2
    assert (by_sig[(3, 5, 5)].d, by_sig[(3, 5, 5)].ramified_prime) == (5, 3)
    assert any(e.larger == (2, 3, 10) and e.smaller == (3, 3, 5) and e.index == 2 for e in commensurability_edges())
    assert '"schema_version":1' in reference_json().replace(" ", "")


def test_commensurability_edges_are_exact_chi_ratios():
    for e in commensurability_edges():
        assert euler_characteristic(e.smaller) == e.index * euler_characteristic(e.larger)


def test_reference_trace_fields_are_quadratic():
    from tririgid.characters import trace_field_degree

    for e in reference_data():
        assert trace_field_degree(e.signature) == 2
