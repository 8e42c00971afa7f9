import pytest
from hypothesis import given, settings, strategies as st

from tririgid.characters import (
    DENSE,
    FINITE,
    GALOIS_RIGID,
    NOT_GALOIS_RIGID,
    REDUCIBLE,
    TraceTriple,
    character_census,
    classify,
    enumerate_triples,
    galois_image,
    galois_units,
    geometric_triple,
    iter_kappa_factorizations,
    kappa,
    lower_left_entry,
    mat_mul,
    realize_matrices,
    rigidity_report,
    trace,
    trace_field_degree,
)
from tririgid.cyclotomic import two_cos
from tririgid.fuchsian import FAITHFUL_CHARACTERS

SQRT3 = two_cos(1, 6)
RIGID_SEVEN = [(3, 3, 4), (4, 4, 4), (3, 3, 6), (2, 5, 5), (3, 5, 5), (3, 3, 5), (5, 5, 5)]
SMALL = [(3, 3, 4), (3, 3, 6), (2, 5, 5), (3, 3, 5), (2, 3, 7)]


def _by_values(sig, values):
    return next(t for t in enumerate_triples(sig) if t.values == values)


def test_triple_counts():
    assert len(enumerate_triples((3, 3, 6))) == 20
    assert len(enumerate_triples((2, 5, 5))) == 16
    assert len(enumerate_triples((3, 3, 4))) == 12


def test_kappa_examples():
    assert kappa(_by_values((3, 3, 6), (1, 1, -1))) == 0
    assert kappa(_by_values((3, 3, 6), (1, 1, SQRT3))) == 1 - SQRT3
    assert kappa(_by_values((3, 3, 6), (1, 1, 0))) == -2


def test_normal_form_entry_for_delta_336():
    assert lower_left_entry(_by_values((3, 3, 6), (1, 1, SQRT3))) == 1 + SQRT3
    assert lower_left_entry(_by_values((3, 3, 6), (1, 1, -SQRT3))) == 1 - SQRT3


@pytest.mark.parametrize("sig", SMALL)
def test_realized_matrices_have_the_right_traces(sig):
    for t in enumerate_triples(sig):
        A, B = realize_matrices(t)
        assert (trace(A), trace(B), trace(mat_mul(A, B))) == t.values
        det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
        assert det == 1


def test_classification_examples_336():
    assert classify(_by_values((3, 3, 6), (1, 1, 0))).order == 12
    assert classify(_by_values((3, 3, 6), (1, 1, 0))).type_tag == "A4"
    assert classify(_by_values((3, 3, 6), (1, 1, SQRT3))).kind == DENSE
    assert str(classify(_by_values((3, 3, 6), (1, 1, 1)))) == "finite(12, A4)"
    assert classify(_by_values((3, 3, 6), (1, 1, -1))).kind == REDUCIBLE


def test_census_334():
    kinds = sorted(str(c.classification) for c in character_census((3, 3, 4)))
    assert kinds == ["dense", "dense", "finite(12, A4)"]


def test_census_336():
    census = character_census((3, 3, 6))
    kinds = sorted(str(c.classification) for c in census)
    assert kinds == ["dense", "dense", "finite(12, A4)", "finite(12, A4)", "reducible"]


def test_census_444_profile_442_reducible():
    for t in enumerate_triples((4, 4, 4)):
        if t.indices[0] in (1, 3) and t.indices[1] in (1, 3) and t.indices[2] == 2:
            assert kappa(t) == 0
            assert classify(t).kind == REDUCIBLE


def test_rigidity_examples():
    r = rigidity_report((3, 3, 6))
    assert (r.n_k, r.dense_count, r.verdict) == (2, 2, GALOIS_RIGID)
    r = rigidity_report((6, 6, 6))
    assert r.n_k == 2 and r.dense_count > 2 and r.verdict == NOT_GALOIS_RIGID


def test_geometric_triple_is_fuchsian_lift():
    g = geometric_triple((5, 5, 5))
    assert g.values == (two_cos(1, 5), two_cos(1, 5), -two_cos(1, 5))
    assert classify(g).kind == DENSE
    # (1,1,1) is a finite A5 representation, not the Fuchsian one
    assert str(classify(TraceTriple(g.signature, (1, 1, 1)))) == "finite(60, A5)"


def test_trace_field_degrees():
    for sig in RIGID_SEVEN + [(6, 6, 6)]:
        assert trace_field_degree(sig) == 2
    assert trace_field_degree((2, 3, 7)) == 3


def test_faithful_reference_character():
    ref = FAITHFUL_CHARACTERS[(3, 3, 6)]
    assert ref == {"trace_ab": "sqrt(3)", "z": "1+sqrt(3)"}


@pytest.mark.parametrize("sig", RIGID_SEVEN)
def test_kappa_factorization_identity(sig):
    for t, k, factored in iter_kappa_factorizations(sig):
        assert k == factored, t.indices


@pytest.mark.parametrize("sig", [(3, 3, 6), (5, 5, 5)])
def test_galois_equivariance(sig):
    census = {c.representative: c for c in character_census(sig)}
    for rep, cls in census.items():
        for s in galois_units(sig):
            image = census[galois_image(rep, s).canonical()]
            assert image.classification.kind == cls.classification.kind
            assert image.classification.order == cls.classification.order


def test_even_flips_preserve_classification():
    for t in enumerate_triples((3, 3, 6)):
        kinds = {classify(u).kind for u in t.even_flip_orbit()}
        assert len(kinds) == 1


def test_census_is_thread_independent():
    one = [str(c.classification) for c in character_census((3, 3, 5))]
    four = [str(c.classification) for c in character_census((3, 3, 5), threads=4)]
    assert one == four


def test_finite_types_are_consistent():
    for sig in [(3, 3, 4), (2, 5, 5), (3, 3, 5), (4, 4, 4)]:
        for c in character_census(sig):
            if c.kind == FINITE:
                assert (c.classification.type_tag, c.classification.order) in {
                    ("A4", 12), ("S4", 24), ("A5", 60)
                } or c.classification.type_tag[0] in "CD"


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(3, 3, 4), (3, 3, 5), (2, 5, 5), (4, 4, 4)]), st.data())
def test_kappa_zero_iff_reducible(sig, data):
    t = data.draw(st.sampled_from(enumerate_triples(sig)))
    assert (kappa(t) == 0) == (classify(t).kind == REDUCIBLE)
