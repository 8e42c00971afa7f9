from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from tririgid.cosets import (
    coset_table_from_action,
    reidemeister_schreier,
    schreier_transversal,
    todd_coxeter,
    verify_index2_embedding,
    z2_characters,
    z2_kernel_generators,
)
from tririgid.errors import CosetOverflow
from tririgid.fuchsian import FuchsianSignature, euler_characteristic
from tririgid.groups import group_from_labels, psl2_group
from tririgid.presentation import Word, parse_presentation, signature_presentation, triangle_presentation
from tririgid.quotients import enumerate_homs
from tririgid.smith import abelian_invariants, b1


def _gl23():
    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % 3, (a * f + b * h) % 3, (c * e + d * g) % 3, (c * f + d * h) % 3)

    mats = [m for m in product(range(3), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 3]
    return group_from_labels("GL(2,3)", mats, mul, [(1, 1, 0, 1), (0, 1, 2, 0), (2, 0, 0, 1)], (1, 0, 0, 1))


def _surface_kernel(P, G, orders):
    """Kernel of an epimorphism where ``a``, ``b`` and ``ab`` have exactly ``orders``."""
    elem_orders = G.element_orders
    for h in enumerate_homs(P, G):
        got = tuple(elem_orders[x] for x in h.images) + (elem_orders[G.mul(*h.images)],)
        if h.surjective and got == orders:
            return coset_table_from_action(P, list(h.images), G)
    raise AssertionError("no epimorphism with the requested orders")


def test_index_two_from_explicit_words():
    P = triangle_presentation((2, 3, 8))
    x = P.word("(a*b)^2")
    y = P.word("b*(a*b)^2*B")
    z = P.word("b")
    T = todd_coxeter(P, [x, y, z])
    assert T.index == 2
    assert euler_characteristic((3, 3, 4)) / euler_characteristic((2, 3, 8)) == T.index


def test_full_subgroup_has_index_one():
    P = triangle_presentation((2, 3, 7))
    T = todd_coxeter(P, [Word.gen(0), Word.gen(1)])
    assert T.index == 1
    H = reidemeister_schreier(T)
    assert H.ngens == P.ngens
    assert abelian_invariants(H) == abelian_invariants(P)


def test_infinite_group_overflows():
    with pytest.raises(CosetOverflow):
        todd_coxeter(triangle_presentation((2, 3, 7)), [], max_cosets=10_000)


def test_cyclic_index_two_subgroup():
    P = parse_presentation("a; a^4")
    T = todd_coxeter(P, [Word.gen(0, 2)])
    assert T.index == 2
    H = reidemeister_schreier(T)
    assert H.ngens == 1
    assert abelian_invariants(H).torsion == (2,)


def test_hlt_and_felsch_agree():
    cases = [
        (triangle_presentation((2, 3, 7)), []),
        (triangle_presentation((2, 3, 8)), ["(a*b)^2", "b"]),
        (parse_presentation("x,y,z; x^2, y^2, z^2, (x*y)^2, (y*z)^3, (x*z)^5"), []),
        (parse_presentation("a,b; a^2, b^3, (a*b)^5"), ["a"]),
    ]
    for P, sub in cases:
        words = [P.word(s) for s in sub]
        try:
            hlt = todd_coxeter(P, words, max_cosets=5000)
        except CosetOverflow:
            with pytest.raises(CosetOverflow):
                todd_coxeter(P, words, max_cosets=5000, strategy="felsch")
            continue
        felsch = todd_coxeter(P, words, max_cosets=5000, strategy="felsch")
        assert hlt.index == felsch.index
        assert hlt.table == felsch.table


def test_finite_coxeter_group_order():
    P = parse_presentation("x,y,z; x^2, y^2, z^2, (x*y)^2, (y*z)^3, (x*z)^5")
    assert todd_coxeter(P, []).index == 120


def test_table_row_column_consistency():
    T = todd_coxeter(parse_presentation("a,b; a^2, b^3, (a*b)^5"), [])
    for c, row in enumerate(T.table):
        for col, d in enumerate(row):
            assert T.table[d][col ^ 1] == c


def test_schreier_generator_count():
    T = todd_coxeter(parse_presentation("a,b; a^2, b^3, (a*b)^5"), [])
    H = reidemeister_schreier(T)
    reps, tree = schreier_transversal(T)
    assert len(reps) == T.index == 60
    assert H.ngens == T.index * (2 - 1) + 1
    assert abelian_invariants(H).order == 1


def test_hurwitz_surface_kernel_betti_number():
    P = triangle_presentation((2, 3, 7))
    T = _surface_kernel(P, psl2_group(7), (2, 3, 7))
    assert T.index == 168
    assert b1(reidemeister_schreier(T)) == 2 - T.index * euler_characteristic((2, 3, 7)) == 6


def test_gl23_surface_kernel_betti_number():
    # Delta(2,3,8) -> GL(2,3) with images of orders 2, 3, 8: torsion-free kernel of index 48
    P = triangle_presentation((2, 3, 8))
    G = _gl23()
    assert G.order == 48
    orders = G.element_orders
    ab = [(x, y) for x in range(48) for y in range(48) if orders[x] == 2 and orders[y] == 3 and orders[G.mul(x, y)] == 8]
    x, y = ab[0]
    T = coset_table_from_action(P, [x, y], G)
    H = reidemeister_schreier(T)
    chi_h = T.index * euler_characteristic((2, 3, 8))
    assert chi_h == -2
    assert b1(H) == 2 - chi_h == 4


def test_z2_kernels_of_delta_238():
    P = triangle_presentation((2, 3, 8))
    chars = z2_characters(P)
    assert chars == [(1, 0)]
    T = todd_coxeter(P, z2_kernel_generators(P, chars[0]))
    assert T.index == 2


@pytest.mark.parametrize("p,q,parent", [(3, 4, (2, 3, 8)), (5, 3, (2, 5, 6)), (4, 4, (2, 4, 8))])
def test_index2_embedding_examples(p, q, parent):
    e = verify_index2_embedding(p, q)
    assert e.parent == parent
    assert e.unique and e.matched.index == 2


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(2, 3, 7), (2, 3, 8), (2, 4, 5), (3, 3, 4), (2, 5, 5)]), st.sampled_from([5, 7, 8, 9]))
def test_kernel_subgroups_respect_b1_bound(sig, q):
    P = triangle_presentation(sig)
    G = psl2_group(q)
    epis = [h for h in enumerate_homs(P, G) if h.surjective]
    if not epis:
        return
    T = coset_table_from_action(P, list(epis[0].images), G)
    H = reidemeister_schreier(T)
    chi_h = T.index * euler_characteristic(sig)
    assert b1(H) <= 2 - chi_h
    orders = G.element_orders
    torsion_free = all(orders[x] == m for x, m in zip(epis[0].images, sig[:2])) and orders[
        G.mul(epis[0].images[0], epis[0].images[1])
    ] == sig[2]
    if torsion_free:
        assert b1(H) == 2 - chi_h


def test_quadrilateral_kernel_chi_scales():
    P = signature_presentation(0, (2, 2, 2, 3))
    G = psl2_group(5)
    epi = next(h for h in enumerate_homs(P, G) if h.surjective)
    T = coset_table_from_action(P, list(epi.images), G)
    chi = T.index * euler_characteristic(FuchsianSignature(0, (2, 2, 2, 3)))
    assert chi == -10
    assert b1(reidemeister_schreier(T)) <= 2 - chi
