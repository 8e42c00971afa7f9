import random
from math import prod

from hypothesis import given, settings, strategies as st

from oracles import brute_force_cyclic_homs, determinant, determinantal_divisors_agree
from tririgid.presentation import (
    Presentation,
    Word,
    coxeter_presentation,
    index2_extensions,
    parse_presentation,
    signature_presentation,
    triangle_presentation,
)
from tririgid.smith import AbelianInvariants, IntegerMatrix, abelian_invariants, b1, relation_matrix, smith_normal_form

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_relation_matrix_examples():
    assert relation_matrix(triangle_presentation((3, 3, 4))).to_rows() == [[3, 0], [0, 3], [4, 4]]
    assert relation_matrix(coxeter_presentation((3, 4, 4))).to_rows() == [
        [2, 0, 0], [0, 2, 0], [0, 0, 2], [3, 3, 0], [0, 4, 4], [4, 0, 4],
    ]
    M = relation_matrix(Presentation(("a",), ()))
    assert (M.rows, M.cols) == (0, 1)


def test_snf_examples():
    assert smith_normal_form(IntegerMatrix.from_rows([[3, 0], [0, 3], [4, 4]])) == ([1, 3], 2)
    assert smith_normal_form(IntegerMatrix.from_rows([[1, 0], [0, 1]])) == ([1, 1], 2)
    assert smith_normal_form(IntegerMatrix.from_rows([[2, 0], [0, 0]])) == ([2], 1)


def test_abelian_invariant_examples():
    assert abelian_invariants(triangle_presentation((3, 3, 4))) == AbelianInvariants((3,), 0)
    assert abelian_invariants(coxeter_presentation((3, 4, 4))) == AbelianInvariants((2, 2), 0)
    assert abelian_invariants(index2_extensions(3, 4)["lambda"]) == AbelianInvariants((2, 4), 0)


def test_delta_444_abelianization_is_z4_squared():
    assert abelian_invariants(triangle_presentation((4, 4, 4))) == AbelianInvariants((4, 4), 0)


def test_b1_examples():
    for sig in [(2, 3, 7), (3, 3, 4), (4, 4, 4), (2, 5, 5), (6, 6, 6)]:
        assert b1(triangle_presentation(sig)) == 0
    assert b1(signature_presentation(2, ())) == 4
    assert b1(parse_presentation("a,b; a^2")) == 1


def test_invariants_string_form():
    assert str(AbelianInvariants((2, 4), 1)) == "Z x Z/2 x Z/4"
    assert str(AbelianInvariants()) == "1"
    assert AbelianInvariants.from_cyclic_orders([4, 2, 1, 6]) == AbelianInvariants((2, 2, 12))


@settings(max_examples=300, deadline=None)
@given(small_matrices)
def test_determinantal_divisors(rows):
    invariants, rank = smith_normal_form(IntegerMatrix.from_rows(rows))
    assert determinantal_divisors_agree(rows, invariants, rank)
    assert all(invariants[i + 1] % invariants[i] == 0 for i in range(len(invariants) - 1))


@given(small_matrices, st.randoms(use_true_random=False))
def test_row_shuffle_invariance(rows, rnd):
    shuffled = rows[:]
    rnd.shuffle(shuffled)
    assert smith_normal_form(IntegerMatrix.from_rows(rows)) == smith_normal_form(IntegerMatrix.from_rows(shuffled))


words = st.lists(st.tuples(st.integers(0, 2), st.sampled_from((1, -1))), min_size=1, max_size=10).map(Word).filter(bool)


@given(st.lists(words, min_size=1, max_size=4), st.data())
def test_relator_cyclic_permutation_and_inverse(rels, data):
    P = Presentation(("a", "b", "c"), tuple(rels))
    i = data.draw(st.integers(0, len(rels) - 1))
    r = rels[i]
    rotated = data.draw(st.sampled_from([w for w in r.cyclic_conjugates() if w] or [r]))
    replacement = rotated.inverse() if data.draw(st.booleans()) else rotated
    Q = Presentation(P.generators, rels[:i] + [replacement] + rels[i + 1:])
    assert abelian_invariants(P) == abelian_invariants(Q)


CORPUS = [
    triangle_presentation((3, 3, 4)),
    triangle_presentation((4, 4, 4)),
    coxeter_presentation((3, 4, 4)),
    *(P for _, P in index2_extensions(3, 4).items()),
    *(P for _, P in index2_extensions(2, 5).items()),
    signature_presentation(0, (2, 2, 2, 3)),
    signature_presentation(2, ()),
    parse_presentation("a,b; a^2"),
]


def test_hom_count_oracle_corpus():
    for P in CORPUS:
        inv = abelian_invariants(P)
        for n in range(1, 13):
            if P.ngens == 4 and n > 8:
                continue  # 12^4 tuples per presentation is slow; the acceptance suite covers all n
            assert brute_force_cyclic_homs(P, n) == inv.hom_count(n), (P.name, n)


@settings(max_examples=60, deadline=None)
@given(st.lists(words, min_size=1, max_size=3), st.integers(1, 12))
def test_hom_count_oracle_random(rels, n):
    P = Presentation(("a", "b", "c"), tuple(rels))
    assert brute_force_cyclic_homs(P, n) == abelian_invariants(P).hom_count(n)


def test_large_entries_stay_exact():
    rng = random.Random(7)
    rows = [[rng.randint(-10**12, 10**12) for _ in range(5)] for _ in range(5)]
    invariants, rank = smith_normal_form(IntegerMatrix.from_rows(rows))
    assert rank == 5
    assert prod(invariants) == abs(determinant(rows))
