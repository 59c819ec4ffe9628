from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demazure import _linalg
from demazure.abelian import (
    AbelianGroup,
    DualVector,
    diagonal,
    express_in_generators,
    group_from_presentation,
    integer_kernel,
    pairing,
    parse_element,
    smith_normal_form,
    solve_integer,
    subgroup_structure,
)
from demazure.errors import DimensionMismatch, DomainError

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m
        )
    )
)


def test_snf_identity():
    U, D, V = smith_normal_form([[1, 0], [0, 1]])
    assert D == [[1, 0], [0, 1]]
    assert U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]


def test_snf_diag_2_3():
    A = [[2, 0], [0, 3]]
    U, D, V = smith_normal_form(A)
    assert diagonal(D) == [1, 6]
    assert _linalg.matmul(_linalg.matmul(U, A), V) == D


def test_snf_zero():
    _, D, _ = smith_normal_form([[0]])
    assert D == [[0]]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_factorization(A):
    U, D, V = smith_normal_form(A)
    assert _linalg.matmul(_linalg.matmul(U, A), V) == D
    assert abs(_linalg.determinant(U)) == 1
    assert abs(_linalg.determinant(V)) == 1
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert i == j or x == 0
    d = diagonal(D)
    assert all(x >= 0 for x in d)
    nonzero = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert d[len(nonzero):] == [0] * (len(d) - len(nonzero))


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_integer_kernel_is_kernel(A):
    n = len(A[0])
    K = integer_kernel(A, n)
    for v in K:
        assert all(_linalg.dot(row, v) == 0 for row in A)
    assert len(K) == n - _linalg.rank(A)


@settings(max_examples=100, deadline=None)
@given(matrices, st.data())
def test_solve_integer_finds_planted_solution(A, data):
    n = len(A[0])
    x = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
    b = [_linalg.dot(row, x) for row in A]
    y = solve_integer(A, b)
    assert y is not None
    assert [_linalg.dot(row, y) for row in A] == b


def test_solve_integer_detects_no_solution():
    assert solve_integer([[2, 0]], [1]) is None


def test_group_validation():
    assert AbelianGroup(1, (2,)) == AbelianGroup(1, (2,))
    assert AbelianGroup(1, (2,)) != AbelianGroup(1, (3,))
    with pytest.raises(DomainError):
        AbelianGroup(1, (1,))
    with pytest.raises(DomainError):
        AbelianGroup(0, (2, 3))  # not a divisibility chain


def test_element_arithmetic():
    G = AbelianGroup(1, (2,))
    a = G.element((1,), (1,))
    b = G.element((2,), (1,))
    assert a + b == G.element((3,), (0,))
    assert -a == G.element((-1,), (1,))
    assert a - a == G.zero()
    assert 3 * a == G.element((3,), (1,))
    assert G.element((0,), (5,)).torsion == (1,)


def test_presentation_examples():
    p = group_from_presentation(2, [])
    assert p.group == AbelianGroup(2)
    p = group_from_presentation(2, [(0, 2)])
    assert p.group == AbelianGroup(1, (2,))
    p = group_from_presentation(1, [(3,)])
    assert p.group == AbelianGroup(0, (3,))


@pytest.mark.parametrize("rels", [[(0, 2)], [(2, 4), (6, 8)], [(1, 1, 0), (0, 3, 3)], [(4,)]])
def test_presentation_round_trip(rels):
    n = len(rels[0])
    p = group_from_presentation(n, rels)
    for x in product(range(-3, 4), repeat=n):
        m = p.to_canonical(x)
        assert p.to_canonical(p.from_canonical(m)) == m
        for r in rels:
            shifted = tuple(a + b for a, b in zip(x, r))
            assert p.to_canonical(shifted) == m


def test_pairing_examples():
    G2 = AbelianGroup(2)
    assert pairing(DualVector((1, 0)), G2.element((3, 5))) == 3
    assert pairing(DualVector((2, -1)), G2.element((1, 2))) == 0
    G = AbelianGroup(1, (2,))
    assert pairing(DualVector((1,)), G.element((-1,), (1,))) == -1
    with pytest.raises(DimensionMismatch):
        pairing(DualVector((1, 2)), G.element((1,), (0,)))


@given(
    st.lists(st.integers(-20, 20), min_size=3, max_size=3),
    st.lists(st.integers(-20, 20), min_size=3, max_size=3),
    st.lists(st.integers(-20, 20), min_size=3, max_size=3),
)
def test_pairing_is_additive(u, a, b):
    G = AbelianGroup(3, (4,))
    m, n = G.element(a, (1,)), G.element(b, (3,))
    d = DualVector(u)
    assert pairing(d, m + n) == pairing(d, m) + pairing(d, n)


def test_dual_vector_rational():
    d = DualVector((Fraction(1, 2), 2))
    assert not d.is_integral
    assert d.scale(2).coords == (1, 4)


def test_parse_element_forms():
    G = AbelianGroup(2, (2,))
    ref = G.element((1, 2), (1,))
    assert parse_element(G, ((1, 2), (1,))) == ref
    assert parse_element(G, {"free": [1, 2], "torsion": [1]}) == ref
    assert parse_element(G, (1, 2)) == G.element((1, 2), (0,))
    with pytest.raises(DimensionMismatch):
        parse_element(G, (1, 2, 3))


def test_subgroup_structure_index_two():
    # <(2,0),(1,1),(0,2)> has index 2 in Z^2 and is free of rank 2.
    G = AbelianGroup(2)
    gens = [G.element(v) for v in [(2, 0), (1, 1), (0, 2)]]
    pres, images = subgroup_structure(G, gens)
    assert pres.group == AbelianGroup(2)
    assert express_in_generators(G, gens, G.element((1, 0))) is None
    x = express_in_generators(G, gens, G.element((3, 1)))
    assert sum((c * g for c, g in zip(x, gens)), G.zero()) == G.element((3, 1))


def test_subgroup_structure_with_torsion():
    G = AbelianGroup(1, (2,))
    gens = [G.element((1,), (0,)), G.element((0,), (1,))]
    pres, images = subgroup_structure(G, gens)
    assert pres.group == G
