import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demazure.abelian import AbelianGroup
from demazure.errors import (
    AlphaInSaturationError,
    EmptyGeneratorsError,
    NonPointedError,
    ZeroGeneratorError,
)
from demazure.monoid import (
    AffineMonoid,
    Face,
    corollary_escape_exponent,
    group_completion,
)

from conftest import three_point_set
from oracles import expand_by_level


def test_numerical_monoid_basics(numerical_23):
    S = numerical_23
    assert [r.coords for r in S.dual_rays] == [(1,)]
    assert [u.free for u in S.unit_subgroup] == [(0,)]
    assert not S.contains((1,))
    assert S.contains((5,))
    assert S.contains((0,))
    assert S.saturation_contains((1,))
    assert [g.free for g in S.saturation_generators()] == [(1,)]


def test_torsion_units(half_line_torsion):
    S = half_line_torsion
    G = S.group
    assert [r.coords for r in S.dual_rays] == [(1,)]
    assert set(S.unit_subgroup) == {G.zero(), G.element((0,), (1,))}
    assert S.saturation_contains(((0,), (1,)))
    assert not S.saturation_contains(((-1,), (0,)))


def test_saturation_generators_of_torsion_half_line():
    G = AbelianGroup(1, (2,))
    S = AffineMonoid(G, [((1,), (0,))])
    assert set(S.saturation_generators()) == {G.element((1,), (0,)), G.element((0,), (1,))}


def test_non_pointed_flagged():
    S = AffineMonoid(AbelianGroup(2), [(1, 0), (-1, 0)])
    assert not S.is_pointed
    with pytest.raises(NonPointedError):
        S.contains((0, 0))


def test_generator_validation():
    G = AbelianGroup(1)
    with pytest.raises(ZeroGeneratorError):
        AffineMonoid(G, [(0,)])
    with pytest.raises(EmptyGeneratorsError):
        AffineMonoid(G, [])
    S = AffineMonoid(G, [(2,), (2,), (3,)])
    assert len(S.generators) == 2


def test_three_point_membership(three_point):
    S = three_point
    assert not S.contains(((0, 1), (0,)))
    assert S.contains(((0, 2), (1,)))
    assert S.contains(((0, 0), (0,)))
    assert not S.contains(((0, 0), (1,)))


def test_three_point_matches_definition(three_point):
    members = three_point_set(6)
    for a, b in product(range(-1, 7), repeat=2):
        for t in (0, 1):
            expected = ((a, b), (t,)) in members
            assert three_point.contains(((a, b), (t,))) == expected


@pytest.mark.parametrize(
    "name", ["three_point", "half_line_torsion", "numerical_23", "numerical_357", "quadrant", "quadric"]
)
def test_contains_matches_expansion(name, request):
    S = request.getfixturevalue(name)
    level = 12
    reached, weight = expand_by_level(S, level)
    for f in product(range(-2, 9), repeat=S.group.rank):
        for t in S.group.torsion_elements():
            m = S.group.element(f, t)
            if weight(m) <= level:
                assert S.contains(m) == (m in reached)
                if m in reached:
                    assert S.saturation_contains(m)


def test_saturation_in_ambient_group():
    # In Z^2 the saturation of <(2,0),(1,1),(0,2)> is all of the quadrant.
    S = AffineMonoid(AbelianGroup(2), [(2, 0), (1, 1), (0, 2)])
    assert sorted(g.free for g in S.saturation_generators()) == [(0, 1), (1, 0)]


def test_saturation_in_group_completion():
    # Re-expressed in its own group completion the same monoid is saturated.
    S = AffineMonoid(AbelianGroup(2), [(2, 0), (1, 1), (0, 2)])
    comp = group_completion(S)
    inner = comp.monoid
    sat = [comp.embed(g) for g in inner.saturation_generators()]
    assert sorted(g.free for g in sat) == [(0, 2), (1, 1), (2, 0)]
    for a, b in product(range(7), repeat=2):
        m = S.group.element((a, b))
        h = comp.restrict(m)
        if h is None:
            assert (a + b) % 2 == 1
        else:
            assert comp.embed(h) == m
            assert inner.contains(h) == S.contains(m)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_saturation_idempotent(data):
    gens = data.draw(
        st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(any), min_size=2, max_size=4)
    )
    S = AffineMonoid(AbelianGroup(2), gens)
    if not S.dual_is_pointed:
        return
    T = S.saturation()
    for f in product(range(-3, 6), repeat=2):
        assert T.saturation_contains(f) == S.saturation_contains(f)
        assert T.contains(f) == S.saturation_contains(f)


def test_corollary_escape():
    S = AffineMonoid(AbelianGroup(1), [(2,), (3,)])
    assert corollary_escape_exponent(S, (2,), (-1,)) == 1
    assert corollary_escape_exponent(S, (3,), (-2,)) == 1
    Q = AffineMonoid(AbelianGroup(2), [(1, 0), (0, 1)])
    assert corollary_escape_exponent(Q, (5, 0), (-1, -1)) == 1
    assert corollary_escape_exponent(Q, (5, 3), (-1, 0)) == 6
    with pytest.raises(AlphaInSaturationError):
        corollary_escape_exponent(S, (2,), (1,))


def test_faces(three_point, half_line_torsion):
    faces = {f.functional.coords: f for f in three_point.faces()}
    assert set(faces) == {(0, 1), (1, 0)}
    assert set(g.free for g in faces[(1, 0)].generators) == {(0, 1), (0, 2)}
    (face,) = half_line_torsion.faces()
    assert [g.free for g in face.generators] == [(0,)]
    assert face.is_ray_face
    assert Face(three_point).contains(((1, 1), (0,)))


@pytest.mark.parametrize("name", ["three_point", "quadric", "numerical_357"])
def test_face_axiom(name, request):
    S = request.getfixturevalue(name)
    rng = random.Random(3)
    elems = []
    for f in product(range(0, 5), repeat=S.group.rank):
        for t in S.group.torsion_elements():
            if S.contains((f, t)):
                elems.append(S.group.element(f, t))
    for face in S.faces():
        for _ in range(300):
            a, b = rng.choice(elems), rng.choice(elems)
            if face.contains(a + b):
                assert face.contains(a) and face.contains(b)
