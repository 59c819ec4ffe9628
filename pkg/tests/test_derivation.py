import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demazure.abelian import AbelianGroup, DualVector
from demazure.derivation import (
    AlgebraElement,
    Derivation,
    HomogeneousDerivation,
    apply,
    decompose,
    exp_action,
    exp_sum_parameter,
    exp_two_parameter,
    extract_lnd_pieces,
    falling_factorial_top,
    fraction_str,
    is_locally_nilpotent,
    kernel_face,
    lnd_verdict,
    nilpotency_data,
    nilpotent_on_generators,
    root_derivation,
)
from demazure.errors import (
    ExponentOutsideCarrierError,
    IllDefinedDerivationError,
    InconsistentImagesError,
    IterationBudgetExceeded,
    NotARootError,
    NotLocallyNilpotentError,
    TotalNotNilpotentError,
    ZeroDerivationError,
)
from demazure.monoid import AffineMonoid
from demazure.roots import DemazureRoot, enumerate_roots


def mono(S, m, c=1):
    return AlgebraElement.monomial(S.group, m, c)


def elements_in_box(S, box):
    out = []
    for f in product(range(0, box + 1), repeat=S.group.rank):
        for t in S.group.torsion_elements():
            if S.contains((f, t)):
                out.append(S.group.element(f, t))
    return out


def random_poly(rng, S, elems, terms=3):
    return AlgebraElement(
        S.group, {rng.choice(elems): Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(terms)}
    )


@pytest.fixture
def ddx(quadrant):
    return HomogeneousDerivation((-1, 0), (1, 0), quadrant)


def test_fraction_rendering():
    assert fraction_str(Fraction(3)) == "3"
    assert fraction_str(Fraction(-1, 2)) == "-1/2"


def test_algebra_arithmetic(quadrant):
    x, y = mono(quadrant, (1, 0)), mono(quadrant, (0, 1))
    assert (x + y) * (x - y) == x * x - y * y
    assert (x - x).is_zero()
    assert 2 * x == x + x
    with pytest.raises(ExponentOutsideCarrierError):
        AlgebraElement(quadrant.group, {(-1, 0): 1}, carrier=quadrant)


def test_root_derivation_examples(quadrant, half_line_torsion):
    G = quadrant.group
    D = root_derivation(DemazureRoot(G.element((-1, 0)), DualVector((1, 0))), quadrant)
    assert apply(D, mono(quadrant, (1, 0))) == mono(quadrant, (0, 0))
    assert apply(D, mono(quadrant, (0, 1))).is_zero()
    T = half_line_torsion
    D = root_derivation(DemazureRoot(T.group.element((-1,), (1,)), DualVector((1,))), T)
    assert apply(D, mono(T, ((1,), (0,)))) == mono(T, ((0,), (1,)))
    D = root_derivation(DemazureRoot(G.element((-1, 2)), DualVector((1, 0))), quadrant)
    assert apply(D, mono(quadrant, (1, 0))) == mono(quadrant, (0, 2))


def test_root_derivation_rejects_non_root(numerical_23):
    G = numerical_23.group
    with pytest.raises(NotARootError):
        root_derivation(DemazureRoot(G.element((-1,)), DualVector((1,))), numerical_23)


def test_apply_examples(quadrant, ddx):
    f = mono(quadrant, (2, 0)) + mono(quadrant, (0, 3))
    assert apply(ddx, f) == mono(quadrant, (1, 0), 2)
    D = HomogeneousDerivation((-1, 2), (1, 0), quadrant)
    assert apply(D, mono(quadrant, (3, 0))) == mono(quadrant, (2, 2), 3)
    assert apply(D, mono(quadrant, (0, 0))).is_zero()
    with pytest.raises(ExponentOutsideCarrierError):
        apply(D, mono(quadrant, (-1, 0)))


def test_ill_defined_pair_is_rejected(quadrant):
    with pytest.raises(IllDefinedDerivationError):
        HomogeneousDerivation((-1, 0), (1, 1), quadrant)


def test_nilpotency_examples(quadrant, ddx):
    assert nilpotency_data(ddx, (3, 0)) == (3, mono(quadrant, (0, 0), 6))
    assert nilpotency_data(ddx, (0, 5)) == (0, mono(quadrant, (0, 5)))
    with pytest.raises(IterationBudgetExceeded):
        nilpotency_data(HomogeneousDerivation((1, 0), (1, 0), quadrant), (1, 0))


def test_lnd_examples(quadrant):
    v = is_locally_nilpotent(HomogeneousDerivation((-1, 1), (2, 0), quadrant))
    assert v and v.scale == 2
    assert v.root.alpha.free == (-1, 1) and v.root.distinguished_ray.coords == (1, 0)
    v = lnd_verdict(quadrant, (-1, 0), (1, 1))
    assert not v and "proportional" in v.reason
    v = is_locally_nilpotent(HomogeneousDerivation((1, 0), (1, 0), quadrant))
    assert not v and "-1" in v.reason
    with pytest.raises(ZeroDerivationError):
        is_locally_nilpotent(HomogeneousDerivation((1, 0), (0, 0), quadrant))


def test_exp_examples(quadrant, ddx):
    p = exp_action(ddx, mono(quadrant, (1, 0)))
    assert p.coeffs == {0: mono(quadrant, (1, 0)), 1: mono(quadrant, (0, 0))}
    D = HomogeneousDerivation((-1, 2), (1, 0), quadrant)
    p = exp_action(D, mono(quadrant, (2, 0)))
    assert p.coeffs == {
        0: mono(quadrant, (2, 0)),
        1: mono(quadrant, (1, 2), 2),
        2: mono(quadrant, (0, 4)),
    }
    assert p.at(0) == mono(quadrant, (2, 0))
    assert exp_action(ddx, mono(quadrant, (0, 3))).degree == 0
    with pytest.raises(NotLocallyNilpotentError):
        exp_action(HomogeneousDerivation((0, 0), (1, 0), quadrant), mono(quadrant, (1, 0)))


def test_kernel_face_examples(quadrant, ddx, half_line_torsion, three_point):
    face = kernel_face(ddx)
    assert face.functional.coords == (1, 0)
    assert [g.free for g in face.generators] == [(0, 1)]
    T = half_line_torsion
    D = root_derivation(DemazureRoot(T.group.element((-1,), (0,)), DualVector((1,))), T)
    face = kernel_face(D)
    assert [g.key for g in face.generators] == [((0,), (1,))]
    (r,) = [r for r in enumerate_roots(three_point, 2) if r.alpha.key == ((-1, 2), (0,))]
    face = kernel_face(root_derivation(r, three_point))
    assert sorted(g.key for g in face.generators) == [((0, 1), (1,)), ((0, 2), (1,))]


def test_decompose_examples(quadrant):
    S = quadrant
    one, x, y = mono(S, (0, 0)), mono(S, (1, 0)), mono(S, (0, 1))
    D = decompose(S, {(1, 0): one, (0, 1): x * x})
    assert [(p.degree.free, p.character.coords) for p in D.pieces] == [((-1, 0), (1, 0)), ((2, -1), (0, 1))]
    D = decompose(S, {(1, 0): x + x * x, (0, 1): AlgebraElement.zero(S.group)})
    assert [(p.degree.free, p.character.coords) for p in D.pieces] == [((0, 0), (1, 0)), ((1, 0), (1, 0))]
    D = decompose(S, {(1, 0): y, (0, 1): x})
    assert [(p.degree.free, p.character.coords) for p in D.pieces] == [((-1, 1), (1, 0)), ((1, -1), (0, 1))]


def test_decompose_errors(three_point, quadrant):
    with pytest.raises(ExponentOutsideCarrierError):
        decompose(quadrant, {(1, 0): mono(quadrant, (-1, 0))})
    # A torsion generator of Z x Z/2 cannot be moved by a character.
    G = AbelianGroup(1, (2,))
    T = AffineMonoid(G, [((1,), (0,)), ((0,), (1,))])
    with pytest.raises(InconsistentImagesError):
        decompose(T, {((0,), (1,)): mono(T, ((1,), (1,)))})


def test_extract_examples(quadrant):
    S = quadrant
    tot = Derivation([HomogeneousDerivation((0, -1), (0, 1), S), HomogeneousDerivation((1, -1), (0, 1), S)])
    assert len(extract_lnd_pieces(tot)) == 2
    single = HomogeneousDerivation((-1, 3), (1, 0), S)
    assert extract_lnd_pieces(Derivation([single])) == [single]
    D = decompose(S, {(1, 0): mono(S, (0, 0)), (0, 1): mono(S, (2, 0))})
    assert [p.degree.free for p in extract_lnd_pieces(D)] == [(-1, 0), (2, -1)]
    bad = Derivation([HomogeneousDerivation((-1, 1), (1, 0), S), HomogeneousDerivation((1, -1), (0, 1), S)])
    with pytest.raises(TotalNotNilpotentError):
        extract_lnd_pieces(bad)


def test_extract_drops_interior_pieces(quadrant):
    S = quadrant
    # Degrees (0,-1), (1,-1), (2,-1): the middle one is not a hull vertex.
    pieces = [HomogeneousDerivation((k, -1), (0, 1), S) for k in range(3)]
    out = extract_lnd_pieces(Derivation(pieces))
    assert [p.degree.free for p in out] == [(0, -1), (2, -1)]


# -- properties -----------------------------------------------------------------


@pytest.mark.parametrize("name", ["three_point", "half_line_torsion", "quadrant", "quadric"])
def test_leibniz(name, request):
    S = request.getfixturevalue(name)
    rng = random.Random(5)
    elems = elements_in_box(S, 3)
    roots = enumerate_roots(S, 3)
    for _ in range(40):
        D = root_derivation(rng.choice(roots), S).scaled(Fraction(rng.randint(1, 4), rng.randint(1, 3)))
        f, g = random_poly(rng, S, elems), random_poly(rng, S, elems)
        assert apply(D, f * g) == f * apply(D, g) + g * apply(D, f)


def test_leibniz_for_sums(quadrant):
    rng = random.Random(6)
    elems = elements_in_box(quadrant, 3)
    D = decompose(quadrant, {(1, 0): mono(quadrant, (0, 0)) + mono(quadrant, (2, 1), 3), (0, 1): mono(quadrant, (1, 1))})
    for _ in range(30):
        f, g = random_poly(rng, quadrant, elems), random_poly(rng, quadrant, elems)
        assert apply(D, f * g) == f * apply(D, g) + g * apply(D, f)


def test_monomials_are_not_zero_divisors(three_point):
    rng = random.Random(8)
    elems = elements_in_box(three_point, 3)
    for _ in range(50):
        f = random_poly(rng, three_point, elems, terms=4)
        m = mono(three_point, rng.choice(elems))
        assert (m * f).is_zero() == f.is_zero()


@pytest.mark.parametrize("name", ["three_point", "half_line_torsion", "quadrant", "quadric"])
def test_root_nilpotency_closed_form(name, request):
    S = request.getfixturevalue(name)
    for r in enumerate_roots(S, 3):
        D = root_derivation(r, S)
        for g in S.generators:
            assert nilpotency_data(D, g) == falling_factorial_top(D, g)


@pytest.mark.parametrize("name", ["three_point", "quadric"])
def test_exp_laws(name, request):
    S = request.getfixturevalue(name)
    rng = random.Random(9)
    elems = elements_in_box(S, 2)
    roots = enumerate_roots(S, 2)
    for _ in range(20):
        D = root_derivation(rng.choice(roots), S)
        a, b = mono(S, rng.choice(elems)), mono(S, rng.choice(elems))
        assert exp_action(D, a * b) == exp_action(D, a) * exp_action(D, b)
        assert exp_two_parameter(D, a) == exp_sum_parameter(D, a)


def test_kernel_factorial_closure(three_point):
    rng = random.Random(10)
    elems = elements_in_box(three_point, 3)
    for r in enumerate_roots(three_point, 2):
        D = root_derivation(r, three_point)
        for _ in range(30):
            m, n = rng.choice(elems), rng.choice(elems)
            if apply(D, mono(three_point, m + n)).is_zero():
                assert apply(D, mono(three_point, m)).is_zero()
                assert apply(D, mono(three_point, n)).is_zero()


def test_decompose_round_trip(quadrant, three_point):
    rng = random.Random(12)
    for S in (quadrant, three_point):
        roots = enumerate_roots(S, 3)
        for _ in range(15):
            chosen = rng.sample(roots, 3)
            pieces = [root_derivation(r, S).scaled(rng.randint(1, 5)) for r in chosen]
            D = Derivation(pieces)
            again = decompose(S, D.images())
            assert [(p.degree, p.character) for p in again.pieces] == [(p.degree, p.character) for p in D.pieces]


@settings(max_examples=60, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_theorem_round_trip_quadrant(a1, a2, g1, g2):
    S = AffineMonoid(AbelianGroup(2), [(1, 0), (0, 1)])
    if (g1, g2) == (0, 0):
        return
    try:
        D = HomogeneousDerivation((a1, a2), (g1, g2), S)
    except IllDefinedDerivationError:
        return
    v = is_locally_nilpotent(D)
    assert bool(v) == nilpotent_on_generators(D)
    if v:
        assert D.same_operator(root_derivation(v.root, S).scaled(v.scale))
