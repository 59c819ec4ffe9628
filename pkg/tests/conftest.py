"""Shared fixtures: the worked example monoids and cones."""

from itertools import product

import pytest

from demazure.abelian import AbelianGroup
from demazure.cone import Cone
from demazure.monoid import AffineMonoid

# Z_{>=0}^2 x Z/2 with three points removed.
DELETED = {((0, 1), (0,)), ((0, 0), (1,)), ((1, 0), (1,))}
THREE_POINT_GENERATORS = [
    ((1, 0), (0,)),
    ((0, 1), (1,)),
    ((0, 2), (1,)),
    ((2, 0), (1,)),
    ((1, 1), (0,)),
]


def three_point_set(box: int):
    """Elements of the three-point deletion with both coordinates in ``[0, box]``."""
    return {
        ((a, b), (t,))
        for a, b in product(range(box + 1), repeat=2)
        for t in (0, 1)
        if ((a, b), (t,)) not in DELETED
    }


def irreducible_elements(points):
    """Non-zero elements of ``points`` that are not a sum of two non-zero elements of it."""
    nonzero = [p for p in points if p != ((0, 0), (0,))]
    sums = set()
    for (f1, t1), (f2, t2) in product(nonzero, repeat=2):
        sums.add(((f1[0] + f2[0], f1[1] + f2[1]), ((t1[0] + t2[0]) % 2,)))
    return sorted(p for p in nonzero if p not in sums)


@pytest.fixture(scope="session")
def z2t():
    return AbelianGroup(2, (2,))


@pytest.fixture(scope="session")
def three_point(z2t):
    # The generating set is derived, not assumed: irreducibles of the box.
    # Every irreducible has coordinates <= 2, so the box [0,4]^2 sees them all.
    gens = irreducible_elements(three_point_set(4))
    assert sorted(gens) == sorted(THREE_POINT_GENERATORS)
    return AffineMonoid(z2t, gens, name="three-point deletion")


@pytest.fixture(scope="session")
def half_line_torsion():
    G = AbelianGroup(1, (2,))
    return AffineMonoid(G, [((1,), (0,)), ((0,), (1,))], name="Z>=0 x Z/2")


@pytest.fixture(scope="session")
def numerical_23():
    return AffineMonoid(AbelianGroup(1), [(2,), (3,)], name="<2,3>")


@pytest.fixture(scope="session")
def numerical_357():
    return AffineMonoid(AbelianGroup(1), [(3,), (5,), (7,)], name="<3,5,7>")


@pytest.fixture(scope="session")
def quadrant():
    return AffineMonoid(AbelianGroup(2), [(1, 0), (0, 1)], name="quadrant")


@pytest.fixture(scope="session")
def quadric():
    """Lattice points of cone((1,0),(1,2)), i.e. the A_1 singularity."""
    return AffineMonoid(AbelianGroup(2), [(1, 0), (1, 1), (1, 2)], name="quadric")


@pytest.fixture(scope="session")
def quadrant_cone():
    return Cone.generated_by([(1, 0), (0, 1)])


@pytest.fixture
def fixture_monoids(three_point, half_line_torsion, numerical_23, numerical_357, quadrant, quadric):
    return [three_point, half_line_torsion, numerical_23, numerical_357, quadrant, quadric]


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d} {status}: {mod.TITLES[n]} -- {detail}")
