"""Demazure roots of cones and of cancellative monoids.

For a cone ``sigma`` (rays in ``N``) a root is ``alpha`` in ``M`` with
``rho(alpha) = -1`` on one ray and ``rho'(alpha) >= 0`` on all the others.
For a monoid ``S`` the condition on the other rays is replaced by
``g + alpha in S`` for every generator ``g`` with ``rho(g) > 0``.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

from . import _linalg
from .abelian import AbelianGroup, DualVector, GroupElement, parse_element
from .cone import Cone
from .errors import NonPointedError
from .monoid import AffineMonoid


@dataclass(frozen=True)
class DemazureRoot:
    """A root ``alpha`` together with its distinguished ray.

    ``candidate_rays`` lists every ray for which ``alpha`` satisfies the
    definition; the distinguished ray is the first of them.
    """

    alpha: GroupElement
    distinguished_ray: DualVector
    candidate_rays: Tuple[DualVector, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if _linalg.dot(self.distinguished_ray.coords, self.alpha.free) != -1:
            raise ValueError("a root pairs to -1 with its distinguished ray")

    @property
    def key(self):
        return (self.alpha.free, self.alpha.torsion, self.distinguished_ray.coords)


def _cone_of(sigma: Union[Cone, Sequence[Sequence[int]]]) -> Cone:
    return sigma if isinstance(sigma, Cone) else Cone.generated_by(sigma)


def _alpha_in(group: AbelianGroup, alpha) -> GroupElement:
    return parse_element(group, alpha)


def is_cone_root(sigma: Cone, alpha) -> Optional[DemazureRoot]:
    """Root test for a pointed cone; torsion in ``alpha`` is unconstrained."""
    sigma = _cone_of(sigma)
    if sigma.has_lineality:
        raise NonPointedError("roots are defined for pointed cones")
    if not isinstance(alpha, GroupElement):
        alpha = AbelianGroup(sigma.ambient_rank).element(alpha)
    values = [_linalg.dot(r, alpha.free) for r in sigma.rays]
    hits = [i for i, v in enumerate(values) if v == -1]
    # Literal definition: all *other* rays must be non-negative.
    good = [
        sigma.rays[i]
        for i in hits
        if all(v >= 0 for j, v in enumerate(values) if j != i)
    ]
    if not good:
        return None
    rays = tuple(DualVector(r) for r in good)
    return DemazureRoot(alpha, rays[0], rays)


def monoid_root_condition(S: AffineMonoid, alpha: GroupElement, rho: Sequence[int]) -> bool:
    """Whether ``alpha`` is a root of ``S`` with distinguished ray ``rho``.

    Condition (ii) is checked on generators only, which suffices because any
    element with ``rho(m) > 0`` has a generator summand with ``rho(g) > 0``.
    """
    if _linalg.dot(rho, alpha.free) != -1:
        return False
    return all(
        S.contains(g + alpha) for g in S.positive_generators if _linalg.dot(rho, g.free) > 0
    )


def is_monoid_root(S: AffineMonoid, alpha) -> Optional[DemazureRoot]:
    S.require_pointed_dual()
    alpha = _alpha_in(S.group, alpha)
    good = [rho for rho in S.sigma.rays if monoid_root_condition(S, alpha, rho)]
    if not good:
        return None
    rays = tuple(DualVector(r) for r in good)
    return DemazureRoot(alpha, rays[0], rays)


def box(group: AbelianGroup, bound: int) -> List[GroupElement]:
    """All elements with ``|free|_inf <= bound`` and every torsion value, sorted."""
    free = product(range(-bound, bound + 1), repeat=group.rank)
    tors = group.torsion_elements()
    return [group.element(f, t) for f in free for t in tors]


def _cone_roots_in_box(sigma: Cone, group: AbelianGroup, bound: int) -> List[DemazureRoot]:
    # Per ray, alpha lies on the hyperplane rho(alpha) = -1; solving for the
    # last coordinate with a nonzero coefficient keeps the scan (2b+1)^(r-1).
    roots = []
    r = sigma.ambient_rank
    tors = group.torsion_elements()
    for rho in sigma.rays:
        pivot = max(i for i in range(r) if rho[i] != 0)
        for rest in product(range(-bound, bound + 1), repeat=r - 1):
            partial = sum(c * rho[i] for i, c in zip([j for j in range(r) if j != pivot], rest))
            num = -1 - partial
            if num % rho[pivot]:
                continue
            x = num // rho[pivot]
            if abs(x) > bound:
                continue
            free = list(rest)
            free.insert(pivot, x)
            if all(_linalg.dot(other, free) >= 0 for other in sigma.rays if other != rho):
                for t in tors:
                    a = group.element(free, t)
                    roots.append(DemazureRoot(a, DualVector(rho), (DualVector(rho),)))
    return _merge(roots)


def _merge(roots: List[DemazureRoot]) -> List[DemazureRoot]:
    """Collapse duplicates (same alpha, several rays) and sort."""
    by_alpha = {}
    for root in roots:
        by_alpha.setdefault(root.alpha, []).extend(root.candidate_rays)
    out = []
    for alpha, rays in by_alpha.items():
        rays = tuple(sorted(set(rays), key=lambda d: d.coords))
        out.append(DemazureRoot(alpha, rays[0], rays))
    return sorted(out, key=lambda x: x.alpha.key)


def enumerate_roots(
    obj: Union[Cone, AffineMonoid], bound: int, method: str = "filtered", group: AbelianGroup = None
) -> List[DemazureRoot]:
    """All roots with ``|alpha.free|_inf <= bound``, sorted lexicographically.

    For a monoid, ``method="filtered"`` runs the cone roots of the saturation
    through the monoid test (complete, since monoid roots are saturation
    roots); ``method="exhaustive"`` tests every element of the box against the
    definition directly and serves as an independent route.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if isinstance(obj, AffineMonoid):
        S = obj
        S.require_pointed_dual()
        if method == "filtered":
            cands = _cone_roots_in_box(S.sigma, S.group, bound)
            found = []
            for c in cands:
                rays = tuple(
                    DualVector(rho.coords)
                    for rho in c.candidate_rays
                    if monoid_root_condition(S, c.alpha, rho.coords)
                )
                if rays:
                    found.append(DemazureRoot(c.alpha, rays[0], rays))
            return found
        if method == "exhaustive":
            found = []
            for a in box(S.group, bound):
                root = is_monoid_root(S, a)
                if root is not None:
                    found.append(root)
            return found
        raise ValueError(f"unknown method {method!r}")
    sigma = _cone_of(obj)
    if sigma.has_lineality:
        raise NonPointedError("roots are defined for pointed cones")
    group = group or AbelianGroup(sigma.ambient_rank)
    if method == "exhaustive":
        return [x for x in (is_cone_root(sigma, a) for a in box(group, bound)) if x is not None]
    return _cone_roots_in_box(sigma, group, bound)


@dataclass
class InclusionReport:
    bound: int
    monoid_roots: List[DemazureRoot]
    saturation_roots: List[DemazureRoot]
    violations: List[DemazureRoot]

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def equal(self) -> bool:
        return _pairs(self.monoid_roots) == _pairs(self.saturation_roots)


def _pairs(roots):
    return {(r.alpha, rho.coords) for r in roots for rho in r.candidate_rays}


def check_inclusion_in_saturation_roots(S: AffineMonoid, bound: int) -> InclusionReport:
    """Check that every root of ``S`` in the box is a root of ``S^sat`` with the same ray.

    Roots of ``S`` come from the exhaustive definition scan; roots of the
    saturation from the monoid test on the saturation's own generators.
    """
    S.require_pointed_dual()
    mine = enumerate_roots(S, bound, method="exhaustive")
    sat = enumerate_roots(S.saturation(), bound, method="exhaustive")
    sat_pairs = _pairs(sat)
    violations = [
        r for r in mine if any((r.alpha, rho.coords) not in sat_pairs for rho in r.candidate_rays)
    ]
    return InclusionReport(bound, mine, sat, violations)


def roots_by_ray(roots: Sequence[DemazureRoot]):
    """Group roots by distinguished ray (each root listed under every ray it admits)."""
    out = {}
    for r in roots:
        for rho in r.candidate_rays:
            out.setdefault(rho.coords, []).append(r.alpha)
    return {k: sorted(v, key=lambda a: a.key) for k, v in sorted(out.items())}
