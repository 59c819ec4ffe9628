"""Finitely generated cancellative monoids inside ``Z^r + T``.

An :class:`AffineMonoid` is given by generators in an ambient group.  Its
free parts span the recession cone; the dual of that cone is ``S*`` and its
rays are ``S*(1)``.  Generators with zero free part are torsion and generate
the finite unit group.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from . import _linalg
from .abelian import (
    AbelianGroup,
    DualVector,
    GroupElement,
    express_in_generators,
    pairing,
    parse_element,
    subgroup_structure,
)
from .cone import MAX_HILBERT_RANK, Cone, dual_cone, hilbert_basis
from .errors import (
    AlphaInSaturationError,
    DomainError,
    EmptyGeneratorsError,
    NonPointedError,
    RankUnsupportedError,
    ZeroGeneratorError,
)

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]


class AffineMonoid:
    """The submonoid of ``group`` generated by ``generators``.

    Membership queries are memoized per instance.  The memo only ever gains
    entries whose value is a pure function of the key, so concurrent readers
    at worst repeat work.
    """

    def __init__(self, group: AbelianGroup, generators: Iterable, name: Optional[str] = None):
        gens: List[GroupElement] = []
        for g in generators:
            g = parse_element(group, g)
            if g.is_zero():
                raise ZeroGeneratorError("the zero element is not a valid generator")
            if g not in gens:
                gens.append(g)
        if not gens:
            raise EmptyGeneratorsError("a monoid needs at least one generator")
        self.group = group
        self.name = name
        self.generators: Tuple[GroupElement, ...] = tuple(gens)
        self.positive_generators = tuple(g for g in gens if any(g.free))
        self.unit_subgroup = self._close_units([g.torsion for g in gens if not any(g.free)])
        self._units = frozenset(u.torsion for u in self.unit_subgroup)
        self.recession_cone = Cone.generated_by([g.free for g in self.positive_generators], group.rank)
        self.sigma = dual_cone(self.recession_cone)
        self.dual_rays = tuple(DualVector(r) for r in self.sigma.rays)
        self._memo: Dict[Key, bool] = {}

    def _close_units(self, torsions) -> Tuple[GroupElement, ...]:
        zero = tuple(0 for _ in self.group.torsion_orders)
        found = {zero}
        frontier = [zero]
        while frontier:
            t = frontier.pop()
            for s in torsions:
                u = tuple((a + b) % d for a, b, d in zip(t, s, self.group.torsion_orders))
                if u not in found:
                    found.add(u)
                    frontier.append(u)
        return tuple(self.group.element((0,) * self.group.rank, t) for t in sorted(found))

    @property
    def is_pointed(self) -> bool:
        """Whether the free parts of the generators lie in a pointed cone."""
        return not self.recession_cone.has_lineality

    @property
    def dual_is_pointed(self) -> bool:
        """Whether ``S*`` has ``0`` as a face, i.e. the free parts span ``Q^r``."""
        return self.recession_cone.is_full_dimensional

    def require_pointed(self):
        if not self.is_pointed:
            raise NonPointedError(
                "the free parts of the generators span a cone containing a line"
            )

    def require_pointed_dual(self):
        self.require_pointed()
        if not self.dual_is_pointed:
            raise NonPointedError(
                "the dual monoid contains a line: the generators do not span the free rank"
            )

    def element(self, data) -> GroupElement:
        return parse_element(self.group, data)

    # -- membership ------------------------------------------------------

    def contains(self, m) -> bool:
        """Exact membership ``m in S`` by memoized search over positive generators."""
        self.require_pointed()
        m = parse_element(self.group, m)
        return self._member(m.free, m.torsion)

    def _member(self, free, tors) -> bool:
        key = (free, tors)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        stack = [key]
        orders = self.group.torsion_orders
        # Iterative post-order walk; a state is decided once all its
        # predecessors (state minus one positive generator) are decided.
        while stack:
            f, t = stack[-1]
            if (f, t) in self._memo:
                stack.pop()
                continue
            if not self.recession_cone.contains(f):
                self._memo[(f, t)] = False
                stack.pop()
                continue
            if not any(f):
                self._memo[(f, t)] = t in self._units
                stack.pop()
                continue
            pending = None
            result = False
            for g in self.positive_generators:
                sub = (
                    tuple(a - b for a, b in zip(f, g.free)),
                    tuple((a - b) % d for a, b, d in zip(t, g.torsion, orders)),
                )
                val = self._memo.get(sub)
                if val is None:
                    pending = sub
                    break
                if val:
                    result = True
                    break
            if pending is not None and not result:
                stack.append(pending)
                continue
            self._memo[(f, t)] = result
            stack.pop()
        return self._memo[key]

    def saturation_contains(self, m) -> bool:
        """``m in S^sat``: every functional of ``S*`` is non-negative on ``m``."""
        m = parse_element(self.group, m)
        return self.recession_cone.contains(m.free)

    def saturation_generators(self) -> List[GroupElement]:
        """Hilbert basis of the recession cone plus one generator per torsion factor."""
        self.require_pointed_dual()
        if self.group.rank > MAX_HILBERT_RANK:
            raise RankUnsupportedError(f"saturation needs free rank <= {MAX_HILBERT_RANK}")
        zeros = (0,) * len(self.group.torsion_orders)
        out = [self.group.element(h, zeros) for h in hilbert_basis(self.recession_cone)]
        return out + self.group.torsion_generators()

    def saturation(self) -> "AffineMonoid":
        name = f"{self.name}^sat" if self.name else None
        return AffineMonoid(self.group, self.saturation_generators(), name=name)

    def faces(self) -> List["Face"]:
        """The ray faces ``S ∩ rho^perp``, one per ray of ``S*``."""
        return [Face(self, rho) for rho in self.dual_rays]

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"AffineMonoid({label}{list(self.generators)} in {self.group})"


def build_monoid(group: AbelianGroup, generators: Iterable, name: Optional[str] = None) -> AffineMonoid:
    return AffineMonoid(group, generators, name=name)


def contains(S: AffineMonoid, m) -> bool:
    return S.contains(m)


def saturation_contains(S: AffineMonoid, m) -> bool:
    return S.saturation_contains(m)


def saturation_generators(S: AffineMonoid) -> List[GroupElement]:
    return S.saturation_generators()


def corollary_escape_exponent(S: AffineMonoid, m, alpha) -> int:
    """Least ``l >= 1`` with ``m + l*alpha`` outside ``S``, for ``alpha`` outside ``S^sat``."""
    m = S.element(m)
    alpha = S.element(alpha)
    if S.saturation_contains(alpha):
        raise AlphaInSaturationError(f"{alpha} lies in the saturation; no escape is guaranteed")
    if not S.contains(m):
        raise DomainError(f"{m} is not an element of the monoid")
    witnesses = [r for r in S.sigma.generators if _linalg.dot(r, alpha.free) < 0]
    u = witnesses[0]
    drop = -_linalg.dot(u, alpha.free)
    bound = -(-_linalg.dot(u, m.free) // drop) + 1
    for ell in range(1, bound + 1):
        if not S.contains(m + ell * alpha):
            return ell
    raise AssertionError("escape bound exceeded")  # unreachable: u(m + bound*alpha) < 0


@dataclass(frozen=True, eq=False)
class Face:
    """``S ∩ ker(functional)`` for a functional non-negative on ``S``.

    ``functional=None`` stands for the whole monoid.
    """

    monoid: AffineMonoid
    functional: Optional[DualVector] = None

    def contains(self, m) -> bool:
        m = self.monoid.element(m)
        if not self.monoid.contains(m):
            return False
        return self.functional is None or pairing(self.functional, m) == 0

    @property
    def generators(self) -> Tuple[GroupElement, ...]:
        if self.functional is None:
            return self.monoid.generators
        return tuple(g for g in self.monoid.generators if pairing(self.functional, g) == 0)

    @property
    def is_ray_face(self) -> bool:
        return self.functional is not None and self.functional.coords in self.monoid.sigma.rays

    def __repr__(self):
        what = "all" if self.functional is None else list(self.functional.coords)
        return f"Face({what}: {list(self.generators)})"


@dataclass(frozen=True, eq=False)
class Completion:
    """``S`` re-expressed inside its own group completion ``M_S``.

    ``embed`` maps canonical elements of ``M_S`` into the ambient group and
    ``restrict`` maps ambient elements back (``None`` outside ``M_S``).
    """

    monoid: AffineMonoid
    embed: Callable[[GroupElement], GroupElement]
    restrict: Callable[[GroupElement], Optional[GroupElement]]


def group_completion(S: AffineMonoid) -> Completion:
    gens = S.generators
    pres, images = subgroup_structure(S.group, gens)

    def embed(h: GroupElement) -> GroupElement:
        x = pres.from_canonical(h)
        out = S.group.zero()
        for c, g in zip(x, gens):
            out = out + c * g
        return out

    def restrict(m: GroupElement) -> Optional[GroupElement]:
        x = express_in_generators(S.group, gens, S.element(m))
        return None if x is None else pres.to_canonical(x)

    inner = AffineMonoid(pres.group, [images[g] for g in gens], name=S.name)
    return Completion(inner, embed, restrict)
