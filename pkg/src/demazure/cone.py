"""Rational polyhedral cones with exact integer data.

A :class:`Cone` is stored in a canonical form: its lineality space by a
reduced basis and the pointed part by primitive extremal rays lying in the
orthogonal complement of the lineality space.  Duals are computed with a
plain double-description pass over integer vectors; at the ranks used here
(at most a handful of coordinates) that is more than fast enough.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from . import _linalg
from .abelian import smith_normal_form, diagonal
from .errors import (
    DimensionMismatch,
    NonPointedError,
    NotFullDimensionalError,
    RankUnsupportedError,
    ZeroVectorError,
)

Vector = Tuple[int, ...]

MAX_HILBERT_RANK = 3


def primitive(v: Sequence[int]) -> Vector:
    """Shortest integer vector on the ray through ``v``.

    >>> primitive((4, 6))
    (2, 3)
    >>> primitive((0, -5))
    (0, -1)
    """
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ZeroVectorError("the zero vector spans no ray")
    return _linalg.primitive_int(v)


def _canonical_lineality(vectors: Iterable[Sequence[int]], dim: int) -> Tuple[Vector, ...]:
    red, _ = _linalg.rref(list(vectors)) if vectors else ([], [])
    return tuple(_linalg.clear_denominators(row) for row in red)


def _project_off(v: Sequence[int], lineality: Sequence[Vector]) -> Vector:
    """Orthogonal projection of ``v`` onto the complement of span(lineality), made primitive."""
    if not lineality:
        return _linalg.primitive_int(v)
    # Solve (L L^T) c = L v, then v - L^T c.
    gram = [[_linalg.dot(a, b) for b in lineality] for a in lineality]
    rhs = [_linalg.dot(a, v) for a in lineality]
    c = _linalg.solve_rational(gram, rhs)
    w = [Fraction(x) - sum(ci * l[i] for ci, l in zip(c, lineality)) for i, x in enumerate(v)]
    if not any(w):
        return tuple(0 for _ in v)
    return _linalg.clear_denominators(w)


def _tight_rank(ineqs: Sequence[Vector], v: Vector) -> int:
    return _linalg.rank([a for a in ineqs if _linalg.dot(a, v) == 0] or [[0] * len(v)])


def double_description(ineqs: Sequence[Sequence[int]], dim: int) -> Tuple[List[Vector], List[Vector]]:
    """Generators of ``{u in Q^dim : a.u >= 0 for every a in ineqs}``.

    Returns ``(rays, lineality)``: canonical primitive extremal rays and a
    canonical lineality basis.
    """
    lin: List[Vector] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: List[Vector] = []
    seen: List[Vector] = []
    for a in ineqs:
        a = tuple(int(x) for x in a)
        if len(a) != dim:
            raise DimensionMismatch(f"inequality {a} is not of length {dim}")
        if not any(a):
            continue
        seen.append(a)
        idx = next((i for i, l in enumerate(lin) if _linalg.dot(a, l) != 0), None)
        if idx is not None:
            l = lin.pop(idx)
            s = _linalg.dot(a, l)
            if s < 0:
                l, s = tuple(-x for x in l), -s
            lin = [_linalg.primitive_int([s * x - _linalg.dot(a, y) * lx for x, lx in zip(y, l)]) for y in lin]
            lin = [y for y in lin if any(y)]
            rays = [_linalg.primitive_int([s * x - _linalg.dot(a, r) * lx for x, lx in zip(r, l)]) for r in rays]
            rays = [r for r in rays if any(r)] + [l]
        else:
            pos = [r for r in rays if _linalg.dot(a, r) > 0]
            neg = [r for r in rays if _linalg.dot(a, r) < 0]
            zero = [r for r in rays if _linalg.dot(a, r) == 0]
            combos = []
            for p in pos:
                ap = _linalg.dot(a, p)
                for n in neg:
                    an = _linalg.dot(a, n)
                    combos.append(_linalg.primitive_int([ap * x - an * y for x, y in zip(n, p)]))
            rays = pos + zero + [c for c in combos if any(c)]
        # Keep only extremal rays, canonicalized modulo the current lineality.
        target = _linalg.rank(seen) - 1
        canon = []
        for r in rays:
            r = _project_off(r, lin)
            if any(r) and r not in canon and _tight_rank(seen, r) == target:
                canon.append(r)
        rays = canon
    lin = list(_canonical_lineality(lin, dim))
    rays = sorted(set(_project_off(r, lin) for r in rays))
    return [r for r in rays if any(r)], lin


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone in ``Q^ambient_rank``.

    Build with :meth:`Cone.generated_by`.  ``rays`` are the extremal rays of
    the pointed part, ``lineality`` a basis of the largest contained linear
    subspace, ``facet_normals`` the primitive inward normals of the facets and
    ``equations`` the linear forms vanishing on the whole cone.
    """

    ambient_rank: int
    rays: Tuple[Vector, ...]
    lineality: Tuple[Vector, ...] = ()
    facet_normals: Tuple[Vector, ...] = field(default=(), compare=False)
    equations: Tuple[Vector, ...] = field(default=(), compare=False)

    @classmethod
    def generated_by(cls, vectors: Iterable[Sequence[int]], ambient_rank: int = None) -> "Cone":
        vectors = [tuple(int(x) for x in v) for v in vectors]
        if ambient_rank is None:
            if not vectors:
                raise DimensionMismatch("ambient rank needed for an empty generator list")
            ambient_rank = len(vectors[0])
        for v in vectors:
            if len(v) != ambient_rank:
                raise DimensionMismatch(f"generator {v} is not of length {ambient_rank}")
        vectors = [v for v in vectors if any(v)]
        dual_rays, dual_lin = double_description(vectors, ambient_rank)
        dual_ineqs = dual_rays + dual_lin + [tuple(-x for x in l) for l in dual_lin]
        rays, lin = double_description(dual_ineqs, ambient_rank)
        return cls(ambient_rank, tuple(rays), tuple(lin), tuple(dual_rays), tuple(dual_lin))

    @property
    def has_lineality(self) -> bool:
        return bool(self.lineality)

    @property
    def generators(self) -> Tuple[Vector, ...]:
        """Rays followed by +/- lineality vectors: a generating set of the cone."""
        return self.rays + self.lineality + tuple(tuple(-x for x in l) for l in self.lineality)

    @property
    def dimension(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, v: Sequence[int]) -> bool:
        return all(_linalg.dot(u, v) >= 0 for u in self.facet_normals) and all(
            _linalg.dot(e, v) == 0 for e in self.equations
        )

    def interior_functional(self) -> Vector:
        """An integer ``w`` with ``w.v > 0`` for every nonzero ``v`` in a pointed cone."""
        if self.has_lineality:
            raise NonPointedError("cone contains a line")
        w = [0] * self.ambient_rank
        for g in self.facet_normals + self.equations + tuple(tuple(-x for x in e) for e in self.equations):
            w = [a + b for a, b in zip(w, g)]
        return tuple(w)

    def __repr__(self):
        tag = f", lineality={list(self.lineality)}" if self.lineality else ""
        return f"Cone({list(self.rays)}{tag})"


def dual_cone(C: Cone) -> Cone:
    """``{u : u.v >= 0 for all v in C}``, with facets and rays swapped."""
    return Cone(C.ambient_rank, C.facet_normals, C.equations, C.rays, C.lineality)


def is_pointed(C: Cone) -> bool:
    return not C.has_lineality


@dataclass(frozen=True)
class HilbertBasis:
    elements: Tuple[Vector, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, v):
        return tuple(v) in self.elements


def _cyclic_rays(C: Cone) -> List[Vector]:
    """Rays of a pointed 3-dimensional cone in cyclic order around its boundary."""
    adj = {r: [] for r in C.rays}
    for u in C.facet_normals:
        on = [r for r in C.rays if _linalg.dot(u, r) == 0]
        a, b = on
        adj[a].append(b)
        adj[b].append(a)
    order = [C.rays[0]]
    prev = None
    while len(order) < len(C.rays):
        cur = order[-1]
        nxt = next(x for x in adj[cur] if x != prev)
        prev = cur
        order.append(nxt)
    return order


def simplicial_pieces(C: Cone) -> List[Tuple[Vector, ...]]:
    """Triangulate a pointed full-dimensional cone by a fan over its first ray."""
    r = C.ambient_rank
    if len(C.rays) == r:
        return [C.rays]
    if r == 3:
        order = _cyclic_rays(C)
        return [(order[0], order[i], order[i + 1]) for i in range(1, len(order) - 1)]
    raise RankUnsupportedError(f"triangulation needs rank <= {MAX_HILBERT_RANK}")


def parallelepiped_points(rays: Sequence[Vector]) -> List[Vector]:
    """Lattice points ``sum c_i v_i`` with ``0 <= c_i < 1`` of a simplicial cone.

    Coset representatives of ``Z^r / V Z^r`` come from the Smith form of the
    ray matrix; each is then reduced into the half-open parallelepiped.
    """
    r = len(rays)
    V = [[rays[j][i] for j in range(r)] for i in range(r)]
    U, D, _ = smith_normal_form(V)
    Uinv = _linalg.inverse(U)
    Vinv = _linalg.inverse(V)
    diag = diagonal(D)
    points = []
    for y in product(*(range(d) for d in diag)):
        x = [sum(Uinv[i][j] * y[j] for j in range(r)) for i in range(r)]
        lam = [sum(Vinv[i][j] * x[j] for j in range(r)) for i in range(r)]
        frac = [c - (c.numerator // c.denominator) for c in lam]
        p = tuple(int(sum(frac[j] * rays[j][i] for j in range(r))) for i in range(r))
        points.append(p)
    return points


def hilbert_basis(C: Cone) -> HilbertBasis:
    """Minimal generating set of ``C ∩ Z^r`` for a pointed full-dimensional cone."""
    if C.has_lineality:
        raise NonPointedError("Hilbert basis needs a pointed cone")
    if not C.is_full_dimensional:
        raise NotFullDimensionalError("Hilbert basis needs a full-dimensional cone")
    if C.ambient_rank > MAX_HILBERT_RANK:
        raise RankUnsupportedError(f"Hilbert bases are supported up to rank {MAX_HILBERT_RANK}")
    if C.ambient_rank == 0:
        return HilbertBasis(())
    candidates = set(C.rays)
    for piece in simplicial_pieces(C):
        candidates.update(p for p in parallelepiped_points(piece) if any(p))
    cands = sorted(candidates)
    irreducible = []
    for h in cands:
        reducible = any(
            h2 != h and C.contains([a - b for a, b in zip(h, h2)]) for h2 in cands
        )
        if not reducible:
            irreducible.append(h)
    return HilbertBasis(tuple(irreducible))
