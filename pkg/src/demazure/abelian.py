"""Finitely generated abelian groups ``Z^r + Z/d_1 + ... + Z/d_k``.

Elements keep their free and torsion coordinates apart; torsion coordinates
are reduced into ``[0, d_i)`` on construction so that equality is structural.
Linear functionals (:class:`DualVector`) only see the free part.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import _linalg
from .errors import DimensionMismatch, DomainError

Matrix = List[List[int]]


def smith_normal_form(A: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Smith normal form of an integer matrix.

    Args:
      A: an ``m x n`` integer matrix given as nested sequences.

    Returns:
      ``(U, D, V)`` with ``U @ A @ V == D``, ``U`` and ``V`` unimodular and
      ``D`` diagonal with non-negative entries ``d_1 | d_2 | ...``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = _linalg.identity(m)
    V = _linalg.identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, D, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def diagonal(D: Sequence[Sequence[int]]) -> List[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> List[Tuple[int, ...]]:
    """A Z-basis of ``{x in Z^ncols : A x = 0}``."""
    if not A:
        return [tuple(r) for r in _linalg.identity(ncols)]
    _, D, V = smith_normal_form(A)
    diag = diagonal(D)
    basis = []
    for j in range(ncols):
        if j >= len(diag) or diag[j] == 0:
            basis.append(tuple(V[i][j] for i in range(ncols)))
    return basis


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """One integer solution of ``A x = b``, or ``None`` when there is none."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return ()
    U, D, V = smith_normal_form(A)
    c = [_linalg.dot(row, b) for row in U]
    diag = diagonal(D)
    z = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        elif c[i] % d:
            return None
        else:
            z[i] = c[i] // d
    return tuple(_linalg.dot(row, z) for row in V)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank`` plus cyclic factors in invariant-factor form."""

    rank: int
    torsion_orders: Tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(int(d) for d in self.torsion_orders)
        object.__setattr__(self, "torsion_orders", orders)
        if self.rank < 0:
            raise DomainError("rank must be non-negative")
        for i, d in enumerate(orders):
            if d < 2:
                raise DomainError(f"torsion order {d} must be at least 2")
            if i and d % orders[i - 1]:
                raise DomainError("torsion orders must form a divisibility chain")

    @property
    def order_of_torsion(self) -> int:
        out = 1
        for d in self.torsion_orders:
            out *= d
        return out

    def element(self, free: Iterable[int] = (), torsion: Iterable[int] = ()) -> "GroupElement":
        return GroupElement(self, tuple(free), tuple(torsion))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank, (0,) * len(self.torsion_orders))

    def torsion_elements(self) -> List[Tuple[int, ...]]:
        """All torsion coordinate tuples, in lexicographic order."""
        out = [()]
        for d in self.torsion_orders:
            out = [t + (x,) for t in out for x in range(d)]
        return out

    def torsion_generators(self) -> List["GroupElement"]:
        k = len(self.torsion_orders)
        return [
            self.element((0,) * self.rank, tuple(int(i == j) for j in range(k)))
            for i in range(k)
        ]

    def __str__(self):
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{d}" for d in self.torsion_orders]
        return " + ".join(parts) or "0"


@dataclass(frozen=True, eq=True)
class GroupElement:
    group: AbelianGroup = field(repr=False)
    free: Tuple[int, ...]
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        g = self.group
        if len(self.free) != g.rank or len(self.torsion) != len(g.torsion_orders):
            raise DimensionMismatch(
                f"element ({self.free}, {self.torsion}) does not fit group {g}"
            )
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(
            self, "torsion", tuple(int(x) % d for x, d in zip(self.torsion, g.torsion_orders))
        )

    def _check(self, other: "GroupElement"):
        if other.group != self.group:
            raise DimensionMismatch(f"elements of {self.group} and {other.group}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    @property
    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (self.free, self.torsion)

    def __lt__(self, other: "GroupElement") -> bool:
        return self.key < other.key

    def __repr__(self):
        if self.torsion:
            return f"({', '.join(map(str, self.free))}; {', '.join(map(str, self.torsion))})"
        return f"({', '.join(map(str, self.free))})"


@dataclass(frozen=True)
class DualVector:
    """A homomorphism ``M -> Q`` given on the free coordinates.

    Integer coordinates give an element of ``N = Hom(M, Z)``; rational ones
    are allowed for derivation characters.
    """

    coords: Tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "coords",
            tuple(int(c) if Fraction(c).denominator == 1 else Fraction(c) for c in self.coords),
        )

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coords)

    def __len__(self):
        return len(self.coords)

    def __call__(self, m: GroupElement):
        return pairing(self, m)

    def scale(self, c) -> "DualVector":
        return DualVector(tuple(Fraction(c) * x for x in self.coords))

    def __repr__(self):
        return f"DualVector({', '.join(str(c) for c in self.coords)})"


def pairing(u: DualVector, m: GroupElement):
    """``u(m)``: dot product with the free part; torsion contributes nothing."""
    if len(u.coords) != len(m.free):
        raise DimensionMismatch(f"pairing a length-{len(u.coords)} functional with rank {len(m.free)}")
    return _linalg.dot(u.coords, m.free)


@dataclass(frozen=True)
class Presentation:
    """``Z^n / <relations>`` in canonical coordinates, with coordinate maps.

    ``to_canonical`` and ``from_canonical`` are mutually inverse bijections
    between classes of user vectors and canonical group elements.
    """

    n: int
    group: AbelianGroup
    _V: Tuple[Tuple[int, ...], ...] = field(repr=False)
    _Vinv: Tuple[Tuple[int, ...], ...] = field(repr=False)
    _free_pos: Tuple[int, ...] = field(repr=False)
    _torsion_pos: Tuple[int, ...] = field(repr=False)

    def to_canonical(self, x: Sequence[int]) -> GroupElement:
        if len(x) != self.n:
            raise DimensionMismatch(f"expected {self.n} coordinates, got {len(x)}")
        y = [_linalg.dot(x, col) for col in zip(*self._V)] if self.n else []
        return self.group.element(
            tuple(y[p] for p in self._free_pos), tuple(y[p] for p in self._torsion_pos)
        )

    def from_canonical(self, m: GroupElement) -> Tuple[int, ...]:
        y = [0] * self.n
        for p, v in zip(self._free_pos, m.free):
            y[p] = v
        for p, v in zip(self._torsion_pos, m.torsion):
            y[p] = v
        return tuple(_linalg.dot(y, col) for col in zip(*self._Vinv)) if self.n else ()


def group_from_presentation(n: int, relations: Sequence[Sequence[int]]) -> Presentation:
    """Canonicalize ``Z^n / <relations>`` into invariant-factor form."""
    relations = [tuple(int(x) for x in r) for r in relations if any(r)]
    for r in relations:
        if len(r) != n:
            raise DimensionMismatch(f"relation {r} has length {len(r)}, expected {n}")
    if relations:
        # Row vectors y = x V turn the relation lattice into the rows of D.
        _, D, V = smith_normal_form(relations)
        diag = diagonal(D)
    else:
        V, diag = _linalg.identity(n), []
    Vinv = [[int(x) for x in row] for row in _linalg.inverse(V)] if n else []
    free_pos, torsion_pos, orders = [], [], []
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            free_pos.append(j)
        elif d > 1:
            torsion_pos.append(j)
            orders.append(d)
    group = AbelianGroup(len(free_pos), tuple(orders))
    return Presentation(
        n,
        group,
        tuple(map(tuple, V)),
        tuple(map(tuple, Vinv)),
        tuple(free_pos),
        tuple(torsion_pos),
    )


def parse_element(group: AbelianGroup, data) -> GroupElement:
    """Accept ``GroupElement``, ``(free, torsion)`` or a flat free vector."""
    if isinstance(data, GroupElement):
        return data
    if isinstance(data, dict):
        return group.element(data.get("free", ()), data.get("torsion", ()))
    if (
        isinstance(data, tuple)
        and len(data) == 2
        and all(isinstance(p, (tuple, list)) for p in data)
    ):
        return group.element(data[0], data[1])
    return group.element(tuple(data), (0,) * len(group.torsion_orders))


def subgroup_structure(
    group: AbelianGroup, gens: Sequence[GroupElement]
) -> Tuple[Presentation, Dict[GroupElement, GroupElement]]:
    """Presentation of the subgroup generated by ``gens``.

    Returns the presentation ``Z^len(gens) / relations`` of the subgroup
    together with the image of each generator in canonical coordinates.
    """
    n = len(gens)
    r, k = group.rank, len(group.torsion_orders)
    # x in Z^n is a relation iff F x = 0 and T x = D y for some y.
    rows = [[g.free[i] for g in gens] + [0] * k for i in range(r)]
    rows += [
        [g.torsion[i] for g in gens] + [-group.torsion_orders[i] if j == i else 0 for j in range(k)]
        for i in range(k)
    ]
    if rows:
        kernel = integer_kernel(rows, n + k)
        relations = [v[:n] for v in kernel]
    else:
        relations = []
    pres = group_from_presentation(n, relations)
    images = {
        g: pres.to_canonical(tuple(int(i == j) for j in range(n))) for i, g in enumerate(gens)
    }
    return pres, images


def express_in_generators(
    group: AbelianGroup, gens: Sequence[GroupElement], m: GroupElement
) -> Optional[Tuple[int, ...]]:
    """Integer coefficients ``x`` with ``sum x_i gens_i == m``, if any exist."""
    n = len(gens)
    r, k = group.rank, len(group.torsion_orders)
    rows = [[g.free[i] for g in gens] + [0] * k for i in range(r)]
    rows += [
        [g.torsion[i] for g in gens] + [-group.torsion_orders[i] if j == i else 0 for j in range(k)]
        for i in range(k)
    ]
    if not rows:
        return (0,) * n
    sol = solve_integer(rows, list(m.free) + list(m.torsion))
    return None if sol is None else sol[:n]
