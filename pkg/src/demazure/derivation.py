"""Homogeneous derivations of the semigroup algebra ``k[S]`` over ``Q``.

A homogeneous derivation of degree ``alpha`` is determined by a character
``gamma`` (a rational functional on the free part) through

    chi^m  |->  gamma(m) * chi^(m + alpha).

It is locally nilpotent exactly when ``gamma`` is a non-zero multiple of a
ray ``rho`` of ``S*`` with ``rho(alpha) = -1`` and ``alpha`` a root of ``S``
for ``rho``.  Everything here is exact: coefficients are ``Fraction``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import _linalg
from .abelian import AbelianGroup, DualVector, GroupElement, pairing, parse_element
from .cone import Cone
from .errors import (
    DomainError,
    ExponentOutsideCarrierError,
    IllDefinedDerivationError,
    InconsistentImagesError,
    IterationBudgetExceeded,
    NotARootError,
    NotLocallyNilpotentError,
    TotalNotNilpotentError,
    ValidationFailedError,
    ZeroDerivationError,
)
from .monoid import AffineMonoid, Face
from .roots import DemazureRoot, monoid_root_condition

#: Extra iterations allowed beyond the predicted nilpotency index.
SAFETY_MARGIN = 32


def fraction_str(q) -> str:
    """Canonical rendering of a rational: ``"3"``, ``"-1/2"``."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"not an exact rational: {text!r}")


class AlgebraElement:
    """A finite sum ``sum c_m chi^m`` with exact rational coefficients.

    Args:
      group: the ambient group of the exponents.
      terms: mapping exponent -> coefficient; zero coefficients are dropped.
      carrier: optional monoid; when given, every exponent must lie in it.
    """

    __slots__ = ("group", "terms", "carrier")

    def __init__(
        self,
        group: AbelianGroup,
        terms: Optional[Mapping] = None,
        carrier: Optional[AffineMonoid] = None,
    ):
        self.group = group
        self.carrier = carrier
        clean: Dict[GroupElement, Fraction] = {}
        for m, c in (terms or {}).items():
            m = parse_element(group, m)
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
                if not clean[m]:
                    del clean[m]
        if carrier is not None:
            for m in clean:
                if not carrier.contains(m):
                    raise ExponentOutsideCarrierError(f"exponent {m} is not in the carrier monoid")
        self.terms = clean

    @classmethod
    def monomial(cls, group, m, coeff=1, carrier=None) -> "AlgebraElement":
        return cls(group, {parse_element(group, m): coeff}, carrier)

    @classmethod
    def zero(cls, group, carrier=None) -> "AlgebraElement":
        return cls(group, {}, carrier)

    def _like(self, terms) -> "AlgebraElement":
        out = AlgebraElement.__new__(AlgebraElement)
        out.group = self.group
        out.carrier = self.carrier
        out.terms = {m: c for m, c in terms.items() if c}
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m) -> Fraction:
        return self.terms.get(parse_element(self.group, m), Fraction(0))

    def support(self) -> List[GroupElement]:
        return sorted(self.terms, key=lambda g: g.key)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return self._like(out)

    def __neg__(self) -> "AlgebraElement":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            out: Dict[GroupElement, Fraction] = {}
            for m, c in self.terms.items():
                for n, d in other.terms.items():
                    k = m + n
                    out[k] = out.get(k, Fraction(0)) + c * d
            return self._like(out)
        q = Fraction(other)
        return self._like({m: q * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_list(self) -> List[Tuple[GroupElement, Fraction]]:
        return [(m, self.terms[m]) for m in self.support()]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.to_list():
            parts.append(f"{fraction_str(c)}*x^{m}")
        return " + ".join(parts)


# -- homogeneous derivations ------------------------------------------------


def _as_dual(gamma, rank: int) -> DualVector:
    if not isinstance(gamma, DualVector):
        gamma = DualVector(tuple(parse_fraction(c) for c in gamma))
    if len(gamma) != rank:
        raise DomainError(f"character of length {len(gamma)} for free rank {rank}")
    return gamma


class HomogeneousDerivation:
    """``chi^m -> gamma(m) chi^(m+alpha)`` on ``k[S]``.

    Construction checks that every generator ``g`` with ``gamma(g) != 0``
    satisfies ``g + alpha in S``; that makes the map well defined on all of
    ``k[S]`` because any ``m`` with ``gamma(m) != 0`` has such a summand.

    Raises:
      IllDefinedDerivationError: if some ``g + alpha`` leaves ``S``.
    """

    __slots__ = ("degree", "character", "carrier")

    def __init__(self, degree, character, carrier: AffineMonoid):
        self.carrier = carrier
        self.degree = parse_element(carrier.group, degree)
        self.character = _as_dual(character, carrier.group.rank)
        bad = well_definedness_failures(carrier, self.degree, self.character)
        if bad:
            raise IllDefinedDerivationError(
                f"generator {bad[0]} plus degree {self.degree} leaves the monoid"
            )

    def gamma(self, m: GroupElement) -> Fraction:
        return Fraction(pairing(self.character, m))

    @property
    def is_zero(self) -> bool:
        """Zero as an operator: ``gamma`` vanishes on every generator."""
        return all(self.gamma(g) == 0 for g in self.carrier.generators)

    def apply_monomial(self, m: GroupElement, coeff=1) -> AlgebraElement:
        c = self.gamma(m) * Fraction(coeff)
        return AlgebraElement(self.carrier.group, {m + self.degree: c} if c else {})

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        return apply(self, f)

    def scaled(self, lam) -> "HomogeneousDerivation":
        return HomogeneousDerivation(self.degree, self.character.scale(lam), self.carrier)

    def same_operator(self, other: "HomogeneousDerivation") -> bool:
        """Equal action on every generator of the carrier."""
        return all(
            self.apply_monomial(g) == other.apply_monomial(g) for g in self.carrier.generators
        )

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousDerivation)
            and self.degree == other.degree
            and self.character == other.character
            and self.carrier is other.carrier
        )

    def __hash__(self):
        return hash((self.degree, self.character))

    def __repr__(self):
        gamma = ", ".join(fraction_str(c) for c in self.character.coords)
        return f"HomogeneousDerivation(degree={self.degree}, gamma=({gamma}))"


def well_definedness_failures(S: AffineMonoid, alpha: GroupElement, gamma: DualVector) -> List[GroupElement]:
    """Generators ``g`` with ``gamma(g) != 0`` but ``g + alpha`` outside ``S``."""
    return [
        g for g in S.generators if pairing(gamma, g) != 0 and not S.contains(g + alpha)
    ]


class Derivation:
    """A finite sum of homogeneous derivations over one carrier.

    Pieces of equal degree are merged (their characters add); pieces that
    act as zero are dropped, so the stored degrees are pairwise distinct.
    """

    def __init__(self, pieces: Iterable[HomogeneousDerivation], carrier: Optional[AffineMonoid] = None):
        pieces = list(pieces)
        if carrier is None:
            if not pieces:
                raise DomainError("an empty derivation needs an explicit carrier")
            carrier = pieces[0].carrier
        merged: Dict[GroupElement, DualVector] = {}
        for p in pieces:
            if p.carrier is not carrier:
                raise DomainError("all pieces must share one carrier monoid")
            if p.degree in merged:
                old = merged[p.degree].coords
                merged[p.degree] = DualVector(tuple(a + b for a, b in zip(old, p.character.coords)))
            else:
                merged[p.degree] = p.character
        self.carrier = carrier
        built = [HomogeneousDerivation(a, g, carrier) for a, g in merged.items()]
        self.pieces: Tuple[HomogeneousDerivation, ...] = tuple(
            sorted((p for p in built if not p.is_zero), key=lambda p: p.degree.key)
        )

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        return apply(self, f)

    def images(self) -> Dict[GroupElement, AlgebraElement]:
        """The image of every generator."""
        return {g: apply(self, _mono(self.carrier, g)) for g in self.carrier.generators}

    def __repr__(self):
        return f"Derivation({list(self.pieces)})"


def _mono(S: AffineMonoid, m, coeff=1) -> AlgebraElement:
    return AlgebraElement(S.group, {parse_element(S.group, m): coeff})


def root_derivation(root: DemazureRoot, S: AffineMonoid) -> HomogeneousDerivation:
    """``d_alpha: chi^m -> rho(m) chi^(m+alpha)`` for a root of ``S``.

    Raises:
      NotARootError: if ``alpha`` fails the root condition for its ray.
    """
    alpha = parse_element(S.group, root.alpha)
    rho = root.distinguished_ray
    if not monoid_root_condition(S, alpha, rho.coords):
        raise NotARootError(f"{alpha} is not a root of the monoid for the ray {list(rho.coords)}")
    return HomogeneousDerivation(alpha, rho, S)


def apply(D: Union[HomogeneousDerivation, Derivation], f: AlgebraElement) -> AlgebraElement:
    """Linear extension of the monomial rule.

    Raises:
      ExponentOutsideCarrierError: if an exponent of ``f`` is not in ``S``.
    """
    S = D.carrier
    for m in f.terms:
        if not S.contains(m):
            raise ExponentOutsideCarrierError(f"exponent {m} is not in the carrier monoid")
    pieces = D.pieces if isinstance(D, Derivation) else (D,)
    out: Dict[GroupElement, Fraction] = {}
    for p in pieces:
        for m, c in f.terms.items():
            v = p.gamma(m)
            if v:
                k = m + p.degree
                out[k] = out.get(k, Fraction(0)) + v * c
    return AlgebraElement(S.group, {k: c for k, c in out.items() if c})


def _predicted_index(D: HomogeneousDerivation, m: GroupElement) -> Optional[int]:
    """Least ``n >= 0`` with ``gamma(m + n alpha) = 0``, if one exists."""
    a = D.gamma(D.degree)
    b = D.gamma(m)
    if b == 0:
        return 0
    if a == 0:
        return None
    n = -b / a
    return int(n) if n.denominator == 1 and n > 0 else None


def nilpotency_data(D: HomogeneousDerivation, m, margin: int = SAFETY_MARGIN) -> Tuple[int, AlgebraElement]:
    """Least ``n`` with ``D^(n+1)(chi^m) = 0`` together with ``D^n(chi^m)``.

    Computed by plain iteration.  The budget is the linear bound on the
    index (``ceil(gamma(m) / -gamma(alpha))`` when that is positive) plus
    ``margin``.

    Raises:
      IterationBudgetExceeded: the iteration did not terminate in budget.
    """
    S = D.carrier
    m = parse_element(S.group, m)
    if not S.contains(m):
        raise ExponentOutsideCarrierError(f"exponent {m} is not in the carrier monoid")
    a, b = D.gamma(D.degree), D.gamma(m)
    bound = 0
    if a < 0 < b or b < 0 < a:
        q = -b / a
        bound = -((-q.numerator) // q.denominator)
    budget = bound + margin
    current = _mono(S, m)
    for n in range(budget + 1):
        nxt = apply(D, current)
        if nxt.is_zero():
            return n, current
        current = nxt
    raise IterationBudgetExceeded(
        f"D^k(x^{m}) is still non-zero after {budget} steps; D is not nilpotent on it"
    )


def falling_factorial_top(D: HomogeneousDerivation, m) -> Tuple[int, AlgebraElement]:
    """Closed form of :func:`nilpotency_data` for a root derivation (``gamma = rho``)."""
    m = parse_element(D.carrier.group, m)
    k = max(int(D.gamma(m)), 0)
    return k, _mono(D.carrier, m + k * D.degree, factorial(k))


# -- local nilpotency -------------------------------------------------------


@dataclass(frozen=True)
class LNDVerdict:
    """Outcome of the local-nilpotency test.

    ``scale`` and ``root`` certify a positive answer (``D = scale * d_root``);
    ``reason`` names the failed clause of a negative one.
    """

    locally_nilpotent: bool
    scale: Optional[Fraction] = None
    root: Optional[DemazureRoot] = None
    reason: str = ""

    def __bool__(self):
        return self.locally_nilpotent


def _proportional_ray(S: AffineMonoid, gamma: DualVector):
    for rho in S.sigma.rays:
        i = next(j for j, x in enumerate(rho) if x)
        lam = Fraction(gamma.coords[i]) / rho[i]
        if lam and all(Fraction(g) == lam * r for g, r in zip(gamma.coords, rho)):
            return rho, lam
    return None, None


def lnd_verdict(S: AffineMonoid, alpha, gamma) -> LNDVerdict:
    """Local-nilpotency decision for raw data ``(alpha, gamma)`` on ``S``.

    Unlike :func:`is_locally_nilpotent` this accepts pairs that are not
    well defined on ``k[S]`` and reports the first failing clause.
    """
    S.require_pointed_dual()
    alpha = parse_element(S.group, alpha)
    gamma = _as_dual(gamma, S.group.rank)
    if all(pairing(gamma, g) == 0 for g in S.generators):
        raise ZeroDerivationError("the derivation is zero")
    rho, lam = _proportional_ray(S, gamma)
    if rho is None:
        return LNDVerdict(False, reason="character is not proportional to a ray of the dual monoid")
    value = _linalg.dot(rho, alpha.free)
    if value != -1:
        return LNDVerdict(False, reason=f"ray {list(rho)} pairs to {value} with the degree, not -1")
    if not monoid_root_condition(S, alpha, rho):
        return LNDVerdict(False, reason="degree fails the root condition for the ray")
    root = DemazureRoot(alpha, DualVector(rho), (DualVector(rho),))
    return LNDVerdict(True, lam, root)


def is_locally_nilpotent(D: HomogeneousDerivation) -> LNDVerdict:
    """Decide local nilpotency of a homogeneous derivation, with certificate.

    Raises:
      ZeroDerivationError: if ``D`` acts as zero.
    """
    return lnd_verdict(D.carrier, D.degree, D.character)


def nilpotent_on_generators(D: HomogeneousDerivation) -> bool:
    """Independent check: ``D`` is nilpotent on ``chi^g`` for every generator.

    On a monomial, ``D^n(chi^m)`` has coefficient ``prod gamma(m + i alpha)``,
    which vanishes for some ``n`` iff ``gamma(m) = 0`` or ``-gamma(m)/gamma(alpha)``
    is a positive integer.  Nilpotency on generators implies local nilpotency.
    """
    return all(_predicted_index(D, g) is not None for g in D.carrier.generators)


# -- exp(tD) ----------------------------------------------------------------


class TPolynomial:
    """A polynomial in a formal parameter ``t`` with algebra-element coefficients."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: AbelianGroup, coeffs: Mapping[int, AlgebraElement]):
        self.group = group
        self.coeffs = {i: c for i, c in coeffs.items() if not c.is_zero()}

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def coefficient(self, i: int) -> AlgebraElement:
        return self.coeffs.get(i, AlgebraElement.zero(self.group))

    def at(self, t) -> AlgebraElement:
        """Substitute a rational value for ``t``."""
        t = Fraction(t)
        out = AlgebraElement.zero(self.group)
        for i, c in self.coeffs.items():
            out = out + c * (t ** i)
        return out

    def __add__(self, other: "TPolynomial") -> "TPolynomial":
        keys = set(self.coeffs) | set(other.coeffs)
        return TPolynomial(self.group, {i: self.coefficient(i) + other.coefficient(i) for i in keys})

    def __mul__(self, other: "TPolynomial") -> "TPolynomial":
        out: Dict[int, AlgebraElement] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, AlgebraElement.zero(self.group)) + a * b
        return TPolynomial(self.group, out)

    def __eq__(self, other):
        return isinstance(other, TPolynomial) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"t^{i}*({self.coeffs[i]})" for i in sorted(self.coeffs))


def _iterates(D: HomogeneousDerivation, f: AlgebraElement) -> List[AlgebraElement]:
    """``[f, D f, D^2 f, ...]`` up to the last non-zero term."""
    out = []
    current = f
    while not current.is_zero():
        out.append(current)
        current = apply(D, current)
    return out


def exp_action(D: HomogeneousDerivation, f: AlgebraElement) -> TPolynomial:
    """``exp(tD)(f) = sum_i t^i D^i(f) / i!`` as an exact polynomial in ``t``.

    Raises:
      NotLocallyNilpotentError: if ``D`` is not locally nilpotent.
    """
    if not is_locally_nilpotent(D):
        raise NotLocallyNilpotentError("exp(tD) needs a locally nilpotent D")
    return TPolynomial(
        D.carrier.group,
        {i: term * Fraction(1, factorial(i)) for i, term in enumerate(_iterates(D, f))},
    )


def exp_two_parameter(D: HomogeneousDerivation, f: AlgebraElement) -> Dict[Tuple[int, int], AlgebraElement]:
    """Coefficients of ``s^i t^j`` in ``exp(sD)(exp(tD)(f))``."""
    out: Dict[Tuple[int, int], AlgebraElement] = {}
    for j, cj in exp_action(D, f).coeffs.items():
        for i, cij in exp_action(D, cj).coeffs.items():
            out[(i, j)] = cij
    return out


def exp_sum_parameter(D: HomogeneousDerivation, f: AlgebraElement) -> Dict[Tuple[int, int], AlgebraElement]:
    """Coefficients of ``s^i t^j`` in ``exp((s+t)D)(f)`` (binomial expansion)."""
    out: Dict[Tuple[int, int], AlgebraElement] = {}
    for n, cn in exp_action(D, f).coeffs.items():
        for i in range(n + 1):
            c = cn * Fraction(factorial(n), factorial(i) * factorial(n - i))
            if not c.is_zero():
                out[(i, n - i)] = c
    return out


# -- kernels and decompositions --------------------------------------------


def kernel_face(D: HomogeneousDerivation) -> Face:
    """The face ``{m in S : gamma(m) = 0}`` that carries the monomial kernel.

    The defining functional is ``gamma`` made primitive and integral, with
    its sign chosen non-negative on ``S`` when that is possible.

    Raises:
      ZeroDerivationError: if ``D`` acts as zero.
    """
    if D.is_zero:
        raise ZeroDerivationError("the derivation is zero")
    w = _linalg.clear_denominators(D.character.coords)
    if any(_linalg.dot(w, g.free) < 0 for g in D.carrier.generators):
        w = tuple(-x for x in w)
    return Face(D.carrier, DualVector(w))


def decompose(S: AffineMonoid, images: Mapping) -> Derivation:
    """Split a derivation given by generator images into homogeneous pieces.

    Each term ``c chi^m`` in the image of generator ``g`` has offset
    ``m - g``.  For each offset the character is the rational solution of
    ``gamma(g_i) = coefficient of chi^(g_i + offset) in the image of g_i``.

    Raises:
      ExponentOutsideCarrierError: an image exponent is not in ``S``.
      InconsistentImagesError: some offset admits no character.
    """
    gens = list(S.generators)
    table: Dict[GroupElement, AlgebraElement] = {}
    for g, img in images.items():
        g = parse_element(S.group, g)
        if g not in gens:
            raise DomainError(f"{g} is not a generator of the monoid")
        for m in img.terms:
            if not S.contains(m):
                raise ExponentOutsideCarrierError(f"image exponent {m} is not in the monoid")
        table[g] = img
    offsets = sorted({m - g for g, img in table.items() for m in img.terms}, key=lambda a: a.key)
    pieces = []
    for alpha in offsets:
        rows = [list(g.free) for g in gens]
        rhs = [table[g].coefficient(g + alpha) if g in table else Fraction(0) for g in gens]
        sol = _linalg.solve_rational(rows, rhs) if S.group.rank else ([] if not any(rhs) else None)
        if sol is None:
            raise InconsistentImagesError(f"no character reproduces the images at offset {alpha}")
        pieces.append(HomogeneousDerivation(alpha, DualVector(tuple(sol)), S))
    return Derivation(pieces, carrier=S)


def _hull_vertices(points: Sequence[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Vertices of the convex hull of distinct integer points.

    ``p`` is a vertex iff ``(p, 1)`` is outside the cone over ``(q, 1)`` for
    the remaining points ``q``.
    """
    pts = sorted(set(points))
    if len(pts) == 1:
        return pts
    out = []
    for p in pts:
        others = [q + (1,) for q in pts if q != p]
        if not Cone.generated_by(others, len(p) + 1).contains(p + (1,)):
            out.append(p)
    return out


def total_nilpotent_on_generators(D: Derivation, budget: int) -> bool:
    """Bounded check that ``D^n(chi^g) = 0`` for every generator ``g``."""
    for g in D.carrier.generators:
        current = _mono(D.carrier, g)
        for _ in range(budget + 1):
            if current.is_zero():
                break
            current = apply(D, current)
        if not current.is_zero():
            return False
    return True


def extract_lnd_pieces(D: Derivation, budget: int = 64) -> List[HomogeneousDerivation]:
    """Pieces of a locally nilpotent ``D`` whose free degree is a hull vertex.

    Raises:
      TotalNotNilpotentError: ``D`` is not nilpotent on the generators within
        ``budget`` iterations.
      ValidationFailedError: a vertex piece is not locally nilpotent.
    """
    if not D.pieces:
        raise ZeroDerivationError("the derivation is zero")
    if not total_nilpotent_on_generators(D, budget):
        raise TotalNotNilpotentError(f"D is not nilpotent on the generators within {budget} steps")
    vertices = set(_hull_vertices([p.degree.free for p in D.pieces]))
    chosen = [p for p in D.pieces if p.degree.free in vertices]
    for p in chosen:
        if not is_locally_nilpotent(p):
            raise ValidationFailedError(f"vertex piece {p} is not locally nilpotent")
    return chosen
