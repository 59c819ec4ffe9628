"""Demazure roots and homogeneous locally nilpotent derivations on cancellative monoids.

The package is layered bottom-up:

* :mod:`demazure.abelian` -- finitely generated abelian groups, Smith form;
* :mod:`demazure.cone` -- rational cones, duality, Hilbert bases;
* :mod:`demazure.monoid` -- finitely generated cancellative monoids;
* :mod:`demazure.roots` -- Demazure roots of cones and monoids;
* :mod:`demazure.derivation` -- homogeneous derivations of ``k[S]``;
* :mod:`demazure.surface` -- toric surfaces and deletion monoids;
* :mod:`demazure.cli` -- the ``demazure`` command.
"""

from .abelian import AbelianGroup, DualVector, GroupElement, smith_normal_form
from .cone import Cone, dual_cone, hilbert_basis
from .derivation import (
    AlgebraElement,
    Derivation,
    HomogeneousDerivation,
    apply,
    decompose,
    exp_action,
    extract_lnd_pieces,
    is_locally_nilpotent,
    kernel_face,
    nilpotency_data,
    root_derivation,
)
from .monoid import AffineMonoid, group_completion
from .roots import DemazureRoot, enumerate_roots, is_cone_root, is_monoid_root
from .surface import (
    deletion_monoid,
    has_affine_line_factor,
    surface_normal_form,
    verify_root_equality,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "AffineMonoid",
    "AlgebraElement",
    "Cone",
    "DemazureRoot",
    "Derivation",
    "DualVector",
    "GroupElement",
    "HomogeneousDerivation",
    "apply",
    "decompose",
    "deletion_monoid",
    "dual_cone",
    "enumerate_roots",
    "exp_action",
    "extract_lnd_pieces",
    "group_completion",
    "has_affine_line_factor",
    "hilbert_basis",
    "is_cone_root",
    "is_locally_nilpotent",
    "is_monoid_root",
    "kernel_face",
    "nilpotency_data",
    "root_derivation",
    "smith_normal_form",
    "surface_normal_form",
    "verify_root_equality",
]
