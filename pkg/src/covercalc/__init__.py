"""Calculus of covers of finite groups.

Multiplication-table groups with subgroup/quotient machinery, commutative
square diagnostics, fiber products and their kernel decompositions, simple
modules over endomorphism fields, degree-2 cohomology with the extension
dictionary, and fundament kernels/series with their complete invariants.
"""

from __future__ import annotations

from .cohomology import (
    CohomClass,
    CohomSpace,
    DualPairS,
    ExtensionRealization,
    TwoCochain,
    are_congruent,
    are_isomorphic_extensions,
    cocycle_from_extension,
    cohom_space,
    cover_cochain,
    extension_from_cocycle,
    fiber_cocycle,
    inflate,
    inflate_module,
    push_cochain,
    x2,
    y2,
)
from .errors import CovercalcError
from .fiber import (
    FiberProduct,
    KernelDecomposition,
    align_normal_to_axes,
    fiber_product,
    is_compact_fiber_product,
    is_fiber_presentation,
    kernel_normal_decomposition,
    restrict,
)
from .fundament import (
    AbClassInvariant,
    CoverInvariants,
    FundamentSeries,
    NaClassInvariant,
    decompose_fundamental,
    dominates,
    exists_semicartesian_lift,
    fundament,
    fundament_kernel,
    fundament_series,
    invariants,
    is_fundament_of,
    is_fundament_series,
    is_fundamental,
    isomorphic_fundamental,
)
from .gmodules import (
    DualSpace,
    EndoField,
    GModule,
    ModuleHom,
    complement,
    decompose_isotypic,
    direct_sum_module,
    endo_field,
    first_module_iso,
    hom_space,
    is_A_generated,
    is_simple_module,
    module_from_cover,
    modules_isomorphic,
    trivial_module,
)
from .groups import (
    BuildLimits,
    Cover,
    DEFAULT_LIMITS,
    FiniteGroup,
    GroupHom,
    Subgroup,
    all_subgroups,
    build_group,
    compose,
    cyclic_group,
    find_epimorphism_over,
    find_isomorphism_over,
    identity_cover,
    is_indecomposable,
    maximal_normal_in,
    quotient,
    same_group,
    terminal_cover,
    trivial_group,
)
from .squares import (
    CommSquare,
    compose_horizontal,
    is_cartesian,
    is_compact_cartesian,
    is_semi_cartesian,
    make_square,
)
from .textio import parse_source, realize_declarations

__version__ = "0.1.0"

__all__ = [
    "AbClassInvariant",
    "BuildLimits",
    "CohomClass",
    "CohomSpace",
    "CommSquare",
    "Cover",
    "CoverInvariants",
    "CovercalcError",
    "DEFAULT_LIMITS",
    "DualPairS",
    "DualSpace",
    "EndoField",
    "ExtensionRealization",
    "FiberProduct",
    "FiniteGroup",
    "FundamentSeries",
    "GModule",
    "GroupHom",
    "KernelDecomposition",
    "ModuleHom",
    "NaClassInvariant",
    "Subgroup",
    "TwoCochain",
    "align_normal_to_axes",
    "all_subgroups",
    "are_congruent",
    "are_isomorphic_extensions",
    "build_group",
    "cocycle_from_extension",
    "cohom_space",
    "complement",
    "compose",
    "compose_horizontal",
    "cover_cochain",
    "cyclic_group",
    "decompose_fundamental",
    "decompose_isotypic",
    "direct_sum_module",
    "dominates",
    "endo_field",
    "exists_semicartesian_lift",
    "extension_from_cocycle",
    "fiber_cocycle",
    "fiber_product",
    "find_epimorphism_over",
    "find_isomorphism_over",
    "first_module_iso",
    "fundament",
    "fundament_kernel",
    "fundament_series",
    "hom_space",
    "identity_cover",
    "inflate",
    "inflate_module",
    "invariants",
    "is_A_generated",
    "is_cartesian",
    "is_compact_cartesian",
    "is_compact_fiber_product",
    "is_fiber_presentation",
    "is_fundament_of",
    "is_fundament_series",
    "is_fundamental",
    "is_indecomposable",
    "is_semi_cartesian",
    "is_simple_module",
    "isomorphic_fundamental",
    "kernel_normal_decomposition",
    "make_square",
    "maximal_normal_in",
    "module_from_cover",
    "modules_isomorphic",
    "parse_source",
    "push_cochain",
    "quotient",
    "realize_declarations",
    "restrict",
    "same_group",
    "terminal_cover",
    "trivial_group",
    "trivial_module",
    "x2",
    "y2",
]
