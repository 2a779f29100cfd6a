"""Fiber products of finitely many covers over a common base.

The carrier is the subgroup of the direct product of the factor sources
consisting of tuples whose factor images agree in the base. Carrier
elements are enumerated lexicographically over factor coordinates, so
all downstream searches are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .errors import (
    BadIndex,
    EmptyFactorList,
    Incompatible,
    NotInsideKernel,
    NotNormal,
    OrderCapExceeded,
    TargetMismatch,
)
from .groups import (
    BuildLimits,
    Cover,
    DEFAULT_LIMITS,
    FiniteGroup,
    GroupHom,
    Subgroup,
    all_subgroups,
    identity_cover,
    is_indecomposable,
    same_group,
)

__all__ = [
    "FiberProduct",
    "KernelDecomposition",
    "AbelianBlock",
    "fiber_product",
    "restrict",
    "is_fiber_presentation",
    "is_compact_fiber_product",
    "kernel_normal_decomposition",
    "align_normal_to_axes",
]

COMPACTNESS_EXHAUSTIVE_CAP = 2000


@dataclass(frozen=True)
class FiberProduct:
    """A fiber product presentation over a common base."""

    base: FiniteGroup
    factors: tuple[Cover, ...]
    carrier: FiniteGroup
    projections: tuple[Cover, ...]
    structure_map: Cover
    axis_kernels: tuple[Subgroup, ...]
    tuples: tuple[tuple[int, ...], ...] | None

    @property
    def arity(self) -> int:
        return len(self.factors)


def fiber_product(
    base: FiniteGroup,
    factors,
    limits: BuildLimits = DEFAULT_LIMITS,
) -> FiberProduct:
    """Build the explicit fiber product of ``factors`` over ``base``.

    Raises TargetMismatch if some factor does not map onto ``base`` and
    OrderCapExceeded when the carrier would outgrow the cap. An empty
    factor list yields the base itself with its identity map.
    """
    factors = tuple(factors)
    for cov in factors:
        if not same_group(cov.target, base):
            raise TargetMismatch("factor does not target the common base")
    if not factors:
        return FiberProduct(
            base=base,
            factors=(),
            carrier=base,
            projections=(),
            structure_map=identity_cover(base),
            axis_kernels=(),
            tuples=None,
        )
    sizes = [c.source.order for c in factors]
    expected = 1
    for s in sizes:
        expected *= s
    for _ in range(len(factors) - 1):
        expected //= base.order
    if expected > limits.order_cap:
        raise OrderCapExceeded(
            f"carrier order {expected} exceeds cap {limits.order_cap}"
        )

    # group elements of every factor by their base image, preserving order
    fibers: list[list[list[int]]] = []
    for cov in factors:
        by_base: list[list[int]] = [[] for _ in range(base.order)]
        for h, g in enumerate(cov.image):
            by_base[int(g)].append(h)
        fibers.append(by_base)

    first = factors[0]
    tuples: list[tuple[int, ...]] = []
    for h0 in range(first.source.order):
        g = int(first.image[h0])
        rest = [fibers[i][g] for i in range(1, len(factors))]
        for tail in iter_product(*rest):
            tuples.append((h0, *tail))
    index = {t: i for i, t in enumerate(tuples)}
    n = len(tuples)
    assert n == expected

    full_space = 1
    for s in sizes:
        full_space *= s
    if n > 256 and full_space <= 5_000_000:
        # componentwise products, resolved through a linear key over the
        # full product space (blockwise, to bound transient memory)
        tup_arr = np.asarray(tuples, dtype=np.int64)
        strides = np.empty(len(sizes), dtype=np.int64)
        acc = 1
        for k in range(len(sizes) - 1, -1, -1):
            strides[k] = acc
            acc *= sizes[k]
        lookup = np.full(full_space, -1, dtype=np.int64)
        lookup[tup_arr @ strides] = np.arange(n, dtype=np.int64)
        factor_mul = [c.source.mul for c in factors]
        mul = np.empty((n, n), dtype=np.int32)
        for start in range(0, n, 1024):
            stop = min(start + 1024, n)
            keys = np.zeros((stop - start, n), dtype=np.int64)
            for k, fm in enumerate(factor_mul):
                keys += fm[np.ix_(tup_arr[start:stop, k], tup_arr[:, k])] * strides[k]
            mul[start:stop] = lookup[keys]
    else:
        factor_rows = [c.source.mul_rows for c in factors]
        mul = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(tuples):
            for j, b in enumerate(tuples):
                mul[i, j] = index[tuple(fr[x][y] for fr, x, y in zip(factor_rows, a, b))]
    name = "fprod(" + ",".join(c.source.name for c in factors) + ")"
    carrier = FiniteGroup(mul, name=name)

    projections = tuple(
        Cover(
            carrier,
            cov.source,
            np.fromiter((t[i] for t in tuples), dtype=np.int32, count=n),
            check=False,
        )
        for i, cov in enumerate(factors)
    )
    structure = Cover(
        carrier,
        base,
        np.fromiter((int(factors[0].image[t[0]]) for t in tuples), dtype=np.int32, count=n),
        check=False,
    )
    # elements trivial in every coordinate but j and lying over the base
    # identity; for two or more factors the second condition is implied
    axis_kernels = tuple(
        Subgroup(
            carrier,
            tuple(
                index[t]
                for t in tuples
                if all(x == 0 for k, x in enumerate(t) if k != j)
                and int(factors[0].image[t[0]]) == 0
            ),
        )
        for j in range(len(factors))
    )
    return FiberProduct(
        base=base,
        factors=factors,
        carrier=carrier,
        projections=projections,
        structure_map=structure,
        axis_kernels=axis_kernels,
        tuples=tuple(tuples),
    )


def _check_subset(fp: FiberProduct, subset) -> tuple[int, ...]:
    idx = tuple(int(i) for i in subset)
    if len(set(idx)) != len(idx):
        raise BadIndex("repeated factor index")
    for i in idx:
        if not 0 <= i < fp.arity:
            raise BadIndex(f"factor index {i} out of range")
    return tuple(sorted(idx))


def restrict(fp: FiberProduct, subset) -> tuple[FiberProduct, Cover]:
    """Project onto a subset of coordinates.

    Returns the sub-fiber-product together with the coordinate projection
    from the original carrier. The empty subset yields the base with the
    structure map.
    """
    idx = _check_subset(fp, subset)
    sub = fiber_product(fp.base, [fp.factors[i] for i in idx])
    if not idx:
        return sub, fp.structure_map
    if fp.tuples is None:  # pragma: no cover - arity 0 handled above
        raise BadIndex("no coordinates to restrict")
    sub_index = {t: i for i, t in enumerate(sub.tuples)}
    image = np.fromiter(
        (sub_index[tuple(t[i] for i in idx)] for t in fp.tuples),
        dtype=np.int32,
        count=fp.carrier.order,
    )
    proj = Cover(fp.carrier, sub.carrier, image, check=False)
    return sub, proj


def _product_of_subsets(group: FiniteGroup, parts: list[tuple[int, ...]]) -> set[int]:
    rows = group.mul_rows
    cur = {0}
    for part in parts:
        cur = {rows[a][b] for a in cur for b in part}
    return cur


def is_fiber_presentation(p_list, pi: Cover) -> bool:
    """Decide whether covers ``p_list`` present their common source as the
    fiber product of the induced factor covers over ``pi.target``.

    ``pi`` is the common composite onto the base; every ``p`` must satisfy
    Ker p <= Ker pi (so that pi factors through it), otherwise the family
    is rejected as Incompatible. The decision uses the kernel-product
    criterion: with L = Ker pi and L_j the intersection of the kernels of
    all other maps, the family presents a fiber product iff L is the
    internal direct product of the L_j.
    """
    p_list = tuple(p_list)
    if len(p_list) < 2:
        raise Incompatible("need at least two covers")
    src = pi.source
    for p in p_list:
        if not same_group(p.source, src):
            raise Incompatible("covers do not share a source")
        ker_pi = pi.kernel()
        if any(not ker_pi.contains(x) for x in p.kernel().elements):
            raise Incompatible("cover kernel not inside the base kernel")
    l_full = set(pi.kernel().elements)
    parts: list[tuple[int, ...]] = []
    for j in range(len(p_list)):
        cur = set(range(src.order))
        for i, p in enumerate(p_list):
            if i != j:
                cur &= set(p.kernel().elements)
        parts.append(tuple(sorted(cur)))
    size = 1
    for part in parts:
        size *= len(part)
    if size != len(l_full):
        return False
    return _product_of_subsets(src, parts) == l_full


def is_compact_fiber_product(fp: FiberProduct) -> bool:
    """True iff no proper subgroup of the carrier surjects onto every factor.

    Exhaustive subgroup search below the order cap; above it, falls back to
    the independence criterion for indecomposable factors (pairwise
    non-isomorphic over the base, with the classes of the non-split
    abelian-kernel factors linearly independent over the endomorphism
    field), which is cross-checked against the exhaustive route in tests.
    """
    if fp.arity == 0:
        raise EmptyFactorList("compactness needs at least one factor")
    if fp.carrier.order <= COMPACTNESS_EXHAUSTIVE_CAP:
        orders = [c.source.order for c in fp.factors]
        for sub in all_subgroups(fp.carrier):
            if sub.order == fp.carrier.order:
                continue
            if all(
                len({t[i] for t in (fp.tuples[x] for x in sub.elements)}) == orders[i]
                for i in range(fp.arity)
            ):
                return False
        return True
    if all(is_indecomposable(c) for c in fp.factors):
        return _compact_by_independence(fp)
    raise OrderCapExceeded(
        "carrier too large for exhaustive compactness and factors are not "
        "all indecomposable"
    )


def _compact_by_independence(fp: FiberProduct) -> bool:
    """Independence criterion for indecomposable factors (fast path)."""
    from . import cohomology as ch
    from . import gmodules as gm
    from .groups import find_isomorphism_over

    idx = list(range(fp.arity))
    abelian = [i for i in idx if _kernel_is_abelian(fp.factors[i])]
    nonabelian = [i for i in idx if i not in set(abelian)]
    for a in range(len(nonabelian)):
        for b in range(a + 1, len(nonabelian)):
            i, j = nonabelian[a], nonabelian[b]
            if find_isomorphism_over(fp.factors[i], fp.factors[j]) is not None:
                return False
    blocks = _group_by_module_class(fp, abelian)
    for indices, module in blocks:
        space = ch.cohom_space(fp.base, module)
        classes = []
        for i in indices:
            cov = fp.factors[i]
            ident = gm.first_module_iso(
                gm.module_from_cover(cov, cov.kernel()), module
            )
            classes.append(ch.cocycle_from_extension(cov, ident).coords)
        # split factors have the zero class; two of them would be
        # isomorphic over the base, so at most one may appear
        nonzero = [c for c in classes if c.any()]
        if len(classes) - len(nonzero) > 1:
            return False
        if nonzero:
            mat = np.array(nonzero, dtype=np.int64)
            if space.f_rank(mat) != len(nonzero):
                return False
    return True


def _kernel_is_abelian(cov: Cover) -> bool:
    ker = cov.kernel().elements
    rows = cov.source.mul_rows
    return all(rows[a][b] == rows[b][a] for a in ker for b in ker)


def _group_by_module_class(fp: FiberProduct, abelian_indices):
    """Group abelian-kernel factor indices by iso class of kernel module."""
    from . import gmodules as gm

    blocks: list[tuple[list[int], object]] = []
    for i in abelian_indices:
        cov = fp.factors[i]
        module = gm.module_from_cover(cov, cov.kernel())
        for indices, rep in blocks:
            if gm.modules_isomorphic(rep, module):
                indices.append(i)
                break
        else:
            blocks.append(([i], module))
    return [(tuple(indices), rep) for indices, rep in blocks]


@dataclass(frozen=True)
class AbelianBlock:
    """All factor positions whose kernels realize one simple module class."""

    indices: tuple[int, ...]
    module: object  # GModule of the representative kernel
    component: Subgroup  # L ∩ (product of this block's axis kernels)


@dataclass(frozen=True)
class KernelDecomposition:
    """How a normal subgroup inside the kernel splits along the axes."""

    nonabelian_indices: tuple[int, ...]
    abelian_blocks: tuple[AbelianBlock, ...]
    swallowed_nonabelian: tuple[int, ...]  # axes with K_i <= L


def _require_normal_inside_kernel(fp: FiberProduct, sub: Subgroup) -> None:
    if not same_group(sub.parent, fp.carrier):
        raise Incompatible("subgroup does not live in the carrier")
    if not sub.is_normal():
        raise NotNormal("subgroup is not normal in the carrier")
    ker = fp.structure_map.kernel()
    if sub.mask & ~ker.mask:
        raise NotInsideKernel("subgroup is not inside the structure kernel")


def kernel_normal_decomposition(fp: FiberProduct, sub: Subgroup) -> KernelDecomposition:
    """Split a normal subgroup of the carrier inside Ker(structure_map)
    along the fiber-product axes.

    Requires all factors indecomposable. Returns the axis partition into
    non-abelian positions and abelian blocks (grouped by kernel module
    class), the non-abelian axes entirely inside ``sub``, and per-block
    components; verifies that ``sub`` is the internal direct product of
    the recovered pieces.
    """
    if not all(is_indecomposable(c) for c in fp.factors):
        raise Incompatible("all factors must be indecomposable")
    _require_normal_inside_kernel(fp, sub)
    idx = list(range(fp.arity))
    abelian = [i for i in idx if _kernel_is_abelian(fp.factors[i])]
    nonabelian = tuple(i for i in idx if i not in set(abelian))
    swallowed = tuple(
        i for i in nonabelian if fp.axis_kernels[i].mask & ~sub.mask == 0
    )
    blocks = []
    rows = fp.carrier.mul_rows
    for indices, module in _group_by_module_class(fp, abelian):
        block_elems = _product_of_subsets(
            fp.carrier, [fp.axis_kernels[i].elements for i in indices]
        )
        component = Subgroup(
            fp.carrier, tuple(sorted(set(sub.elements) & block_elems))
        )
        blocks.append(AbelianBlock(indices=indices, module=module, component=component))

    pieces = [fp.axis_kernels[i].elements for i in swallowed]
    pieces += [b.component.elements for b in blocks]
    size = 1
    for piece in pieces:
        size *= len(piece)
    rebuilt = _product_of_subsets(fp.carrier, pieces)
    if size != sub.order or rebuilt != set(sub.elements):
        raise Incompatible(
            "normal subgroup does not decompose along the axes; "
            "is some factor decomposable?"
        )
    return KernelDecomposition(
        nonabelian_indices=nonabelian,
        abelian_blocks=tuple(blocks),
        swallowed_nonabelian=swallowed,
    )


def align_normal_to_axes(
    fp: FiberProduct, sub: Subgroup
) -> tuple[FiberProduct, GroupHom, tuple[int, ...]]:
    """Re-present the fiber product so that ``sub`` becomes a product of
    axis kernels.

    Returns ``(new_fp, omega, axes)`` with ``omega`` an isomorphism of
    carriers satisfying ``new_fp.structure_map o omega = fp.structure_map``
    and ``omega(sub)`` equal to the product of the new axis kernels at
    positions ``axes``. Factors at non-abelian positions are untouched;
    abelian blocks are re-coordinatized by a dual-basis change adapted to
    ``sub`` (new factors are pushout extensions along the new dual basis).
    """
    from . import cohomology as ch
    from . import gmodules as gm

    decomp = kernel_normal_decomposition(fp, sub)
    new_factors: list[Cover] = list(fp.factors)
    # per-coordinate maps: position -> (callable carrier-elt-tuple -> index)
    axes: list[int] = list(decomp.swallowed_nonabelian)
    # mapping data for abelian blocks that need re-coordinatization
    block_maps: dict[int, np.ndarray] = {}  # position -> image array over carrier

    for block in decomp.abelian_blocks:
        indices = block.indices
        aligned = _try_aligned_axes(fp, block)
        if aligned is not None:
            axes.extend(aligned)
            continue
        sub_fp, proj = restrict(fp, indices)
        ext = sub_fp.structure_map  # cover with elementary abelian kernel
        module = gm.module_from_cover(ext, ext.kernel())
        coords = gm.kernel_coordinates(ext.kernel())
        hom_all = gm.hom_space(module, block.module)
        comp_elems = [int(proj.image[x]) for x in block.component.elements]
        l_vectors = np.array(
            [coords.to_vector[e] for e in comp_elems], dtype=np.int64
        )
        vanish_on_l = gm.homs_vanishing_on(hom_all, l_vectors)
        m_basis = gm.complement_in(module, block.module, l_vectors)
        vanish_on_m = gm.homs_vanishing_on(hom_all, m_basis)
        endo = gm.endo_field(block.module)
        scalar = lambda m: endo.generator_matrix @ m % module.p
        l_part, _ = gm.f_independent_subset(vanish_on_m, scalar, module.p, endo.k)
        m_part, _ = gm.f_independent_subset(vanish_on_l, scalar, module.p, endo.k)
        assert len(l_part) + len(m_part) == len(indices)
        psis = list(l_part) + list(m_part)
        axes.extend(indices[: len(l_part)])

        f_big = ch.cover_cochain(ext)
        for pos, psi in zip(indices, psis):
            pushed = ch.push_cochain(f_big, psi, block.module)
            new_cov = ch.extension_from_cocycle(pushed).cover
            new_factors[pos] = new_cov
            block_maps[pos] = _pushout_image(
                fp, proj, ext, coords, psi, block.module
            )

    new_fp = fiber_product(fp.base, new_factors)
    if not block_maps:
        omega = GroupHom(
            fp.carrier, new_fp.carrier, np.arange(fp.carrier.order), check=False
        )
        return new_fp, omega, tuple(sorted(axes))

    new_index = {t: i for i, t in enumerate(new_fp.tuples)}
    image = np.empty(fp.carrier.order, dtype=np.int32)
    for x, t in enumerate(fp.tuples):
        coords_new = list(t)
        for pos, arr in block_maps.items():
            coords_new[pos] = int(arr[x])
        image[x] = new_index[tuple(coords_new)]
    omega = GroupHom(fp.carrier, new_fp.carrier, image, check=True)
    return new_fp, omega, tuple(sorted(axes))


def _try_aligned_axes(fp: FiberProduct, block: AbelianBlock):
    """If the block component already is a product of axis kernels, return
    those positions; else None."""
    inside = [
        i
        for i in block.indices
        if fp.axis_kernels[i].mask & ~block.component.mask == 0
    ]
    prod = _product_of_subsets(
        fp.carrier, [fp.axis_kernels[i].elements for i in inside]
    )
    if prod == set(block.component.elements):
        return tuple(inside)
    return None


def _pushout_image(fp, proj, ext, coords, psi, module_a) -> np.ndarray:
    """Image array of carrier -> pushout extension source: push the block
    coordinate along the dual vector ``psi``."""
    base = fp.base
    out = np.empty(fp.carrier.order, dtype=np.int32)
    # least-index section of ext, matching the cocycle convention
    section = np.full(base.order, -1, dtype=np.int64)
    for h in range(ext.source.order):
        g = int(ext.image[h])
        if section[g] < 0:
            section[g] = h
    inv_arr = ext.source.inv
    rows = ext.source.mul_rows
    for x in range(fp.carrier.order):
        h = int(proj.image[x])
        g = int(ext.image[h])
        k = rows[h][int(inv_arr[int(section[g])])]
        vec = coords.to_vector[k]
        img = psi @ np.asarray(vec, dtype=np.int64) % module_a.p
        a_idx = module_a.vector_to_index(img)
        out[x] = a_idx * base.order + g
    return out
