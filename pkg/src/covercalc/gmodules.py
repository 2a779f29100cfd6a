"""Finite group modules over prime fields, and the Hom(-, A) duality.

A module is a matrix action of a finite group on F_p^d, one invertible
matrix per group element. Simple modules carry an endomorphism field
F = End_G(A); Hom-spaces are F-vector spaces presented by F_p bases
together with the scalar action, so a single GF(p) elimination core
serves both F_p and F_q linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CharacteristicMismatch,
    Incompatible,
    NotAGenerated,
    NotCentralInKernel,
    NotElementaryAbelian,
    NotNormal,
    NotSimple,
    NotSubmodule,
)
from .groups import Cover, FiniteGroup, Subgroup, generating_set, same_group
from .linalg import (
    IncrementalRowReduce,
    nullspace_mod_p,
    rank_mod_p,
    row_echelon_mod_p,
    row_space_contains,
)

__all__ = [
    "GModule",
    "ModuleHom",
    "EndoField",
    "DualSpace",
    "KernelCoords",
    "module_from_cover",
    "kernel_coordinates",
    "trivial_module",
    "direct_sum_module",
    "is_simple_module",
    "endo_field",
    "hom_space",
    "homs_vanishing_on",
    "is_A_generated",
    "decompose_isotypic",
    "complement",
    "modules_isomorphic",
    "first_module_iso",
    "f_independent_subset",
]


class GModule:
    """A finite G-module: F_p^d with one action matrix per group element."""

    def __init__(
        self,
        group: FiniteGroup,
        p: int,
        action: tuple[np.ndarray, ...],
        check: bool = True,
    ) -> None:
        self.group = group
        self.p = p
        self.action = tuple(np.asarray(m, dtype=np.int64) % p for m in action)
        self.dim = int(self.action[0].shape[0]) if self.action else 0
        if len(self.action) != group.order:
            raise Incompatible("need one action matrix per group element")
        if check and self.dim:
            ident = np.eye(self.dim, dtype=np.int64)
            if not np.array_equal(self.action[0], ident):
                raise Incompatible("identity must act trivially")
            rows = group.mul_rows
            for g in generating_set(group):
                for h in range(group.order):
                    lhs = self.action[rows[g][h]]
                    rhs = self.action[g] @ self.action[h] % p
                    if not np.array_equal(lhs, rhs):
                        raise Incompatible("action is not a homomorphism")

    def act(self, g: int, vec: np.ndarray) -> np.ndarray:
        return self.action[g] @ np.asarray(vec, dtype=np.int64) % self.p

    @property
    def size(self) -> int:
        return self.p ** self.dim

    def vector_to_index(self, vec) -> int:
        idx = 0
        for j in range(self.dim - 1, -1, -1):
            idx = idx * self.p + int(vec[j]) % self.p
        return idx

    def index_to_vector(self, idx: int) -> np.ndarray:
        out = np.empty(self.dim, dtype=np.int64)
        for j in range(self.dim):
            out[j] = idx % self.p
            idx //= self.p
        return out

    def structural_key(self) -> bytes:
        return (
            self.group.mul.tobytes()
            + bytes([self.p % 251, self.dim % 251])
            + b"".join(m.astype(np.int8).tobytes() for m in self.action)
        )

    def __repr__(self) -> str:
        return f"GModule(F{self.p}^{self.dim} over {self.group.name})"


@dataclass(frozen=True)
class ModuleHom:
    """A G-equivariant linear map, stored as its matrix (target x source)."""

    source: GModule
    target: GModule
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.int64) % self.source.p
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.target.dim, self.source.dim):
            raise Incompatible("hom matrix has wrong shape")

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(vec, dtype=np.int64) % self.source.p

    def is_equivariant(self) -> bool:
        p = self.source.p
        return all(
            np.array_equal(
                self.matrix @ self.source.action[g] % p,
                self.target.action[g] @ self.matrix % p,
            )
            for g in generating_set(self.source.group)
        )

    def is_isomorphism(self) -> bool:
        return (
            self.source.dim == self.target.dim
            and rank_mod_p(self.matrix, self.source.p) == self.source.dim
        )


@dataclass(frozen=True)
class KernelCoords:
    """F_p-coordinates on an elementary abelian subgroup."""

    subgroup: Subgroup
    p: int
    dim: int
    basis_elements: tuple[int, ...]
    to_vector: dict[int, tuple[int, ...]] = field(repr=False)
    from_vector: dict[tuple[int, ...], int] = field(repr=False)


def kernel_coordinates(sub: Subgroup) -> KernelCoords:
    """Deterministic coordinates on an elementary abelian subgroup.

    Basis elements are chosen greedily by ascending element index.
    Raises NotElementaryAbelian if the subgroup is not elementary abelian.
    """
    group = sub.parent
    rows = group.mul_rows
    elems = sub.elements
    if len(elems) == 1:
        return KernelCoords(sub, 2, 0, (), {0: ()}, {(): 0})
    for a in elems:
        for b in elems:
            if rows[a][b] != rows[b][a]:
                raise NotElementaryAbelian("subgroup is not abelian")
    orders = {group.element_order(x) for x in elems if x != 0}
    if len(orders) != 1:
        raise NotElementaryAbelian("mixed element orders")
    p = orders.pop()
    # p prime iff no proper divisor order appears; for elementary abelian
    # groups every non-identity element has order exactly p
    for d in range(2, p):
        if p % d == 0:
            raise NotElementaryAbelian(f"element order {p} is not prime")
    to_vector: dict[int, tuple[int, ...]] = {0: ()}
    basis: list[int] = []
    for x in elems:
        if x in to_vector:
            continue
        # extend every known element by powers of the new basis vector x
        basis.append(x)
        current = list(to_vector.items())
        for elt, vec in current:
            acc = elt
            for k in range(1, p):
                acc = rows[acc][x]
                to_vector[acc] = vec + (k,)
        for elt, vec in current:
            to_vector[elt] = vec + (0,)
    dim = len(basis)
    if p ** dim != len(elems):
        raise NotElementaryAbelian("order is not a prime power of the rank")
    to_vec = {e: tuple(v) for e, v in to_vector.items()}
    from_vec = {v: e for e, v in to_vec.items()}
    return KernelCoords(sub, p, dim, tuple(basis), to_vec, from_vec)


def module_from_cover(pi: Cover, sub: Subgroup) -> GModule:
    """The conjugation module on ``sub`` induced along ``pi``.

    ``sub`` must be normal in the source, elementary abelian, and central
    in Ker(pi) (so that conjugation is independent of the preimage choice).
    """
    src = pi.source
    if not same_group(sub.parent, src):
        raise Incompatible("subgroup lives in a different group")
    if not sub.is_normal():
        raise NotNormal("subgroup is not normal in the cover source")
    ker = pi.kernel()
    if sub.mask & ~ker.mask:
        raise NotCentralInKernel("subgroup is not inside the kernel")
    rows = src.mul_rows
    for k in ker.elements:
        for x in sub.elements:
            if rows[k][x] != rows[x][k]:
                raise NotCentralInKernel(
                    "subgroup is not centralized by the kernel"
                )
    coords = kernel_coordinates(sub)
    base = pi.target
    section = np.full(base.order, -1, dtype=np.int64)
    for h in range(src.order):
        g = int(pi.image[h])
        if section[g] < 0:
            section[g] = h
    mats = []
    for g in range(base.order):
        h = int(section[g])
        cols = []
        for b in coords.basis_elements:
            conj = src.conjugate(h, b)
            cols.append(coords.to_vector[conj])
        if coords.dim:
            mats.append(np.array(cols, dtype=np.int64).T % coords.p)
        else:
            mats.append(np.zeros((0, 0), dtype=np.int64))
    return GModule(base, coords.p, tuple(mats), check=True)


def trivial_module(group: FiniteGroup, p: int, dim: int = 1) -> GModule:
    ident = np.eye(dim, dtype=np.int64)
    return GModule(group, p, tuple(ident for _ in range(group.order)), check=False)


def direct_sum_module(module: GModule, n: int) -> GModule:
    """The direct sum of ``n`` copies (block-diagonal action)."""
    mats = []
    for g in range(module.group.order):
        blocks = [module.action[g]] * n
        d = module.dim * n
        out = np.zeros((d, d), dtype=np.int64)
        for i in range(n):
            lo = i * module.dim
            out[lo : lo + module.dim, lo : lo + module.dim] = module.action[g]
        mats.append(out)
    return GModule(module.group, module.p, tuple(mats), check=False)


def is_simple_module(module: GModule) -> bool:
    """True iff nonzero and every nonzero vector generates the module."""
    d = module.dim
    if d == 0:
        return False
    if d == 1:
        return True
    p = module.p
    for idx in range(1, p ** d):
        v = module.index_to_vector(idx)
        orbit = np.array([m @ v % p for m in module.action], dtype=np.int64)
        if rank_mod_p(orbit, p) < d:
            return False
    return True


@dataclass(frozen=True)
class EndoField:
    """The endomorphism field F = End_G(A) of a simple module."""

    module: GModule
    basis_endos: tuple[np.ndarray, ...]
    elements: tuple[np.ndarray, ...]  # all q matrices, sorted by bytes
    add_table: np.ndarray
    mul_table: np.ndarray
    generator_index: int

    @property
    def p(self) -> int:
        return self.module.p

    @property
    def k(self) -> int:
        return len(self.basis_endos)

    @property
    def order(self) -> int:
        return self.p ** self.k

    @property
    def generator_matrix(self) -> np.ndarray:
        return self.elements[self.generator_index]


def endo_field(module: GModule) -> EndoField:
    """Compute End_G(A) for a simple module, with deterministic labeling.

    Elements are sorted by matrix bytes; the multiplicative generator is
    the least element generating the unit group (the identity when q = 2,
    whose unit group is trivial).
    """
    if not is_simple_module(module):
        raise NotSimple("endomorphism field needs a simple module")
    p, d = module.p, module.dim
    gens = generating_set(module.group)
    rows = []
    for g in gens or (0,):
        a = module.action[g]
        # unknown X (d x d, flattened row-major): X a - a X = 0
        sys = np.kron(np.eye(d, dtype=np.int64), a.T) - np.kron(a, np.eye(d, dtype=np.int64))
        rows.append(sys % p)
    system = np.vstack(rows) if rows else np.zeros((0, d * d), dtype=np.int64)
    basis_flat = nullspace_mod_p(system, p)
    basis = tuple(b.reshape(d, d) for b in basis_flat)
    k = len(basis)
    # enumerate all q elements as F_p-combinations of the basis
    combos = [np.zeros((d, d), dtype=np.int64)]
    for b in basis:
        combos = [
            (c + coef * b) % p for c in combos for coef in range(p)
        ]
    elements = tuple(sorted(combos, key=lambda m: m.tobytes()))
    index = {m.tobytes(): i for i, m in enumerate(elements)}
    q = len(elements)
    assert q == p ** k
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            add[i, j] = index[((a + b) % p).tobytes()]
            mul[i, j] = index[(a @ b % p).tobytes()]
    ident_idx = index[np.eye(d, dtype=np.int64).astype(np.int64).tobytes()]
    generator = ident_idx
    if q > 2:
        for i, m in enumerate(elements):
            if i == index[np.zeros((d, d), dtype=np.int64).tobytes()]:
                continue
            if i == ident_idx:
                continue
            # multiplicative order of element i
            order, cur = 1, i
            while cur != ident_idx:
                cur = int(mul[cur, i])
                order += 1
                if order > q:
                    break
            if order == q - 1:
                generator = i
                break
    return EndoField(
        module=module,
        basis_endos=basis,
        elements=elements,
        add_table=add,
        mul_table=mul,
        generator_index=generator,
    )


@dataclass(frozen=True)
class DualSpace:
    """Hom_G(K, A) as an F = End_G(A) vector space."""

    module: GModule  # K
    target: GModule  # A
    endo_field: EndoField
    fp_basis: tuple[np.ndarray, ...]  # F_p-basis matrices (dA x dK)
    basis: tuple[ModuleHom, ...]  # F-basis

    @property
    def f_dim(self) -> int:
        return len(self.basis)

    @property
    def fp_dim(self) -> int:
        return len(self.fp_basis)


def f_independent_subset(items, scalar_fn, p: int, k: int):
    """Greedy F-independent subset of ``items`` spanning their F-span.

    ``scalar_fn`` applies the field generator; the F-span of v is the
    F_p-span of scalar_fn^j(v) for j < k. Returns (picked, indices).
    """
    items = [np.asarray(v, dtype=np.int64) % p for v in items]
    if not items:
        return [], []
    length = items[0].size
    span = IncrementalRowReduce(length, p)
    picked, indices = [], []
    for pos, v in enumerate(items):
        if span.contains(v.reshape(-1)):
            continue
        picked.append(v)
        indices.append(pos)
        w = v
        for _ in range(k):
            span.add(w.reshape(-1))
            w = scalar_fn(w)
    return picked, indices


def hom_space(module: GModule, target: GModule) -> DualSpace:
    """Hom_G(K, A) for simple A, presented by F_p and F bases."""
    if module.p != target.p:
        raise CharacteristicMismatch("modules live over different primes")
    if not same_group(module.group, target.group):
        raise Incompatible("modules are over different groups")
    endo = endo_field(target)
    p = module.p
    dk, da = module.dim, target.dim
    if dk == 0 or da == 0:
        return DualSpace(module, target, endo, (), ())
    gens = generating_set(module.group) or (0,)
    rows = []
    for g in gens:
        ak, aa = module.action[g], target.action[g]
        # unknown X (da x dk, row-major): X ak - aa X = 0
        sys = np.kron(np.eye(da, dtype=np.int64), ak.T) - np.kron(aa, np.eye(dk, dtype=np.int64))
        rows.append(sys % p)
    system = np.vstack(rows)
    flat = nullspace_mod_p(system, p)
    fp_basis = tuple(v.reshape(da, dk) for v in flat)
    J = endo.generator_matrix
    picked, _ = f_independent_subset(
        fp_basis, lambda m: J @ m % p, p, endo.k
    )
    f_basis = tuple(ModuleHom(module, target, m) for m in picked)
    return DualSpace(module, target, endo, fp_basis, f_basis)


def homs_vanishing_on(dual: DualSpace, vectors: np.ndarray) -> list[np.ndarray]:
    """F_p-basis of the maps in the dual space vanishing on given vectors."""
    vectors = np.asarray(vectors, dtype=np.int64)
    if not dual.fp_basis:
        return []
    if vectors.size == 0:
        return list(dual.fp_basis)
    p = dual.module.p
    rows = []
    for v in vectors:
        # coefficients x: sum_i x_i (M_i @ v) = 0, one row per A-coordinate
        cols = np.array([m @ v % p for m in dual.fp_basis], dtype=np.int64)
        rows.append(cols.T)
    system = np.vstack(rows) % p
    combos = nullspace_mod_p(system, p)
    out = []
    for c in combos:
        mat = np.zeros_like(dual.fp_basis[0])
        for coef, m in zip(c, dual.fp_basis):
            mat = (mat + int(coef) * m) % p
        out.append(mat)
    return out


def is_A_generated(module: GModule, target: GModule) -> bool:
    """True iff the elements of Hom_G(K, A) have zero common kernel."""
    if module.dim == 0:
        return True
    dual = hom_space(module, target)
    if not dual.fp_basis:
        return False
    stacked = np.vstack(dual.fp_basis)
    return rank_mod_p(stacked, module.p) == module.dim


def decompose_isotypic(module: GModule, target: GModule) -> ModuleHom:
    """The isomorphism K -> A^n assembled from an F-basis of Hom_G(K, A)."""
    if not is_A_generated(module, target):
        raise NotAGenerated("module is not generated by the simple module")
    dual = hom_space(module, target)
    n = dual.f_dim
    ambient = direct_sum_module(target, n)
    if n == 0:
        return ModuleHom(module, ambient, np.zeros((0, module.dim)))
    stacked = np.vstack([h.matrix for h in dual.basis]) % module.p
    hom = ModuleHom(module, ambient, stacked)
    if not hom.is_isomorphism():
        raise NotAGenerated("dual basis did not induce an isomorphism")
    return hom


def _is_invariant_subspace(module: GModule, rows: np.ndarray) -> bool:
    rows = np.asarray(rows, dtype=np.int64) % module.p
    if rows.size == 0:
        return True
    reduced, _ = row_echelon_mod_p(rows, module.p)
    for g in generating_set(module.group) or (0,):
        for v in reduced:
            img = module.action[g] @ v % module.p
            if not row_space_contains(reduced, img, module.p):
                return False
    return True


def submodule_generated(module: GModule, vec: np.ndarray) -> np.ndarray:
    """RREF row basis of the submodule generated by one vector."""
    p = module.p
    orbit = np.array(
        [m @ np.asarray(vec, dtype=np.int64) % p for m in module.action],
        dtype=np.int64,
    )
    reduced, _ = row_echelon_mod_p(orbit, p)
    return reduced


def restrict_to_subspace(module: GModule, rows: np.ndarray) -> GModule:
    """The action of the group on an invariant subspace, in its row basis."""
    p = module.p
    rows = np.asarray(rows, dtype=np.int64) % p
    if not _is_invariant_subspace(module, rows):
        raise NotSubmodule("subspace is not stable under the group action")
    reduced, pivots = row_echelon_mod_p(rows, p)
    mats = []
    for g in range(module.group.order):
        img = reduced @ module.action[g].T % p
        # coordinates of each image row in the RREF basis: read pivots
        coords = img[:, pivots] % p
        mats.append(coords.T)
    return GModule(module.group, p, tuple(mats), check=False)


def infer_simple_summand(module: GModule) -> GModule:
    """A simple submodule of an isotypic module, deterministically chosen."""
    if module.dim == 0:
        raise NotAGenerated("zero module has no simple summand")
    for idx in range(1, module.size):
        rows = submodule_generated(module, module.index_to_vector(idx))
        cand = restrict_to_subspace(module, rows)
        if is_simple_module(cand):
            return cand
    raise NotAGenerated("no cyclic submodule is simple")


def complement(module: GModule, sub_rows: np.ndarray) -> np.ndarray:
    """A complement submodule M with K = L (+) M, via dual-space splitting.

    The module must be A-generated; A is inferred from a simple cyclic
    submodule. Returns a canonical (RREF) row basis. Raises NotSubmodule
    when L is not invariant.
    """
    if module.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return complement_in(module, infer_simple_summand(module), sub_rows)


def complement_in(
    module: GModule, target: GModule, sub_rows: np.ndarray
) -> np.ndarray:
    """Complement of an invariant subspace inside an A-generated module.

    Returns a canonical (RREF) row basis of an invariant M with
    L ∩ M = 0 and L + M = K. Raises NotSubmodule if L is not invariant.
    """
    p = module.p
    sub_rows = np.asarray(sub_rows, dtype=np.int64) % p
    if sub_rows.size == 0:
        sub_rows = sub_rows.reshape(0, module.dim)
    if not _is_invariant_subspace(module, sub_rows):
        raise NotSubmodule("subspace is not stable under the group action")
    dual = hom_space(module, target)
    ann = homs_vanishing_on(dual, sub_rows)
    J = dual.endo_field.generator_matrix
    scalar = lambda m: J @ m % p
    items = list(ann) + list(dual.fp_basis)
    picked, indices = f_independent_subset(items, scalar, p, dual.endo_field.k)
    # the completion part: picked items that came from the full basis
    completion = [m for m, i in zip(picked, indices) if i >= len(ann)]
    if not completion:
        ident = np.eye(module.dim, dtype=np.int64)
        reduced, _ = row_echelon_mod_p(ident, p)
        return reduced
    stacked = np.vstack(completion) % p
    basis = nullspace_mod_p(stacked, p)
    reduced, _ = row_echelon_mod_p(basis, p) if basis.size else (basis, [])
    return reduced


def modules_isomorphic(a: GModule, b: GModule) -> bool:
    """G-isomorphism test for simple modules (Schur: any nonzero hom)."""
    if not is_simple_module(a) or not is_simple_module(b):
        raise NotSimple("isomorphism test implemented for simple modules")
    if a.p != b.p or a.dim != b.dim:
        return False
    if not same_group(a.group, b.group):
        return False
    dual = hom_space(a, b)
    return dual.fp_dim > 0


def first_module_iso(a: GModule, b: GModule) -> ModuleHom:
    """A deterministic G-isomorphism between isomorphic simple modules."""
    if not modules_isomorphic(a, b):
        raise NotSimple("modules are not isomorphic simple modules")
    dual = hom_space(a, b)
    hom = ModuleHom(a, b, dual.fp_basis[0])
    assert hom.is_isomorphism()
    return hom
