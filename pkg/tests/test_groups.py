"""Group core: tables, subgroup machinery, quotients, homs, searches."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from catalog import (
    SMALL_GROUPS,
    alt5,
    generated_subgroup,
    klein_four,
    nonsplit_cover_c2,
    quaternion8,
    split_cover_c2,
    sym3,
)
from covercalc import (
    BuildLimits,
    Cover,
    GroupHom,
    Subgroup,
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
from covercalc.errors import Incompatible, NotNormal, OrderCapExceeded
from covercalc.groups import (
    all_subgroups,
    closure_of,
    is_minimal_normal,
    normal_subgroups,
    subgroup_from_elements,
)

GROUPS = {name: fn() for name, fn in SMALL_GROUPS.items()}


def raw_table(group):
    return tuple(tuple(int(x) for x in row) for row in group.mul)


# ---------------------------------------------------------------------------
# construction


def test_identity_is_index_zero():
    for g in GROUPS.values():
        assert (g.mul[0] == np.arange(g.order)).all()
        assert (g.mul[:, 0] == np.arange(g.order)).all()


def test_build_group_is_deterministic():
    a = build_group([(1, 2, 0), (1, 0, 2)])
    b = build_group([(1, 2, 0), (1, 0, 2)])
    assert np.array_equal(a.mul, b.mul)


def test_known_orders():
    expected = {
        "C1": 1, "C2": 2, "C3": 3, "C4": 4, "C6": 6, "C9": 9,
        "V4": 4, "S3": 6, "S4": 24, "A4": 12, "D4": 8, "Q8": 8,
        "C3xC3": 9,
    }
    for name, n in expected.items():
        assert GROUPS[name].order == n, name
    assert alt5().order == 60


def test_order_cap_enforced():
    with pytest.raises(OrderCapExceeded):
        build_group([(1, 2, 3, 0), (1, 0, 2, 3)], limits=BuildLimits(order_cap=10))


def test_element_orders_match_oracle():
    for name in ("S3", "Q8", "A4", "D4", "C6"):
        g = GROUPS[name]
        assert sorted(int(x) for x in g.element_orders()) == oracles.element_orders(
            raw_table(g)
        )


def test_quaternion_matches_symbolic_table():
    table, _ = oracles.quaternion_table()
    q8 = quaternion8()
    assert sorted(oracles.element_orders(table)) == sorted(
        int(x) for x in q8.element_orders()
    )
    assert len(oracles.normal_subgroup_sets(table)) == len(normal_subgroups(q8))


# ---------------------------------------------------------------------------
# subgroup lattice vs subset-enumeration oracle


@pytest.mark.parametrize("name", ["C4", "V4", "S3", "D4", "Q8", "A4", "C3xC3"])
def test_subgroup_lattice_matches_oracle(name):
    g = GROUPS[name]
    got = {sub.elements for sub in all_subgroups(g)}
    want = {tuple(sorted(s)) for s in oracles.all_subgroup_sets(raw_table(g))}
    assert got == want


@pytest.mark.parametrize("name", ["C4", "V4", "S3", "D4", "Q8", "A4", "C3xC3"])
def test_normal_subgroups_match_oracle(name):
    g = GROUPS[name]
    got = {sub.elements for sub in normal_subgroups(g)}
    want = {tuple(sorted(s)) for s in oracles.normal_subgroup_sets(raw_table(g))}
    assert got == want


@pytest.mark.parametrize("name", ["V4", "S3", "D4", "Q8", "A4"])
def test_maximal_normal_in_matches_oracle(name):
    g = GROUPS[name]
    full = Subgroup(g, tuple(range(g.order)))
    got = {sub.elements for sub in maximal_normal_in(g, full)}
    want = {
        tuple(sorted(s))
        for s in oracles.maximal_normal_inside(raw_table(g), frozenset(range(g.order)))
    }
    assert got == want


def test_maximal_normal_in_proper_bound():
    d4 = GROUPS["D4"]
    center = next(
        s for s in normal_subgroups(d4) if s.order == 2
    )
    # inside the order-2 center: only the trivial subgroup
    tops = maximal_normal_in(d4, center)
    assert [t.elements for t in tops] == [(0,)]
    assert maximal_normal_in(d4, Subgroup(d4, (0,))) == ()


def test_subgroup_from_elements_validates():
    s3 = GROUPS["S3"]
    with pytest.raises(Incompatible):
        subgroup_from_elements(s3, [0, 1])  # 3-cycle alone is not closed
    sub = subgroup_from_elements(s3, [0, 1, 3])
    assert sub.order == 3 and sub.is_normal()


def test_is_minimal_normal():
    a4 = GROUPS["A4"]
    v4_inside = next(s for s in normal_subgroups(a4) if s.order == 4)
    assert is_minimal_normal(a4, v4_inside)
    full = Subgroup(a4, tuple(range(12)))
    assert not is_minimal_normal(a4, full)
    with pytest.raises(NotNormal):
        is_minimal_normal(GROUPS["S3"], generated_subgroup(GROUPS["S3"], [2]))


# ---------------------------------------------------------------------------
# quotients


def test_quotient_of_s3_by_rotations():
    s3 = GROUPS["S3"]
    a3 = generated_subgroup(s3, [1])
    q, cover = quotient(s3, a3)
    assert q.order == 2
    assert cover.kernel().elements == a3.elements
    assert cover.is_surjective()


def test_quotient_by_trivial_is_identity():
    g = GROUPS["D4"]
    q, cover = quotient(g, Subgroup(g, (0,)))
    assert same_group(q, g)
    assert (cover.image == np.arange(g.order)).all()


def test_quotient_requires_normal():
    s3 = GROUPS["S3"]
    with pytest.raises(NotNormal):
        quotient(s3, generated_subgroup(s3, [2]))


def test_quotient_tower_composes():
    c4 = GROUPS["C4"]
    _, pi = quotient(c4, generated_subgroup(c4, [2]))
    comp = compose(terminal_cover(pi.target), pi)
    assert isinstance(comp, Cover)
    assert comp.target.order == 1


# ---------------------------------------------------------------------------
# homs and covers


def test_hom_rejects_non_homomorphism():
    c4 = GROUPS["C4"]
    c2 = GROUPS["C2"]
    with pytest.raises(Incompatible):
        GroupHom(c4, c2, np.array([0, 1, 1, 0]))


def test_cover_requires_surjectivity():
    c2 = GROUPS["C2"]
    v4 = GROUPS["V4"]
    with pytest.raises(Incompatible):
        Cover(c2, v4, np.array([0, 1]))


def test_compose_type_propagation():
    eta = nonsplit_cover_c2()
    ident = identity_cover(eta.source)
    both = compose(eta, ident)
    assert isinstance(both, Cover)
    injection = GroupHom(
        trivial_group(), eta.source, np.array([0])
    )
    mixed = compose(eta, injection)
    assert not isinstance(mixed, Cover)


def test_kernel_and_preimage():
    eta = split_cover_c2()
    ker = eta.kernel()
    assert ker.order == 2
    back = eta.preimage_subgroup(Subgroup(eta.target, (0,)))
    assert back.elements == ker.elements


# ---------------------------------------------------------------------------
# isomorphism / epimorphism search


def test_find_isomorphism_over_identity_case():
    eta = nonsplit_cover_c2()
    iso = find_isomorphism_over(eta, eta)
    assert iso is not None and iso.is_isomorphism()


def test_find_isomorphism_over_distinguishes_c4_v4():
    eta1 = nonsplit_cover_c2()
    eta0 = split_cover_c2()
    assert find_isomorphism_over(eta1, eta0) is None


def test_find_epimorphism_over_terminal():
    # C4 ->> C4/<2> factors through itself onto the smaller cover
    c4 = GROUPS["C4"]
    _, pi = quotient(c4, generated_subgroup(c4, [2]))
    found = find_epimorphism_over(pi, pi)
    assert found is not None
    assert (pi.image[:] == pi.image[found.image]).all() or found.is_isomorphism()


def test_find_epimorphism_over_impossible():
    # nothing maps the split order-4 cover onto the non-split one over C2
    assert find_epimorphism_over(split_cover_c2(), nonsplit_cover_c2()) is None


def test_is_indecomposable():
    assert is_indecomposable(nonsplit_cover_c2())
    assert is_indecomposable(split_cover_c2())
    assert is_indecomposable(terminal_cover(alt5()))
    assert not is_indecomposable(identity_cover(GROUPS["C2"]))


# ---------------------------------------------------------------------------
# properties


group_names = st.sampled_from(sorted(GROUPS))


@given(group_names, st.data())
@settings(max_examples=60, deadline=None)
def test_inverse_antihomomorphism(name, data):
    g = GROUPS[name]
    a = data.draw(st.integers(0, g.order - 1))
    b = data.draw(st.integers(0, g.order - 1))
    ab = int(g.mul[a, b])
    assert int(g.inv[ab]) == int(g.mul[g.inv[b], g.inv[a]])


@given(group_names, st.data())
@settings(max_examples=60, deadline=None)
def test_conjugation_is_automorphism(name, data):
    g = GROUPS[name]
    c = data.draw(st.integers(0, g.order - 1))
    a = data.draw(st.integers(0, g.order - 1))
    b = data.draw(st.integers(0, g.order - 1))
    lhs = g.conjugate(c, int(g.mul[a, b]))
    rhs = int(g.mul[g.conjugate(c, a), g.conjugate(c, b)])
    assert lhs == rhs


@given(group_names, st.data())
@settings(max_examples=40, deadline=None)
def test_closure_is_a_subgroup(name, data):
    g = GROUPS[name]
    seeds = data.draw(st.lists(st.integers(0, g.order - 1), max_size=3))
    elems = closure_of(g, seeds)
    sub = subgroup_from_elements(g, elems)  # would raise if not closed
    assert g.order % sub.order == 0  # Lagrange


@given(group_names)
@settings(max_examples=20, deadline=None)
def test_quotient_sizes_multiply(name):
    g = GROUPS[name]
    for n in normal_subgroups(g):
        q, cover = quotient(g, n)
        assert q.order * n.order == g.order
        assert cover.kernel() == n
