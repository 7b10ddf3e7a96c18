from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from cayleyham.groups import (
    FiniteGroup,
    GroupError,
    abelian_characters,
    are_isomorphic,
    center,
    commutator_subgroup,
    is_normal,
    least_primitive_root,
    semidirect_zn,
    subgroup_generated,
    sylow_info,
)


def test_bad_table_rejected():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])


@pytest.mark.parametrize("name,order,abelian", [("Z6", 6, True), ("D3", 6, False), ("A4", 12, False), ("Dic3", 12, False)])
def test_basic_invariants(group_by_name, name, order, abelian):
    G = group_by_name(name)
    assert G.order == order
    assert G.is_abelian == abelian
    for a in range(G.order):
        assert G.mul(a, G.inv(a)) == 0
        assert G.power(a, G.element_orders[a]) == 0


@pytest.mark.parametrize("name,size", [("D3", 3), ("A4", 4), ("D4", 2), ("Z12", 1), ("Dic3", 3)])
def test_commutator_subgroup_size(group_by_name, name, size):
    assert len(commutator_subgroup(group_by_name(name))) == size


@pytest.mark.parametrize("name,size", [("D3", 1), ("D4", 2), ("Dic2", 2), ("A4", 1), ("Z6", 6)])
def test_center_size(group_by_name, name, size):
    assert len(center(group_by_name(name))) == size


def test_characters_count_equals_abelianization(catalog):
    # |Hom(G, C^*)| = |G / [G,G]|
    for n in range(1, 13):
        for G in catalog.groups(n):
            chars = abelian_characters(G)
            assert len(chars) == G.order // len(commutator_subgroup(G))
            for ch in chars:
                for a, b in itertools.product(range(G.order), repeat=2):
                    assert (ch.exponent[a] + ch.exponent[b] - ch.exponent[G.mul(a, b)]) % ch.order_m == 0


@pytest.mark.parametrize("p,root", [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (23, 5), (41, 6)])
def test_least_primitive_root(p, root):
    assert least_primitive_root(p) == root


@given(st.sampled_from([5, 7, 11, 13]), st.integers(0, 40), st.integers(0, 40), st.integers(0, 40))
def test_semidirect_associative(p, x, y, w):
    from cayleyham.catalog import default_catalog

    Gbar = default_catalog().groups(6)[1]
    ch = [c for c in abelian_characters(Gbar) if not c.is_trivial][0]
    twist = [pow(p - 1, e, p) for e in ch.exponent]
    G = semidirect_zn(p, Gbar, twist)
    x, y, w = (v % G.order for v in (x, y, w))
    assert G.mul(G.mul(x, y), w) == G.mul(x, G.mul(y, w))
    assert G.project(G.mul(x, y)) == Gbar.mul(G.project(x), G.project(y))


def test_semidirect_kernel_normal():
    from cayleyham.catalog import default_catalog

    Gbar = default_catalog().groups(6)[1]
    G = semidirect_zn(7, Gbar, [1] * 6).underlying
    assert is_normal(G, range(7))
    assert len(subgroup_generated(G, [1])) == 7


@pytest.mark.parametrize("name,p,normal", [("D3", 3, True), ("D3", 2, False), ("A4", 2, True), ("A4", 3, False)])
def test_sylow(group_by_name, name, p, normal):
    assert sylow_info(group_by_name(name), p).is_normal == normal


def test_isomorphism_detects_relabelling(group_by_name):
    G = group_by_name("D4")
    perm = [0] + list(range(G.order - 1, 0, -1))
    inv = {v: i for i, v in enumerate(perm)}
    H = FiniteGroup([[inv[G.mul(perm[a], perm[b])] for b in range(8)] for a in range(8)])
    assert are_isomorphic(G, H)
    assert not are_isomorphic(G, group_by_name("Dic2"))
