from __future__ import annotations

import itertools

import pytest

from cayleyham.gensets import GenSet, irredundant_gensets_up_to_equiv, is_generating, is_irredundant, orbit_size
from cayleyham.groups import automorphisms


def _brute_irredundant(G):
    out = []
    for r in range(1, 5):
        for S in itertools.combinations(range(1, G.order), r):
            if is_generating(G, S) and is_irredundant(G, S):
                out.append(frozenset(S))
    return out


def _class_count_oracle(G):
    """Irredundant sets up to automorphism and replacing elements by inverses."""
    auts = [[a(x) for x in range(G.order)] for a in automorphisms(G)]
    seen, classes = set(), 0
    for S in _brute_irredundant(G):
        key = frozenset(min(x, G.inv(x)) for x in S)
        if key in seen:
            continue
        classes += 1
        for aut in auts:
            for signs in itertools.product((0, 1), repeat=len(S)):
                img = frozenset(min(aut[x], G.inv(aut[x])) for x in S)
                seen.add(img)
    return classes


@pytest.mark.parametrize("name,count", [("Z6", 2), ("D3", 2)])
def test_order6_census(group_by_name, name, count):
    assert len(irredundant_gensets_up_to_equiv(group_by_name(name))) == count


@pytest.mark.parametrize("name", ["Z2xZ2", "Z8", "D4", "Dic2", "Z2xZ6", "A4", "D6", "Dic3"])
def test_census_matches_brute_force(group_by_name, name):
    G = group_by_name(name)
    classes = irredundant_gensets_up_to_equiv(G)
    assert len(classes) == _class_count_oracle(G)
    for cls in classes:
        S = cls.representative
        assert S.generating and S.irredundant


def test_orbits_cover_all_irredundant_sets(group_by_name):
    G = group_by_name("D4")
    total = sum(orbit_size(G, cls.representative.elements) for cls in irredundant_gensets_up_to_equiv(G))
    assert total == len(set(_brute_irredundant(G)))


def test_genset_with_inverses(group_by_name):
    G = group_by_name("Z6")
    S = GenSet(G, (1,))
    assert sorted(S.with_inverses()) == [1, 5]
    assert S.generating and S.irredundant
