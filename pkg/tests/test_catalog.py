from __future__ import annotations

import json

import pytest

from cayleyham.catalog import alternating4, largest_prime_factor, is_prime, load_extension
from cayleyham.groups import are_isomorphic


@pytest.mark.parametrize("n,count", [(4, 2), (6, 2), (8, 5), (12, 5), (16, 14)])
def test_counts(catalog, n, count):
    assert len(catalog.groups(n)) == count


def test_ids_are_stable(catalog):
    for n in (6, 8, 12):
        for i, G in enumerate(catalog.groups(n), start=1):
            assert G.catalog_id == (n, i)
            assert catalog.get((n, i)) is G


def test_find_locates_isomorphic_copy(catalog):
    A4 = alternating4()
    found = catalog.find(A4)
    assert found.catalog_id[0] == 12
    assert are_isomorphic(found, A4)


@pytest.mark.parametrize("n,lpf", [(2, 2), (12, 3), (45, 5), (49, 7), (97, 97)])
def test_largest_prime_factor(n, lpf):
    assert largest_prime_factor(n) == lpf


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_load_extension(tmp_path):
    path = tmp_path / "ext.jsonl"
    # S4 from a 4-cycle and a transposition
    path.write_text(json.dumps({"order": 24, "name": "S4", "degree": 4, "generators": [[1, 2, 3, 0], [1, 0, 2, 3]]}) + "\n")
    (G,) = load_extension(path)
    assert G.order == 24 and not G.is_abelian


def test_load_extension_order_mismatch(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"order": 12, "name": "x", "degree": 4, "generators": [[1, 2, 3, 0]]}) + "\n")
    with pytest.raises(ValueError):
        load_extension(path)
