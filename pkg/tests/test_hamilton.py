from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cayleyham.certs import EdgeConstraint, validate_cert
from cayleyham.graphs import analyze, cayley_graph, complete_bipartite, complete_graph, cycle_graph, graph_from_edges, petersen
from cayleyham.hamilton import (
    SearchBudget,
    classify_conn_laceable,
    enumerate_ham_cycles,
    find_ham_cycle,
    ham_path,
    sample_ham_cycles,
    sample_ham_cycles_redundant,
)


def _brute_has_cycle(graph):
    n = graph.vertex_count
    if n <= 2:
        return n == 1 or graph.has_edge(0, 1)
    for perm in itertools.permutations(range(1, n)):
        cyc = (0,) + perm
        if all(graph.has_edge(cyc[i], cyc[(i + 1) % n]) for i in range(n)):
            return True
    return False


@pytest.mark.parametrize(
    "graph,expected",
    [(petersen(), False), (complete_graph(5), True), (complete_bipartite(2, 3), False), (cycle_graph(7), True)],
)
def test_known_graphs(graph, expected):
    cert = find_ham_cycle(graph)
    assert (cert is not None) == expected
    if cert is not None:
        assert validate_cert(graph, cert)


@given(st.integers(4, 8), st.floats(0.3, 0.9), st.integers(0, 10_000))
def test_random_graphs_against_permutations(n, density, seed):
    rng = random.Random(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < density]
    graph = graph_from_edges(n, edges)
    assert (find_ham_cycle(graph) is not None) == _brute_has_cycle(graph)
    assert (len(enumerate_ham_cycles(graph, limit=1)) > 0) == _brute_has_cycle(graph)


def test_required_edges_respected(group_by_name):
    graph = cayley_graph(group_by_name("D4"), [1, 4])
    cons = EdgeConstraint.make(required=[(0, 1), (1, 0), (2, 3)])
    cert = find_ham_cycle(graph, cons)
    assert cert is not None and validate_cert(graph, cert, cons)


def test_inconsistent_required_arcs():
    graph = complete_graph(10)
    # a -> b, undirected b - c, d -> c: no consistent orientation
    cons = EdgeConstraint.make(required=[(0, 1), (1, 2), (2, 1), (3, 2)])
    assert find_ham_cycle(graph, cons, SearchBudget(time_limit_ms=2000)) is None
    # a short required cycle cannot extend to a hamiltonian one
    tri = EdgeConstraint.make(required=[(0, 1), (1, 2), (2, 0)])
    assert find_ham_cycle(graph, tri, SearchBudget(time_limit_ms=2000)) is None


def test_enumeration_counts_k4():
    # K4 has 3 undirected hamiltonian cycles
    assert len(enumerate_ham_cycles(complete_graph(4))) == 3


def test_sample_cycles_start_at_identity(group_by_name):
    G = group_by_name("A4")
    certs = sample_ham_cycles(G, [1, 4], count=5)
    graph = cayley_graph(G, [1, 4])
    assert certs and len({c.vertices for c in certs}) == len(certs)
    for c in certs:
        assert c.vertices[0] == 0 and validate_cert(graph, c)


def test_redundant_samples_use_new_edge(group_by_name):
    G = group_by_name("Z6")
    certs = sample_ham_cycles_redundant(G, [1], 2, count=5)
    assert certs
    for c in certs:
        steps = [(G.mul(G.inv(u), v)) for u, v in c.steps()]
        assert 2 in steps or 4 in steps


def test_ham_path_endpoints():
    path = ham_path(cycle_graph(6), 0, 1)
    assert path.vertices[0] == 0 and path.vertices[-1] == 1


def test_classify_k4_connected():
    from cayleyham.groups import FiniteGroup

    # Z4 with generators 1, 2 gives K4
    G = FiniteGroup([[(a + b) % 4 for b in range(4)] for a in range(4)])
    res = classify_conn_laceable(G, [1, 2])
    assert res.kind == "hamiltonian_connected"


def test_classify_cube_laceable(group_by_name):
    G = group_by_name("Z2xZ2xZ2")
    res = classify_conn_laceable(G, [1, 2, 4])
    assert res.kind == "hamiltonian_laceable" and res.bipartite
    graph = cayley_graph(G, [1, 2, 4])
    for a, cert in res.witnesses.items():
        assert cert.vertices[0] == 0 and cert.vertices[-1] == a and validate_cert(graph, cert)


def test_classify_prism_against_brute_force(group_by_name):
    G = group_by_name("Z6")
    graph = cayley_graph(G, [2, 3])
    res = classify_conn_laceable(G, [2, 3])
    for a in range(1, 6):
        brute = any(
            p[0] == 0 and p[-1] == a and all(graph.has_edge(p[i], p[i + 1]) for i in range(5))
            for p in ((0,) + q for q in itertools.permutations(range(1, 6)))
        )
        assert (a in res.witnesses) == brute
