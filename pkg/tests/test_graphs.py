from __future__ import annotations

import pytest

from cayleyham.graphs import analyze, cayley_graph, complete_bipartite, complete_graph, cycle_graph, graph_from_text, petersen


def test_cayley_graph_edges(group_by_name):
    G = group_by_name("Z6")
    graph = cayley_graph(G, [1])
    assert graph.edge_count == 6 and graph.valence == 2
    assert graph.has_edge(0, 1) and graph.has_edge(0, 5) and not graph.has_edge(0, 2)


def test_involution_gives_single_edge(group_by_name):
    graph = cayley_graph(group_by_name("Z2xZ2"), [1, 2])
    assert graph.valence == 2 and graph.edge_count == 4


@pytest.mark.parametrize(
    "graph,connected,bipartite",
    [
        (petersen(), True, False),
        (complete_graph(4), True, False),
        (complete_bipartite(3, 3), True, True),
        (cycle_graph(6), True, True),
        (cycle_graph(5), True, False),
    ],
)
def test_analyze(graph, connected, bipartite):
    info = analyze(graph)
    assert info.connected == connected and info.bipartite == bipartite
    if bipartite:
        for u, v in graph.edges():
            assert info.bipartition[u] != info.bipartition[v]


def test_disconnected(group_by_name):
    assert not analyze(cayley_graph(group_by_name("Z6"), [2])).connected


def test_text_round_trip():
    g = petersen()
    assert sorted(graph_from_text(g.to_text()).edges()) == sorted(g.edges())
