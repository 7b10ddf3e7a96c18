"""Cayley graphs and the few structural queries the verification needs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    @property
    def valence(self) -> int:
        degrees = {len(a) for a in self.adjacency}
        return degrees.pop() if len(degrees) == 1 else -1

    def to_text(self) -> str:
        return "\n".join(" ".join(map(str, nb)) for nb in self.adjacency) + "\n"


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at {u}")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n, tuple(tuple(sorted(a)) for a in adj))


def graph_from_text(text: str) -> Graph:
    rows = [line.split() for line in text.strip("\n").split("\n")]
    return graph_from_edges(len(rows), [(u, int(v)) for u, row in enumerate(rows) for v in row])


def cayley_graph(G, S: Sequence[int]) -> Graph:
    """Undirected Cayley graph with edges ``{g, g·s}`` for ``s ∈ S ∪ S⁻¹``."""
    S = list(getattr(S, "elements", S))
    if 0 in S:
        raise ValueError("identity in connection set")
    conn = sorted(set(S) | {G.inv(s) for s in S})
    mul = G.mul
    adj = tuple(tuple(sorted({mul(g, s) for s in conn})) for g in range(G.order))
    return Graph(G.order, adj)


@dataclass(frozen=True)
class GraphInfo:
    connected: bool
    bipartite: bool
    bipartition: Optional[tuple[int, ...]]
    valence: int


def analyze(graph: Graph) -> GraphInfo:
    """Connectivity and 2-colouring by breadth-first search from vertex 0."""
    n = graph.vertex_count
    colour = [-1] * n
    bipartite = True
    seen = 0
    for root in range(n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            seen += 1
            for v in graph.adjacency[u]:
                if colour[v] < 0:
                    colour[v] = colour[u] ^ 1
                    queue.append(v)
                elif colour[v] == colour[u]:
                    bipartite = False
        if root == 0:
            connected = seen == n
    return GraphInfo(
        connected=connected,
        bipartite=bipartite,
        bipartition=tuple(colour) if bipartite else None,
        valence=graph.valence,
    )


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return graph_from_edges(10, outer + spokes + inner)


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return graph_from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def cycle_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])
