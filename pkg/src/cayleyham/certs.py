"""Certificates and their validation.

Nothing in this module depends on the search code: a certificate is checked
only against the graph (or group) it claims to live in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence


@dataclass(frozen=True)
class EdgeConstraint:
    """Extra and required edges, as ordered pairs.

    A pair ``(u, v)`` is directed unless ``(v, u)`` is also listed, in which
    case the edge is undirected.
    """

    additional_edges: tuple[tuple[int, int], ...] = ()
    required_edges: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def make(additional=(), required=()) -> "EdgeConstraint":
        return EdgeConstraint(
            tuple((int(u), int(v)) for u, v in additional),
            tuple((int(u), int(v)) for u, v in required),
        )

    def required_arcs(self) -> tuple[set[tuple[int, int]], set[frozenset[int]]]:
        """Split required pairs into directed arcs and undirected edges."""
        req = set(self.required_edges)
        directed, undirected = set(), set()
        for u, v in req:
            if (v, u) in req:
                undirected.add(frozenset((u, v)))
            else:
                directed.add((u, v))
        return directed, undirected

    def extra_arcs(self) -> set[tuple[int, int]]:
        """Arcs contributed by the additional edges (both directions when undirected)."""
        return set(self.additional_edges)

    def to_json(self) -> dict:
        return {
            "additional_edges": [list(e) for e in self.additional_edges],
            "required_edges": [list(e) for e in self.required_edges],
        }

    @staticmethod
    def from_json(data: Optional[dict]) -> "EdgeConstraint":
        if not data:
            return EdgeConstraint()
        return EdgeConstraint.make(data.get("additional_edges", ()), data.get("required_edges", ()))


NO_CONSTRAINTS = EdgeConstraint()


@dataclass(frozen=True)
class CycleCert:
    kind: str  # "cycle" or "path"
    vertices: tuple[int, ...]
    origin: str = "exact"
    meta: dict = field(default_factory=dict, compare=False)

    def steps(self) -> list[tuple[int, int]]:
        vs = self.vertices
        pairs = list(zip(vs, vs[1:]))
        if self.kind == "cycle" and len(vs) >= 2:
            pairs.append((vs[-1], vs[0]))
        return pairs

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "origin": self.origin}


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_cert(graph, cert: CycleCert, constraints: Optional[EdgeConstraint] = None) -> Verdict:
    """Check that ``cert`` is a hamiltonian cycle/path of ``graph`` plus the
    additional edges, traversing every required edge."""
    constraints = constraints or NO_CONSTRAINTS
    n = graph.vertex_count
    vs = cert.vertices
    if cert.kind not in ("cycle", "path"):
        return Verdict(False, f"unknown kind {cert.kind!r}")
    if len(vs) != n:
        return Verdict(False, f"wrong length {len(vs)} (expected {n})")
    seen = set()
    for v in vs:
        if not (0 <= v < n):
            return Verdict(False, f"vertex {v} out of range")
        if v in seen:
            return Verdict(False, "revisit")
        seen.add(v)
    extra = constraints.extra_arcs()
    steps = cert.steps()
    if cert.kind == "cycle" and n <= 2:
        # degenerate closed walks on one or two vertices
        steps = steps[: n - 1] if n == 2 else []
    for u, v in steps:
        if not (v in graph.adjacency[u] or (u, v) in extra):
            return Verdict(False, f"non-edge {u}->{v}")
    used = set(cert.steps())
    directed, undirected = constraints.required_arcs()
    for u, v in sorted(directed):
        if (u, v) not in used:
            return Verdict(False, f"missing required edge {u}->{v}")
    for e in sorted(undirected, key=sorted):
        u, v = sorted(e)
        if (u, v) not in used and (v, u) not in used:
            return Verdict(False, f"missing required edge {u}-{v}")
    return Verdict(True)


def validate_group_walk(G, generators: Sequence[int], walk: Sequence[int], closed: bool = True) -> Verdict:
    """Check a walk given as a sequence of group elements from ``S ∪ S⁻¹``.

    The walk visits ``e, s1, s1·s2, ...``; it must visit every element once
    and, when ``closed``, return to the identity.
    """
    conn = set(generators) | {G.inv(s) for s in generators}
    if 0 in conn:
        return Verdict(False, "identity in connection set")
    x, seen = 0, {0}
    for i, s in enumerate(walk):
        if s not in conn:
            return Verdict(False, f"step {i} is not a generator")
        x = G.mul(x, s)
        last = i == len(walk) - 1
        if last and closed:
            if x != 0:
                return Verdict(False, "walk does not close")
            break
        if x in seen:
            return Verdict(False, "revisit")
        seen.add(x)
    expected = G.order if closed else G.order
    if len(seen) != expected:
        return Verdict(False, f"visited {len(seen)} of {G.order}")
    if closed and len(walk) != G.order:
        return Verdict(False, "wrong length")
    if not closed and len(walk) != G.order - 1:
        return Verdict(False, "wrong length")
    return Verdict(True)


def walk_to_vertices(G, walk: Sequence[int]) -> list[int]:
    x, out = 0, [0]
    for s in walk[:-1]:
        x = G.mul(x, s)
        out.append(x)
    return out


def vertices_to_walk(G, vertices: Sequence[int], closed: bool = True) -> list[int]:
    inv = G.inv
    pairs = list(zip(vertices, vertices[1:]))
    if closed:
        pairs.append((vertices[-1], vertices[0]))
    return [G.mul(inv(u), v) for u, v in pairs]
