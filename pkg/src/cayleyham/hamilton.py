"""Hamiltonian cycle and path search under edge constraints.

Two engines share one entry point, :func:`find_ham_cycle`:

* a rotation heuristic (Pósa extension plus backbite rotations, restarted
  from seeded random states), which is fast on the vertex-transitive graphs
  we meet and handles thousands of vertices;
* an exact depth-first search over arcs with forced-move and connectivity
  pruning.  Within its node budget it is decisive: ``None`` means no cycle.

Search results are never trusted: every certificate is passed through
:func:`cayleyham.certs.validate_cert` before it is returned.
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .certs import NO_CONSTRAINTS, CycleCert, EdgeConstraint, validate_cert
from .graphs import Graph, analyze, cayley_graph


class SearchUndecided(RuntimeError):
    """The budget ran out before the search could decide."""


@dataclass(frozen=True)
class SearchBudget:
    time_limit_ms: int = 60_000
    restart_limit: int = 30
    exact_threshold: int = 64
    rng_seed: int = 0
    heuristic_steps: int = 0  # 0: scale with the graph
    node_limit: int = 2_000_000

    @staticmethod
    def from_env(**overrides) -> "SearchBudget":
        b = SearchBudget(**overrides)
        if "CAYLEYHAM_BUDGET_MS" in os.environ:
            b = replace(b, time_limit_ms=int(os.environ["CAYLEYHAM_BUDGET_MS"]))
        if "CAYLEYHAM_SEED" in os.environ:
            b = replace(b, rng_seed=int(os.environ["CAYLEYHAM_SEED"]))
        return b


DEFAULT_BUDGET = SearchBudget()


class _Arcs:
    """Arc structure of a graph plus constraint edges."""

    def __init__(self, graph: Graph, constraints: EdgeConstraint) -> None:
        n = graph.vertex_count
        self.n = n
        out = [set(nb) for nb in graph.adjacency]
        for u, v in constraints.extra_arcs():
            if u != v:
                out[u].add(v)
        self.out = out
        inn = [set() for _ in range(n)]
        for u in range(n):
            for v in out[u]:
                inn[v].add(u)
        self.inn = inn
        und = [out[u] | inn[u] for u in range(n)]
        self.und = und
        self.und_mask = [sum(1 << v for v in nb) for nb in und]
        directed, undirected = constraints.required_arcs()
        self.succ_forced: list[Optional[int]] = [None] * n
        self.pred_forced: list[Optional[int]] = [None] * n
        self.req_nb: list[list[int]] = [[] for _ in range(n)]
        self.feasible = True
        for u, v in directed:
            if v not in out[u]:
                self.feasible = False
            if self.succ_forced[u] not in (None, v) or self.pred_forced[v] not in (None, u):
                self.feasible = False
            self.succ_forced[u] = v
            self.pred_forced[v] = u
        for e in undirected:
            u, v = sorted(e)
            if v not in out[u] and u not in out[v]:
                self.feasible = False
            self.req_nb[u].append(v)
            self.req_nb[v].append(u)
        for x in range(n):
            ties = set(self.req_nb[x])
            if self.succ_forced[x] is not None:
                ties.add(self.succ_forced[x])
            if self.pred_forced[x] is not None:
                ties.add(self.pred_forced[x])
            if len(ties) > 2:
                self.feasible = False
        if self.feasible:
            self.feasible = self._chains_consistent(directed)

    def _chains_consistent(self, directed: set[tuple[int, int]]) -> bool:
        """Required edges must form paths (or one spanning cycle) whose
        required arcs all point the same way."""
        n = self.n
        tie = [set(self.req_nb[x]) for x in range(n)]
        for u, v in directed:
            tie[u].add(v)
            tie[v].add(u)
        seen = [False] * n
        for s in range(n):
            if seen[s] or not tie[s]:
                continue
            comp, stack = [], [s]
            seen[s] = True
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in tie[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            ends = [x for x in comp if len(tie[x]) == 1]
            if not ends:
                if len(comp) < n:
                    return False
                continue
            order, prev, x = [ends[0]], None, ends[0]
            while True:
                nxt = [y for y in tie[x] if y != prev]
                if not nxt:
                    break
                prev, x = x, nxt[0]
                order.append(x)
            pos = {x: i for i, x in enumerate(order)}
            senses = {pos[v] > pos[u] for u, v in directed if u in pos}
            if len(senses) > 1:
                return False
        return True


# --------------------------------------------------------------------------
# exact search


def _exact_search(arcs: _Arcs, budget: SearchBudget, deadline: float) -> Optional[list[int]]:
    """Depth-first search for a directed hamiltonian cycle respecting the
    required arcs and edges.  Raises :class:`SearchUndecided` on budget."""
    n = arcs.n
    if not arcs.feasible:
        return None
    if n == 1:
        return [0]
    out, und_mask = arcs.out, arcs.und_mask
    succ_forced, pred_forced, req_nb = arcs.succ_forced, arcs.pred_forced, arcs.req_nb
    # start on a constrained vertex when there is one
    start = 0
    for x in range(n):
        if succ_forced[x] is not None or req_nb[x]:
            start = x
            break
    if n == 2:
        other = 1 - start
        ok = other in out[start] and start in out[other]
        return [start, other] if ok else None
    rng = random.Random(budget.rng_seed)
    tiebreak = [rng.random() for _ in range(n)]
    full = (1 << n) - 1
    start_bit = 1 << start
    path = [start]
    nodes = 0

    def connected(avail: int, src: int) -> bool:
        reach = 1 << src
        frontier = reach
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= und_mask[low.bit_length() - 1]
                f ^= low
            nxt &= avail & ~reach
            reach |= nxt
            frontier = nxt
        return reach & avail == avail

    def can_close(x: int) -> bool:
        if start not in out[x]:
            return False
        if succ_forced[x] not in (None, start) or pred_forced[start] not in (None, x):
            return False
        first = path[1]
        return all(r in (first, x) for r in req_nb[start])

    def expand(x: int, prev: Optional[int], unvisited: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget.node_limit or (nodes & 1023 == 0 and time.monotonic() > deadline):
            raise SearchUndecided("exact search budget exhausted")
        if unvisited == 0:
            return can_close(x)
        # which successors are allowed by the constraints at x
        forced = succ_forced[x]
        if x == start and len(req_nb[x]) == 2 and forced is None:
            # one required neighbour must be the successor, the other the predecessor
            cands0 = [r for r in req_nb[x] if (unvisited >> r) & 1 and r in out[x]]
        else:
            cands0 = None
        if x != start:
            rem = [r for r in req_nb[x] if r != prev]
            if len(rem) > 1:
                return []
            if rem:
                r = rem[0]
                if r == start:
                    return []  # would need to be last, but vertices remain
                if forced is not None and forced != r:
                    return []
                forced = r
        if forced is not None:
            if not (unvisited >> forced) & 1:
                return []
            cands = [forced] if forced in out[x] else []
        elif cands0 is not None:
            cands = cands0
        else:
            cands = [y for y in out[x] if (unvisited >> y) & 1]
        avail = unvisited | start_bit
        # degree pruning: every unvisited vertex keeps two usable neighbours
        must = None
        for y in arcs.und[x]:
            if not (unvisited >> y) & 1:
                continue
            deg = bin(und_mask[y] & (avail | (1 << x))).count("1")
            if deg < 2:
                return []
            if deg == 2 and x != start:
                if must is not None and must != y:
                    return []
                must = y
        if prev is not None:
            for y in arcs.und[prev]:
                if (unvisited >> y) & 1 and bin(und_mask[y] & (avail | (1 << x))).count("1") < 2:
                    return []
        if must is not None:
            cands = [y for y in cands if y == must]
        if not connected(avail | (1 << x), x):
            return []
        good = []
        for y in cands:
            pf = pred_forced[y]
            if pf is not None and pf != x:
                continue
            # y's undirected requirements other than x must still be open
            if any(r != x and not ((unvisited >> r) & 1) and r != start for r in req_nb[y]):
                continue
            good.append(y)
        if len(good) > 1:
            good.sort(key=lambda y: (bin(und_mask[y] & unvisited).count("1"), tiebreak[y]), reverse=True)
        return good

    # explicit stack: each frame is (vertex, remaining candidates, unvisited)
    unvisited = full & ~start_bit
    first = expand(start, None, unvisited)
    if first is True:
        return list(path)
    stack = [(start, first, unvisited)]
    while stack:
        x, cands, unvisited = stack[-1]
        if not cands:
            stack.pop()
            path.pop() if len(path) > 1 else None
            continue
        y = cands.pop()
        path.append(y)
        rest = unvisited & ~(1 << y)
        nxt = expand(y, x, rest)
        if nxt is True:
            return list(path)
        if nxt is False or not nxt:
            path.pop()
            continue
        stack.append((y, nxt, rest))
    return None


# --------------------------------------------------------------------------
# propagation search (undirected problems)


class _Fail(Exception):
    pass


def _propagation_search(
    arcs: _Arcs,
    budget: SearchBudget,
    deadline: float,
    node_limit: int,
    seed: int,
) -> Optional[list[int]]:
    """Exact search for undirected problems by edge selection.

    Every vertex needs exactly two selected edges.  Propagation: a vertex
    with two candidate edges left selects both; a vertex with two selected
    edges loses its other candidates; selected edges form paths, and an
    edge joining the two ends of a path is removed unless it would close a
    hamiltonian cycle.  Branching picks an undecided path end with the
    fewest options.  Changes are recorded on a trail and undone on
    backtrack.
    """
    n = arcs.n
    nbr = [set(v for v in arcs.out[u] if u in arcs.out[v]) for u in range(n)]
    sel: list[set[int]] = [set() for _ in range(n)]
    end = list(range(n))  # other end of the path through an end vertex
    plen = [1] * n
    trail: list[tuple] = []
    rng = random.Random(seed)
    tiebreak = [rng.random() for _ in range(n)]
    done = [False]
    stamp = [0] * n
    clock = [0]

    def delete(u: int, w: int, queue: list[int]) -> None:
        if w not in nbr[u]:
            return
        if w in sel[u]:
            raise _Fail
        nbr[u].discard(w)
        nbr[w].discard(u)
        trail.append(("d", u, w))
        queue.append(u)
        queue.append(w)

    def select(u: int, w: int, queue: list[int]) -> None:
        if w in sel[u]:
            return
        if w not in nbr[u] or len(sel[u]) == 2 or len(sel[w]) == 2:
            raise _Fail
        a, b = end[u], end[w]
        if a == w:
            # closing a path into a cycle
            if plen[u] != n:
                raise _Fail
            sel[u].add(w)
            sel[w].add(u)
            trail.append(("s", u, w))
            done[0] = True
            return
        total = plen[u] + plen[w]
        clock[0] += 1
        stamp[u] = stamp[w] = clock[0]
        sel[u].add(w)
        sel[w].add(u)
        trail.append(("s", u, w))
        trail.append(("e", a, end[a], plen[a]))
        trail.append(("e", b, end[b], plen[b]))
        end[a], end[b] = b, a
        plen[a] = plen[b] = total
        queue.extend((u, w, a, b))
        if total < n:
            if total > 2:
                delete(a, b, queue)
        elif b in nbr[a]:
            select(a, b, queue)
        else:
            raise _Fail

    def propagate(queue: list[int]) -> None:
        while queue:
            v = queue.pop()
            cand = nbr[v]
            if len(cand) < 2:
                raise _Fail
            chosen = sel[v]
            if len(chosen) == 2:
                if len(cand) > 2:
                    for w in [w for w in cand if w not in chosen]:
                        delete(v, w, queue)
            elif len(cand) == 2:
                for w in list(cand):
                    select(v, w, queue)

    def undo(mark: int) -> None:
        while len(trail) > mark:
            rec = trail.pop()
            if rec[0] == "d":
                _, u, w = rec
                nbr[u].add(w)
                nbr[w].add(u)
            elif rec[0] == "s":
                _, u, w = rec
                sel[u].discard(w)
                sel[w].discard(u)
                done[0] = False
            else:
                _, v, e, l = rec
                end[v], plen[v] = e, l

    def pick() -> Optional[int]:
        best, best_key = None, None
        for v in range(n):
            k = len(sel[v])
            if k == 2:
                continue
            key = (len(nbr[v]) - k, -k, -stamp[v], tiebreak[v])
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def options(v: int) -> list[int]:
        opts = [w for w in nbr[v] if w not in sel[v]]
        opts.sort(key=lambda w: (len(nbr[w]) - len(sel[w]), tiebreak[w]), reverse=True)
        return opts

    def connected() -> bool:
        seen = [False] * n
        seen[0] = True
        todo, count = [0], 1
        while todo:
            x = todo.pop()
            for y in nbr[x]:
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    todo.append(y)
        return count == n

    def extract() -> list[int]:
        cyc, prev, x = [0], None, 0
        while len(cyc) < n:
            a, b = tuple(sel[x])
            nxt = a if a != prev else b
            prev, x = x, nxt
            cyc.append(x)
        return cyc

    try:
        queue: list[int] = []
        for e in {frozenset((u, v)) for u in range(n) for v in arcs.req_nb[u]}:
            u, v = tuple(e)
            select(u, v, queue)
        propagate(list(range(n)) + queue)
    except _Fail:
        return None
    if done[0] or all(len(s) == 2 for s in sel):
        return extract()
    nodes = 0
    v = pick()
    stack = [(len(trail), v, options(v))]
    while stack:
        mark, v, opts = stack[-1]
        if not opts:
            stack.pop()
            continue
        w = opts.pop()
        undo(mark)
        nodes += 1
        if nodes > node_limit or (nodes & 255 == 0 and time.monotonic() > deadline):
            raise SearchUndecided("propagation search budget exhausted")
        try:
            q: list[int] = []
            select(v, w, q)
            propagate(q + [v, w])
            if not connected():
                raise _Fail
        except _Fail:
            undo(mark)
            continue
        if done[0] or all(len(s) == 2 for s in sel):
            return extract()
        u = pick()
        if u is None:
            undo(mark)
            continue
        stack.append((len(trail), u, options(u)))
    return None


# --------------------------------------------------------------------------
# rotation heuristic


def _rotation_search(arcs: _Arcs, budget: SearchBudget, deadline: float) -> Optional[list[int]]:
    """Pósa rotation/extension on the undirected part of the arc structure.

    Required undirected edges are protected from being broken by rotations
    and are followed greedily during extension.  Directed constraints are
    left to validation (the result is tried in both orientations).
    """
    n = arcs.n
    if n <= 2 or not arcs.feasible:
        return None
    adj = [sorted(v for v in arcs.out[u] if u in arcs.out[v]) for u in range(n)]
    protected = set()
    for u in range(n):
        for v in arcs.req_nb[u]:
            protected.add((u, v))
        if arcs.succ_forced[u] is not None:
            v = arcs.succ_forced[u]
            protected.add((u, v))
            protected.add((v, u))
    req_partner = [
        [v for v in set(arcs.req_nb[u]) | {arcs.succ_forced[u], arcs.pred_forced[u]} if v is not None]
        for u in range(n)
    ]
    steps_per_restart = budget.heuristic_steps or 20 * n + 200
    restarts = min(3, budget.restart_limit)
    rng = random.Random(budget.rng_seed)
    for restart in range(restarts):
        if time.monotonic() > deadline:
            break
        start = rng.randrange(n)
        path = [start]
        pos = [-1] * n
        pos[start] = 0
        for step in range(steps_per_restart):
            end = path[-1]
            L = len(path)
            if L == n:
                if path[0] in adj[end]:
                    return path
            else:
                nxt = [v for v in req_partner[end] if pos[v] < 0 and v in adj[end]]
                if not nxt:
                    nxt = [v for v in adj[end] if pos[v] < 0]
                if nxt:
                    # prefer neighbours with few free neighbours of their own
                    best = min(sum(1 for w in adj[v] if pos[w] < 0) for v in nxt)
                    pick = [v for v in nxt if sum(1 for w in adj[v] if pos[w] < 0) == best]
                    v = pick[rng.randrange(len(pick))]
                    pos[v] = L
                    path.append(v)
                    continue
            # rotate: choose a pivot w adjacent to end, break (w, next(w))
            options = []
            for w in adj[end]:
                i = pos[w]
                if i < 0 or i >= L - 2:
                    continue
                if (path[i], path[i + 1]) in protected:
                    continue
                new_end = path[i + 1]
                if L == n:
                    score = 0 if path[0] in adj[new_end] else 1
                else:
                    score = 0 if any(pos[x] < 0 for x in adj[new_end]) else 1
                options.append((score, i))
            if not options or rng.random() < 0.05:
                # flip the whole path to work from the other end
                path.reverse()
                for j, v in enumerate(path):
                    pos[v] = j
                continue
            best_score = min(o[0] for o in options)
            pool = [i for s, i in options if s == best_score] if rng.random() < 0.9 else [i for _, i in options]
            i = pool[rng.randrange(len(pool))]
            seg = path[i + 1 :]
            seg.reverse()
            path[i + 1 :] = seg
            for j in range(i + 1, L):
                pos[path[j]] = j
    return None


# --------------------------------------------------------------------------
# public API


def _orient_and_validate(graph, cycle: list[int], constraints, origin: str) -> Optional[CycleCert]:
    for vs in (cycle, [cycle[0]] + cycle[:0:-1]):
        cert = CycleCert("cycle", tuple(vs), origin)
        if validate_cert(graph, cert, constraints):
            return cert
    return None


def find_ham_cycle(
    graph: Graph,
    constraints: Optional[EdgeConstraint] = None,
    budget: Optional[SearchBudget] = None,
    exact: Optional[bool] = None,
) -> Optional[CycleCert]:
    """A validated hamiltonian cycle, ``None`` when none exists.

    The heuristic runs first; exact search follows.  For graphs above the
    exact threshold the exact phase still runs but only within the node
    budget.  ``exact=True`` skips the heuristic.  Raises
    :class:`SearchUndecided` when neither engine decides.
    """
    constraints = constraints or NO_CONSTRAINTS
    budget = budget or DEFAULT_BUDGET
    deadline = time.monotonic() + budget.time_limit_ms / 1000
    arcs = _Arcs(graph, constraints)
    if not arcs.feasible:
        return None
    if graph.vertex_count > 2 and not exact:
        cyc = _rotation_search(arcs, budget, deadline)
        if cyc is not None:
            cert = _orient_and_validate(graph, cyc, constraints, "heuristic")
            if cert is not None:
                return cert
    cyc = _exact_phase(arcs, budget, deadline)
    if cyc is None:
        return None
    cert = CycleCert("cycle", tuple(cyc), "exact")
    verdict = validate_cert(graph, cert, constraints)
    if not verdict:
        raise AssertionError(f"exact search produced an invalid cycle: {verdict.reason}")
    return cert


def _exact_phase(arcs: _Arcs, budget: SearchBudget, deadline: float) -> Optional[list[int]]:
    n = arcs.n
    undirected = all(f is None for f in arcs.succ_forced) and all(
        u in arcs.out[v] for u in range(n) for v in arcs.out[u]
    )
    if n <= 2 or not undirected:
        return _exact_search(arcs, budget, deadline)
    if n <= budget.exact_threshold:
        return _propagation_search(arcs, budget, deadline, budget.node_limit, budget.rng_seed)
    # large graphs: randomized restarts with growing node limits; a run that
    # exhausts its tree without hitting the limit is still a proof
    spent = 0
    for i in range(budget.restart_limit):
        limit = min(1000 << i, budget.node_limit - spent)
        if limit <= 0:
            break
        try:
            return _propagation_search(arcs, budget, deadline, limit, budget.rng_seed + i)
        except SearchUndecided:
            spent += limit
            if time.monotonic() > deadline:
                break
    raise SearchUndecided(f"no decision on {n} vertices within budget")


def canonical_cycle(vertices: Sequence[int]) -> tuple[int, ...]:
    """Least rotation of the lexicographically smaller orientation."""
    vs = list(vertices)
    best = None
    for seq in (vs, vs[::-1]):
        i = seq.index(min(seq))
        rot = tuple(seq[i:] + seq[:i])
        if best is None or rot < best:
            best = rot
    return best


class HamCycleList(list):
    """A list of cycles that remembers whether enumeration stopped at its limit."""

    truncated: bool = False


def enumerate_ham_cycles(
    graph: Graph,
    constraints: Optional[EdgeConstraint] = None,
    limit: int = 10_000,
    undirected: bool = True,
) -> HamCycleList:
    """All hamiltonian cycles satisfying the constraints, by plain DFS.

    Cycles are distinct up to rotation and, when ``undirected``, reflection.
    This deliberately shares no code with :func:`find_ham_cycle` so it can
    serve as an oracle.
    """
    constraints = constraints or NO_CONSTRAINTS
    n = graph.vertex_count
    extra = constraints.extra_arcs()
    out = [set(nb) for nb in graph.adjacency]
    for u, v in extra:
        out[u].add(v)
    directed, undirected_req = constraints.required_arcs()
    ties = [set() for _ in range(n)]
    for u, v in directed:
        ties[u].add(v)
        ties[v].add(u)
    for e in undirected_req:
        u, v = tuple(e)
        ties[u].add(v)
        ties[v].add(u)
    result = HamCycleList()
    seen: set[tuple[int, ...]] = set()
    if n == 0 or any(len(t) > 2 for t in ties):
        return result
    if n <= 2:
        cert = CycleCert("cycle", tuple(range(n)), "enumeration")
        if validate_cert(graph, cert, constraints):
            result.append(cert)
        return result
    succ: list[Optional[int]] = [None] * n
    pred_: list[Optional[int]] = [None] * n
    for u, v in directed:
        succ[u], pred_[v] = v, u
    path = [0]
    on_path = [False] * n
    on_path[0] = True

    def rec(x: int) -> bool:
        if len(path) == n:
            if 0 in out[x]:
                cert = CycleCert("cycle", tuple(path), "enumeration")
                if validate_cert(graph, cert, constraints):
                    key = canonical_cycle(path) if undirected else tuple(path)
                    if key not in seen:
                        seen.add(key)
                        result.append(cert)
                        if len(result) >= limit:
                            result.truncated = True
                            return True
            return False
        pred = path[-2] if len(path) >= 2 else None
        for y in sorted(out[x]):
            if on_path[y]:
                continue
            # once y follows x, x's cycle neighbours are fixed (pred and y);
            # vertex 0 still has its closing neighbour open
            if x != 0 and not ties[x] <= {pred, y}:
                continue
            if x == 0 and len(ties[x] - {y}) > 1:
                continue
            # a tie from y to a closed path vertex can never be honoured
            if any(on_path[t] and t not in (0, x) for t in ties[y]):
                continue
            # required arcs fix the direction of travel
            if succ[x] not in (None, y) or pred_[y] not in (None, x):
                continue
            if len(path) == n - 1 and (succ[y] not in (None, 0) or pred_[0] not in (None, y)):
                continue
            on_path[y] = True
            path.append(y)
            if rec(y):
                return True
            path.pop()
            on_path[y] = False
        return False

    rec(0)
    return result


def _required_edge_cycle(graph, u, v, budget) -> Optional[CycleCert]:
    c = EdgeConstraint.make(required=[(u, v), (v, u)])
    return find_ham_cycle(graph, c, budget)


def sample_ham_cycles(Gbar, Sbar: Sequence[int], count: int = 20, budget: Optional[SearchBudget] = None) -> list[CycleCert]:
    """Up to ``count`` distinct hamiltonian cycles in ``Cay(Ḡ; S̄)``.

    Diversity comes from requiring each edge of the graph in turn (tree
    edges of a breadth-first spanning tree first), with the seed varied per
    request.  Cycles start at the identity.
    """
    budget = budget or DEFAULT_BUDGET
    graph = cayley_graph(Gbar, Sbar)
    if not analyze(graph).connected:
        raise ValueError("Cayley graph is not connected")
    n = graph.vertex_count
    if n <= 2:
        return [CycleCert("cycle", tuple(range(n)), "exact")] if n else []
    order = _spanning_edge_order(graph)
    found: dict[tuple[int, ...], CycleCert] = {}
    for idx, (u, v) in enumerate(order):
        if len(found) >= count:
            break
        b = replace(budget, rng_seed=budget.rng_seed + idx)
        try:
            cert = _required_edge_cycle(graph, u, v, b)
        except SearchUndecided:
            continue
        if cert is None:
            continue
        key = canonical_cycle(cert.vertices)
        if key not in found:
            found[key] = _start_at_identity(cert)
    return list(found.values())


def _start_at_identity(cert: CycleCert) -> CycleCert:
    vs = list(cert.vertices)
    i = vs.index(0)
    return CycleCert(cert.kind, tuple(vs[i:] + vs[:i]), cert.origin)


def _spanning_edge_order(graph: Graph) -> list[tuple[int, int]]:
    seen = {0}
    tree, queue = [], [0]
    for u in queue:
        for v in graph.adjacency[u]:
            if v not in seen:
                seen.add(v)
                tree.append((u, v))
                queue.append(v)
    rest = [e for e in graph.edges() if e not in set(tree) and (e[1], e[0]) not in set(tree)]
    return tree + rest


def sample_ham_cycles_redundant(
    Gbar,
    S0bar: Sequence[int],
    abar: int,
    count: int = 20,
    budget: Optional[SearchBudget] = None,
) -> list[CycleCert]:
    """Cycles in ``Cay(Ḡ; S̄0 ∪ {ā})`` that use at least one ``ā``-edge.

    Each ``ā``-edge is required in turn, and where possible a second one as
    well, so the number of ``ā``-steps varies across the sample.
    """
    budget = budget or DEFAULT_BUDGET
    S0 = list(S0bar)
    if abar == 0 or abar in S0 or Gbar.inv(abar) in S0:
        raise ValueError("ā must be a new non-identity element")
    graph = cayley_graph(Gbar, S0 + [abar])
    n = graph.vertex_count
    a_edges = sorted({tuple(sorted((g, Gbar.mul(g, abar)))) for g in range(n)})
    found: dict[tuple[int, ...], CycleCert] = {}
    requests: list[list[tuple[int, int]]] = [[e] for e in a_edges]
    for i, e in enumerate(a_edges):
        for f in a_edges[i + 1 :]:
            if not set(e) & set(f):
                requests.append([e, f])
    for idx, req in enumerate(requests):
        if len(found) >= count:
            break
        pairs = [p for u, v in req for p in ((u, v), (v, u))]
        b = replace(budget, rng_seed=budget.rng_seed + idx)
        try:
            cert = find_ham_cycle(graph, EdgeConstraint.make(required=pairs), b)
        except SearchUndecided:
            continue
        if cert is None:
            continue
        key = canonical_cycle(cert.vertices)
        if key not in found:
            found[key] = _start_at_identity(cert)
    return list(found.values())


def ham_path(graph: Graph, u: int, v: int, budget: Optional[SearchBudget] = None) -> Optional[CycleCert]:
    """Hamiltonian path from ``u`` to ``v``: add ``uv`` as a required extra
    edge, find a cycle, and cut that edge."""
    if u == v:
        raise ValueError("endpoints must differ")
    c = EdgeConstraint.make(additional=[(u, v), (v, u)], required=[(u, v), (v, u)])
    cert = find_ham_cycle(graph, c, budget)
    if cert is None:
        return None
    vs = list(cert.vertices)
    i = vs.index(u)
    vs = vs[i:] + vs[:i]
    # now vs[0] = u; v sits right after u or at the very end
    if vs[1] == v:
        vs = [u] + vs[:0:-1]
    if vs[-1] != v:
        raise AssertionError("required edge not present in cycle")
    path = CycleCert("path", tuple(vs), cert.origin)
    verdict = validate_cert(graph, path)
    if not verdict:
        raise AssertionError(f"cut path invalid: {verdict.reason}")
    return path


@dataclass
class ConnLaceResult:
    kind: str  # hamiltonian_connected | hamiltonian_laceable | neither
    bipartite: bool
    witnesses: dict[int, CycleCert]
    missing: list[int]
    undecided: list[int]

    @property
    def decided(self) -> bool:
        return not self.undecided


def classify_conn_laceable(
    G,
    S: Sequence[int],
    budget: Optional[SearchBudget] = None,
    graph: Optional[Graph] = None,
    targets: Optional[Sequence[int]] = None,
) -> ConnLaceResult:
    """Hamiltonian connected / laceable test from the identity.

    Vertex-transitivity lets every path start at the identity, and a path
    from ``e`` to ``a`` yields one from ``e`` to ``a⁻¹`` (translate by
    ``a⁻¹`` and reverse), so only one of each inverse pair is searched.
    ``targets`` restricts the endpoints (the kind then describes only them).
    """
    graph = graph or cayley_graph(G, S)
    info = analyze(graph)
    if not info.connected:
        raise ValueError("Cayley graph is not connected")
    if info.valence < 3:
        raise ValueError("valence must be at least 3")
    side = info.bipartition
    if targets is None:
        targets = [a for a in range(1, G.order) if side is None or side[a] == 1]
    targets = sorted(set(targets) - {0})
    witnesses: dict[int, CycleCert] = {}
    missing, undecided = [], []
    for a in targets:
        ai = G.inv(a)
        if ai < a and ai in witnesses:
            witnesses[a] = _translate_reverse(G, graph, witnesses[ai], ai)
            continue
        if ai < a and ai in missing:
            missing.append(a)
            continue
        try:
            path = ham_path(graph, 0, a, budget)
        except SearchUndecided:
            undecided.append(a)
            continue
        if path is None:
            missing.append(a)
        else:
            witnesses[a] = path
    if undecided:
        kind = "undecided"
    elif missing:
        kind = "neither"
    else:
        kind = "hamiltonian_laceable" if side is not None else "hamiltonian_connected"
    return ConnLaceResult(kind, side is not None, witnesses, missing, undecided)


def _translate_reverse(G, graph, path: CycleCert, a: int) -> CycleCert:
    """From a path ``e → a`` build the path ``e → a⁻¹``."""
    ai = G.inv(a)
    moved = [G.mul(ai, x) for x in path.vertices][::-1]
    cert = CycleCert("path", tuple(moved), path.origin)
    if not validate_cert(graph, cert):
        raise AssertionError("translated path invalid")
    return cert
