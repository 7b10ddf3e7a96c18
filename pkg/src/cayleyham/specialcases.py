"""Explicit hamiltonian cycles for the exceptional irredundant shapes.

Each constructive case turns a quotient pattern into a closed walk in the
concrete group ``Z_p ⋊ Ḡ``; the walk is validated before it is returned.
Two further shapes (a central involution, and an element whose square
generates a normal subgroup of prime order) are not constructed: they are
excluded by the standing reductions and only receive spot checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .catalog import alternating4
from .certs import CycleCert
from .graphs import analyze, cayley_graph
from .groups import (
    Character,
    FiniteGroup,
    SemidirectGroup,
    are_isomorphic,
    center,
    commutator_subgroup,
    is_normal,
    semidirect_zn,
    subgroup_generated,
)
from .hamilton import SearchBudget, SearchUndecided, find_ham_cycle
from .certs import EdgeConstraint
from .voltage import VoltageError, genseq_from_cycle, twist_for, walk_cycle_cert

CASE_IDS = (
    "C1_23",
    "C2_A4",
    "C3_V4semidirect",
    "C4_central_discharge",
    "C5_a2normal_discharge",
    "C6_dihedral",
    "C7_4q",
)
CONSTRUCTIVE = frozenset({"C1_23", "C2_A4", "C3_V4semidirect", "C6_dihedral", "C7_4q"})
DISCHARGE_REDUCTION = {
    "C4_central_discharge": "central_normal_generator",
    "C5_a2normal_discharge": "double_edge",
}


class CaseError(ValueError):
    pass


class CaseConstructionError(CaseError):
    """The case pattern did not produce a valid cycle for this instance."""


@dataclass(frozen=True)
class CaseMatch:
    case_id: str
    quotient: FiniteGroup = field(compare=False, repr=False)
    gens: tuple[int, ...]
    character: Character = field(compare=False, repr=False)
    bindings: dict = field(default_factory=dict, compare=False)

    @property
    def constructive(self) -> bool:
        return self.case_id in CONSTRUCTIVE


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def _is_dihedral_pair(G: FiniteGroup, a: int, b: int) -> bool:
    k = G.order
    orders = G.element_orders
    return (
        k > 4
        and orders[a] == 2
        and orders[b] == k // 2
        and 2 * orders[b] == k
        and G.mul(G.mul(a, b), a) == G.inv(b)
    )


def _normal_klein_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    invols = [x for x in G.elements() if G.element_orders[x] == 2]
    out = []
    for x, y in itertools.combinations(invols, 2):
        if G.mul(x, y) == G.mul(y, x):
            V = frozenset({0, x, y, G.mul(x, y)})
            if V not in out and is_normal(G, V):
                out.append(V)
    return out


def _c1(G, S, ch):
    for a, b in (S, S[::-1]):
        if G.element_orders[a] == 2 and G.element_orders[b] == 3 and ch.is_trivial_at(b):
            return {"a": a, "b": b}
    return None


def _c2(G, S, ch):
    if G.order != 12 or not ch.is_trivial:
        return None
    if any(G.element_orders[s] != 3 for s in S) or not are_isomorphic(G, alternating4()):
        return None
    return {"a": S[0], "b": S[1]}


def _c3(G, S, ch):
    if not ch.is_trivial or G.order % 4 or G.is_abelian:
        return None
    m = G.order // 4
    for a, b in (S, S[::-1]):
        if G.element_orders[a] != 2 or G.element_orders[b] != m:
            continue
        for V in _normal_klein_subgroups(G):
            if a in V and not (subgroup_generated(G, [b]) & V) - {0}:
                return {"a": a, "b": b, "m": m}
    return None


def _c4(G, S, ch):
    Z = center(G)
    for a in S:
        if a in Z and G.element_orders[a] == 2 and ch.is_trivial_at(a):
            return {"a": a}
    return None


def _c5(G, S, ch):
    for a in S:
        a2 = G.mul(a, a)
        if a2 == 0 or not _is_prime(G.element_orders[a2]):
            continue
        if ch.is_minus_one_at(a) and is_normal(G, subgroup_generated(G, [a2])):
            return {"a": a}
    return None


def _c6(G, S, ch):
    for a, b in (S, S[::-1]):
        if _is_dihedral_pair(G, a, b) and ch.is_minus_one_at(a) and ch.is_trivial_at(b):
            return {"a": a, "b": b}
    return None


def _c7(G, S, ch):
    if not ch.is_trivial or G.order % 4 or not _is_prime(G.order // 4):
        return None
    q = G.order // 4
    C = commutator_subgroup(G)
    if len(C) != q:
        return None
    for a, b in (S, S[::-1]):
        if G.element_orders[a] == 4 and G.element_orders[b] == 2:
            if any(G.mul(b, c) != G.mul(c, b) for c in C):
                return {"a": a, "b": b, "q": q}
    return None


_MATCHERS = {
    "C1_23": _c1,
    "C2_A4": _c2,
    "C3_V4semidirect": _c3,
    "C4_central_discharge": _c4,
    "C5_a2normal_discharge": _c5,
    "C6_dihedral": _c6,
    "C7_4q": _c7,
}
_TWO_GENERATOR = {"C1_23", "C2_A4", "C3_V4semidirect", "C6_dihedral", "C7_4q"}


def all_special_cases(Gbar: FiniteGroup, Sbar: Sequence[int], character: Character) -> list[CaseMatch]:
    S = tuple(Sbar)
    out = []
    for cid in CASE_IDS:
        if cid in _TWO_GENERATOR and len(S) != 2:
            continue
        b = _MATCHERS[cid](Gbar, S, character)
        if b is not None:
            out.append(CaseMatch(cid, Gbar, S, character, b))
    return out


def match_special_case(Gbar: FiniteGroup, Sbar: Sequence[int], character: Character) -> Optional[CaseMatch]:
    """First matching case in numeric order, or ``None``."""
    found = all_special_cases(Gbar, Sbar, character)
    return found[0] if found else None


# --------------------------------------------------------------------------
# constructions


@dataclass(frozen=True)
class CaseCert:
    """A validated cycle together with the concrete group and lift it lives in."""

    case_id: str
    p: int
    twist: tuple[int, ...]
    generators: tuple[int, ...]  # elements of Z_p ⋊ Ḡ, aligned with the quotient gens
    z_parts: tuple[int, ...]
    cert: CycleCert


def _power_steps(G, x: int, e: int) -> list[int]:
    return [x] * e if e >= 0 else [G.inv(x)] * (-e)


def _lift(G: SemidirectGroup, match: CaseMatch, z: dict[int, int]) -> tuple[list[int], tuple[int, ...]]:
    zs = tuple(z.get(s, 0) % G.ring_modulus for s in match.gens)
    return [G.index(zz, s) for zz, s in zip(zs, match.gens)], zs


def construct_case_cycle(match: CaseMatch, p: int, other_z: int = 0) -> CaseCert:
    """Concrete validated cycle for a constructive case at the prime ``p``.

    ``other_z`` is the z-part of the second generator where the case leaves
    it free (only the A4 pattern, whose formula ignores it).
    """
    if not match.constructive:
        raise CaseError(f"{match.case_id} has no construction")
    Gbar, ch, b = match.quotient, match.character, match.bindings
    k = Gbar.order
    if not _is_prime(p) or k % p == 0 or (p - 1) % ch.order_m:
        raise CaseError(f"prime {p} is not admissible")
    twist = twist_for(ch, p)
    G = semidirect_zn(p, Gbar, twist)
    cid = match.case_id

    if cid == "C1_23":
        gens, zs = _lift(G, match, {b["b"]: 1})
        a, bb = gens[match.gens.index(b["a"])], gens[match.gens.index(b["b"])]
        L = 3 * p - 1
        for signs in itertools.product((1, -1), repeat=k // 3):
            steps = [s for e in signs for s in [a] + _power_steps(G, bb, e * L)]
            try:
                cert = walk_cycle_cert(G, gens, steps, "C1_23")
            except VoltageError:
                continue
            return CaseCert(cid, p, twist, tuple(gens), zs, cert)
        raise CaseConstructionError(f"C1_23: no sign pattern of the alternating form closes at p={p}")

    if cid == "C2_A4":
        gens, zs = _lift(G, match, {b["a"]: 1, b["b"]: other_z})
        a, bb = gens[match.gens.index(b["a"])], gens[match.gens.index(b["b"])]
        L = G.element_order(a) - 1
        block = _power_steps(G, a, L) + [G.inv(bb)] + _power_steps(G, a, -L) + [bb]
        steps = block * 2
    elif cid == "C3_V4semidirect":
        gens, zs = _lift(G, match, {b["b"]: 1})
        a, bb = gens[match.gens.index(b["a"])], gens[match.gens.index(b["b"])]
        L = b["m"] * p - 1
        steps = (_power_steps(G, bb, L) + [a] + _power_steps(G, bb, -L) + [a]) * 2
    elif cid == "C6_dihedral":
        gens, zs = _lift(G, match, {b["b"]: 1})
        a, bb = gens[match.gens.index(b["a"])], gens[match.gens.index(b["b"])]
        steps = ([a] + _power_steps(G, bb, k * p // 2 - 1)) * 2
    else:  # C7_4q
        gens, zs = _lift(G, match, {b["a"]: 1})
        a, bb = gens[match.gens.index(b["a"])], gens[match.gens.index(b["b"])]
        steps = _c7_walk(G, a, bb, p)
    try:
        cert = walk_cycle_cert(G, gens, steps, cid)
    except VoltageError as exc:
        raise CaseConstructionError(f"{cid} construction failed at p={p}: {exc}") from exc
    return CaseCert(cid, p, twist, tuple(gens), zs, cert)


def _c7_walk(G: SemidirectGroup, a: int, b: int, p: int) -> list[int]:
    """``(b, a^-(i-1), b, a^(4p-i-1))`` with ``b ∈ a^i·[G,G]``."""
    N = commutator_subgroup(G.underlying)
    powers, x = [], 0
    for _ in range(4 * p):
        powers.append(x)
        x = G.mul(x, a)
    i = next(
        (i for i in range(2, 4 * p, 2) if G.mul(G.inv(powers[i]), b) in N),
        None,
    )
    if i is None:
        raise CaseConstructionError("b is not in an even coset of the commutator subgroup")
    steps = [b] + _power_steps(G, a, -(i - 1)) + [b] + _power_steps(G, a, 4 * p - i - 1)
    # the voltage over the commutator subgroup must be nontrivial
    v = 0
    for s in steps:
        v = G.mul(v, s)
    if v == 0 or v not in N:
        raise CaseConstructionError("quotient walk does not close with a nontrivial voltage")
    return steps


# --------------------------------------------------------------------------
# discharged cases


@dataclass
class DischargeRecord:
    case_id: str
    reduction: str
    spot_checks: list = field(default_factory=list)  # (p, z-vector, cert or None)

    @property
    def ok(self) -> bool:
        return all(c is not None for _, _, c in self.spot_checks)


def discharge_record(
    match: CaseMatch,
    certify: Optional[Callable[[int], list]] = None,
    primes: Sequence[int] = (),
) -> DischargeRecord:
    """Record the reduction that rules out ``match``, with spot checks.

    ``certify(p)`` must return ``(z, cert_or_None)`` pairs covering every
    normalized lift at the prime ``p``.
    """
    if match.case_id not in DISCHARGE_REDUCTION:
        raise CaseError(f"{match.case_id} is not a discharge case")
    rec = DischargeRecord(match.case_id, DISCHARGE_REDUCTION[match.case_id])
    if certify is not None:
        for p in primes:
            for z, cert in certify(p):
                rec.spot_checks.append((p, tuple(z), cert))
    return rec


# --------------------------------------------------------------------------
# two lifts over one quotient edge


def double_edge_lift(
    G: SemidirectGroup,
    S: Sequence[int],
    s: int,
    t: int,
    budget: Optional[SearchBudget] = None,
) -> CycleCert:
    """Hamiltonian cycle in ``Cay(G; S)`` when ``s ≠ t`` share a quotient image.

    A quotient hamiltonian cycle through an ``s̄``-edge lifts in two ways that
    differ only at that edge; their voltages differ by a nonzero multiple of
    ``z(s) - z(t)``, so one of them generates ``Z_p``.
    """
    Gbar = G.quotient
    if s == t or G.project(s) != G.project(t):
        raise ValueError("s and t must be distinct lifts of one quotient element")
    conn = sorted(set(S) | {G.inv(x) for x in S})
    sbar = G.project(s)
    Sbar = sorted({G.project(x) for x in S} - {0})
    qgraph = cayley_graph(Gbar, Sbar)
    if not analyze(qgraph).connected:
        raise ValueError("quotient Cayley graph is not connected")
    if Gbar.order <= 2:
        qverts = list(range(Gbar.order))
    else:
        req = EdgeConstraint.make(required=[(0, sbar), (sbar, 0)])
        try:
            qc = find_ham_cycle(qgraph, req, budget)
        except SearchUndecided as exc:
            raise VoltageError("no decision on a quotient cycle through the edge") from exc
        if qc is None:
            raise VoltageError("no quotient hamiltonian cycle through the edge")
        qverts = list(qc.vertices)
        i = qverts.index(0)
        qverts = qverts[i:] + qverts[:i]
        if qverts[1] != sbar:
            qverts = [0] + qverts[:0:-1]
    qsteps = [Gbar.mul(Gbar.inv(u), v) for u, v in zip(qverts, qverts[1:] + qverts[:1])]
    lift_of = {}
    for x in conn:
        lift_of.setdefault(G.project(x), x)
    base = [lift_of[q] for q in qsteps]
    for choice in (s, t):
        steps = [choice] + base[1:]
        v = 0
        for x in steps:
            v = G.mul(v, x)
        if v != 0:
            return walk_cycle_cert(G, S, steps, "double_edge")
    raise AssertionError("both lifts of the quotient cycle have zero voltage")
