"""Voltages of quotient cycles and the Factor Group Lemma.

Throughout, ``G = Z_n ⋊_τ Ḡ`` with ``(z1,g1)(z2,g2) = (z1 + τ(g1)z2, g1g2)``.
A walk in ``Cay(Ḡ; S̄)`` is a list of signed generator indices ``(j, ±1)``.
Lifting each ``s̄_j`` to ``s_j = (z_j, s̄_j)``, the product of the lifted
walk has ring part

    Σ_i τ(prefix_i) · z(step_i),

where an inverse step ``s_j⁻¹ = (-τ(s̄_j⁻¹) z_j, s̄_j⁻¹)`` contributes
``-τ(prefix · s̄_j⁻¹) z_j``.  With τ replaced by an abelian character ``ζ``
this is the universal voltage, an element of ``Z[ζ_m]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from sympy import factorint, primerange

from .catalog import largest_prime_factor
from .certs import CycleCert, validate_cert
from .cyclotomic import CycInt, cofactor_det, cyc_norm, reduce_mod_p, ring_bareiss_det, zeta_image
from .graphs import cayley_graph
from .groups import Character, FiniteGroup, SemidirectGroup, semidirect_zn

Step = tuple[int, int]  # (generator index, +1 or -1)


class VoltageError(ValueError):
    pass


@dataclass(frozen=True)
class LiftedGenSet:
    """A lift of ``S̄`` to ``Z_n ⋊ Ḡ``.

    Universal mode: ``character`` is set and the z-parts are ``CycInt``.
    Concrete mode: ``p`` and ``twist`` are set and the z-parts are integers mod p.
    """

    quotient: FiniteGroup
    gens: tuple[int, ...]
    z_parts: tuple
    character: Optional[Character] = None
    p: Optional[int] = None
    twist: Optional[tuple[int, ...]] = None

    @property
    def concrete(self) -> bool:
        return self.p is not None

    def group(self) -> SemidirectGroup:
        if not self.concrete:
            raise VoltageError("universal lifts have no concrete group")
        return semidirect_zn(self.p, self.quotient, self.twist)

    def elements(self) -> list[int]:
        G = self.group()
        return [G.index(z, g) for z, g in zip(self.z_parts, self.gens)]


@dataclass(frozen=True)
class VoltagePartition:
    a_list: tuple[int, ...]  # indices into S̄
    b0: Optional[int]
    b_list: tuple[int, ...]


def twist_for(character: Character, p: int) -> tuple[int, ...]:
    r = zeta_image(p, character.order_m)
    return tuple(pow(r, e, p) for e in character.exponent)


def concrete_lift(character: Character, p: int, Sbar: Sequence[int], z: Sequence[int]) -> LiftedGenSet:
    return LiftedGenSet(
        character.group, tuple(Sbar), tuple(int(x) % p for x in z), p=p, twist=twist_for(character, p)
    )


def universal_lift(character: Character, Sbar: Sequence[int], z: Sequence) -> LiftedGenSet:
    m = character.order_m
    zs = tuple(x if isinstance(x, CycInt) else CycInt.integer(m, int(x)) for x in z)
    return LiftedGenSet(character.group, tuple(Sbar), zs, character=character)


# --------------------------------------------------------------------------
# walks


def genseq_from_cycle(Gbar: FiniteGroup, Sbar: Sequence[int], vertices: Sequence[int]) -> list[Step]:
    """Signed generator sequence of a closed walk given by its vertices."""
    lookup: dict[int, Step] = {}
    for j, s in enumerate(Sbar):
        lookup.setdefault(Gbar.inv(s), (j, -1))
    for j, s in enumerate(Sbar):
        lookup[s] = (j, 1)
    vs = list(vertices)
    pairs = list(zip(vs, vs[1:])) + [(vs[-1], vs[0])]
    out = []
    for u, v in pairs:
        d = Gbar.mul(Gbar.inv(u), v)
        if d not in lookup:
            raise VoltageError(f"step {u}->{v} is not a generator step")
        out.append(lookup[d])
    return out


def walk_product(Gbar: FiniteGroup, Sbar: Sequence[int], genseq: Sequence[Step]) -> int:
    x = 0
    for j, sign in genseq:
        s = Sbar[j]
        x = Gbar.mul(x, s if sign > 0 else Gbar.inv(s))
    return x


def prefix_terms(Gbar: FiniteGroup, Sbar: Sequence[int], genseq: Sequence[Step]) -> list[list[tuple[int, int]]]:
    """Per generator, the ``(element, sign)`` pairs whose twist multiplies its z-part."""
    if walk_product(Gbar, Sbar, genseq) != 0:
        raise VoltageError("walk is not closed in the quotient")
    terms: list[list[tuple[int, int]]] = [[] for _ in Sbar]
    x = 0
    for j, sign in genseq:
        s = Sbar[j]
        if sign > 0:
            terms[j].append((x, 1))
            x = Gbar.mul(x, s)
        else:
            x = Gbar.mul(x, Gbar.inv(s))
            terms[j].append((x, -1))
    return terms


def voltage_row(character: Character, Sbar: Sequence[int], genseq: Sequence[Step]) -> list[CycInt]:
    """Universal voltage coefficient of each ``z_j``."""
    m = character.order_m
    row = []
    for terms in prefix_terms(character.group, Sbar, genseq):
        acc: dict[int, int] = {}
        for g, sign in terms:
            e = character.exponent[g] % m
            acc[e] = acc.get(e, 0) + sign
        row.append(CycInt.from_exponents(m, acc))
    return row


def concrete_row(Gbar: FiniteGroup, twist: Sequence[int], p: int, Sbar: Sequence[int], genseq: Sequence[Step]) -> list[int]:
    return [sum(sign * twist[g] for g, sign in terms) % p for terms in prefix_terms(Gbar, Sbar, genseq)]


def voltage(genseq: Sequence[Step], lifts: LiftedGenSet) -> Union[CycInt, int]:
    """Ring part of the product of the lifted walk."""
    if lifts.concrete:
        row = concrete_row(lifts.quotient, lifts.twist, lifts.p, lifts.gens, genseq)
        return sum(c * z for c, z in zip(row, lifts.z_parts)) % lifts.p
    row = voltage_row(lifts.character, lifts.gens, genseq)
    total = CycInt.integer(lifts.character.order_m, 0)
    for c, z in zip(row, lifts.z_parts):
        total = total + c * z
    return total


def walk_voltage_direct(G: SemidirectGroup, steps: Sequence[int]) -> int:
    """Ring part of a product of explicit group elements (no formula)."""
    x = 0
    for s in steps:
        x = G.mul(x, s)
    z, g = G.pair(x)
    if g != 0:
        raise VoltageError("walk is not closed in the quotient")
    return z


# --------------------------------------------------------------------------
# the voltage matrix


def partition_for_matrix(Gbar: FiniteGroup, Sbar: Sequence[int], character: Character) -> VoltagePartition:
    a_list, b_list = [], []
    b0 = None
    for j, s in enumerate(Sbar):
        trivial = character.is_trivial_at(s)
        if Gbar.element_orders[s] == 2 and trivial:
            a_list.append(j)
        elif not trivial and b0 is None:
            b0 = j
        else:
            b_list.append(j)
    return VoltagePartition(tuple(a_list), b0, tuple(b_list))


def voltage_matrix(
    character: Character,
    Sbar: Sequence[int],
    cycles: Sequence[Sequence[Step]],
    partition: VoltagePartition,
) -> list[list[CycInt]]:
    """Row ``i``, column ``j``: voltage of cycle ``i`` when only ``b_j`` has z-part 1."""
    if not partition.b_list:
        raise VoltageError("empty b_list: no free z-parts")
    out = []
    for seq in cycles:
        row = voltage_row(character, Sbar, seq)
        out.append([row[j] for j in partition.b_list])
    return out


@dataclass(frozen=True)
class DetSelection:
    rows: tuple[int, ...]
    det: CycInt
    norm: int


def find_nonzero_det(candidate_rows: Sequence[Sequence[CycInt]], n: int, m: Optional[int] = None) -> Optional[DetSelection]:
    """Greedy choice of ``n`` rows with nonzero determinant.

    Rows are added when they are independent of the rows chosen so far,
    tested by fraction-free cross-multiplication elimination over the ring.
    The determinant of the chosen rows is then recomputed by cofactor
    expansion and checked against ring Bareiss.
    """
    if not candidate_rows:
        return None
    if m is None:
        m = candidate_rows[0][0].m
    basis: list[tuple[int, list[CycInt]]] = []  # (pivot column, reduced row)
    chosen: list[int] = []
    for idx, row in enumerate(candidate_rows):
        r = list(row)
        for col, b in basis:
            if not r[col].is_zero():
                f, g = b[col], r[col]
                r = [f * x - g * y for x, y in zip(r, b)]
        piv = next((c for c, x in enumerate(r) if not x.is_zero()), None)
        if piv is None:
            continue
        basis.append((piv, r))
        chosen.append(idx)
        if len(chosen) == n:
            break
    if len(chosen) < n:
        return None
    sub = [list(candidate_rows[i]) for i in chosen]
    det = cofactor_det(sub, m)
    if det != ring_bareiss_det(sub, m):
        raise ArithmeticError("determinant routes disagree")
    norm = cyc_norm(det)
    if norm == 0:
        raise ArithmeticError("selected rows are dependent")
    return DetSelection(tuple(chosen), det, norm)


def residual_primes(norm_value: int, m: int, k: int) -> list[int]:
    """Primes dividing the norm that could still carry a counterexample."""
    if norm_value == 0:
        raise ValueError("norm must be nonzero")
    lpf = largest_prime_factor(k) if k > 1 else 1
    return sorted(
        p
        for p in factorint(abs(norm_value))
        if p > lpf and k % p and (p - 1) % m == 0
    )


# --------------------------------------------------------------------------
# lifting


def lifted_steps(lifts: LiftedGenSet, genseq: Sequence[Step]) -> list[int]:
    G = lifts.group()
    elems = lifts.elements()
    return [elems[j] if sign > 0 else G.inv(elems[j]) for j, sign in genseq]


def fgl_walk(lifts: LiftedGenSet, genseq: Sequence[Step]) -> list[int]:
    """The lifted walk repeated ``p`` times, as vertices starting at the identity."""
    G = lifts.group()
    steps = lifted_steps(lifts, genseq) * lifts.p
    x, verts = 0, []
    for s in steps:
        verts.append(x)
        x = G.mul(x, s)
    return verts


def fgl_lift(p: int, twist: Sequence[int], Gbar: FiniteGroup, lifts: LiftedGenSet, cycle_genseq: Sequence[Step]) -> CycleCert:
    """Hamiltonian cycle ``(s1, ..., sk)^p`` in ``Cay(Z_p ⋊ Ḡ; S)``, validated."""
    if lifts.p != p or tuple(twist) != tuple(lifts.twist) or lifts.quotient is not Gbar:
        raise VoltageError("lift does not match the requested group")
    if len(cycle_genseq) != Gbar.order:
        raise VoltageError("quotient walk is not hamiltonian-length")
    v = voltage(cycle_genseq, lifts)
    if v % p == 0:
        raise VoltageError("zero voltage: the lifted walk closes early")
    G = lifts.group()
    cert = CycleCert("cycle", tuple(fgl_walk(lifts, cycle_genseq)), "lift")
    verdict = validate_cert(cayley_graph(G, lifts.elements()), cert)
    if not verdict:
        raise AssertionError(f"lifted cycle failed validation: {verdict.reason}")
    return cert


def normalized_lifts(p: int, n: int) -> Iterator[tuple[int, ...]]:
    """Nonzero z-vectors in ``Z_p^n`` whose first nonzero entry is 1."""
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def count_normalized_lifts(p: int, n: int) -> int:
    return (p**n - 1) // (p - 1)


def full_z_vector(partition: VoltagePartition, size: int, free: Sequence[int]) -> list[int]:
    z = [0] * size
    for j, v in zip(partition.b_list, free):
        z[j] = v
    return z


# --------------------------------------------------------------------------
# generic walk repetition (Factor Group Lemma over any cyclic normal subgroup)


def repeat_walk_vertices(G, steps: Sequence[int]) -> list[int]:
    """Vertices of ``(s1, ..., sm)^r`` where ``r`` is the order of the product."""
    x = 0
    for s in steps:
        x = G.mul(x, s)
    r, y = 1, x
    while y != 0:
        y = G.mul(y, x)
        r += 1
    verts, v = [], 0
    for s in list(steps) * r:
        verts.append(v)
        v = G.mul(v, s)
    return verts


def walk_cycle_cert(G, generators: Sequence[int], steps: Sequence[int], origin: str) -> CycleCert:
    """Expand a walk by repetition and validate it as a hamiltonian cycle."""
    verts = repeat_walk_vertices(G, steps)
    cert = CycleCert("cycle", tuple(verts), origin)
    verdict = validate_cert(cayley_graph(G, list(generators)), cert)
    if not verdict:
        raise VoltageError(f"repeated walk is not hamiltonian: {verdict.reason}")
    return cert


def admissible_primes(k: int, m: int, upto: int, start: int = 2) -> list[int]:
    """Primes ``p ≤ upto`` above the largest prime factor of ``k`` with ``m | p-1``."""
    lpf = largest_prime_factor(k) if k > 1 else 1
    return [p for p in primerange(max(start, lpf + 1), upto + 1) if k % p and (p - 1) % m == 0]
