"""Finite groups as dense multiplication tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
Everything here is meant for small groups (a few hundred elements at most);
the only large groups the rest of the package touches are the cyclic
extensions ``Z_n ⋊ Ḡ``, which are represented arithmetically by
:class:`SemidirectGroup` and only materialized on request.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

FULL_CHECK_ORDER = 64
CLOSURE_CAP = 5000


class GroupError(ValueError):
    """Raised for malformed group data or violated preconditions."""


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a][b]`` is the index of ``a·b``.  The constructor checks the
    group axioms (associativity exhaustively up to order 64, on a random
    sample above that).
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        name: str = "",
        catalog_id: Optional[tuple[int, int]] = None,
        check: bool = True,
    ) -> None:
        self.table = [list(map(int, row)) for row in table]
        self.order = len(self.table)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.order)]
        self.name = name
        self.catalog_id = catalog_id
        if check:
            self._check_axioms()

    def __repr__(self) -> str:
        tag = f" {self.catalog_id}" if self.catalog_id else ""
        return f"<FiniteGroup {self.name or '?'} order={self.order}{tag}>"

    def _check_axioms(self) -> None:
        n = self.order
        if n == 0:
            raise GroupError("empty group")
        t = self.array
        if t.shape != (n, n):
            raise GroupError("table is not square")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entry out of range")
        ref = np.arange(n)
        if not (np.array_equal(t[0], ref) and np.array_equal(t[:, 0], ref)):
            raise GroupError("element 0 is not the identity")
        srt = np.sort(t, axis=1)
        if not (srt == ref).all() or not (np.sort(t, axis=0) == ref[:, None]).all():
            raise GroupError("table is not a Latin square")
        if n <= FULL_CHECK_ORDER:
            left = t[t, :]  # (a·b)·c indexed [a, b, c]
            right = t[:, t]  # a·(b·c) indexed [a, b, c]
            if not np.array_equal(left, right):
                raise GroupError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 20000))
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise GroupError("table is not associative")

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> list[int]:
        inv = [0] * self.order
        for a, row in enumerate(self.table):
            inv[a] = row.index(0)
        return inv

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def elements(self) -> range:
        return range(self.order)

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 0
        while e:
            if e & 1:
                result = self.table[result][a]
            a = self.table[a][a]
            e >>= 1
        return result

    @cached_property
    def element_orders(self) -> list[int]:
        orders = [0] * self.order
        for a in range(self.order):
            x, k = a, 1
            while x != 0:
                x = self.table[x][a]
                k += 1
            orders[a] = k
        return orders

    def element_order(self, a: int) -> int:
        return self.element_orders[a]

    @cached_property
    def is_abelian(self) -> bool:
        t = self.array
        return bool(np.array_equal(t, t.T))

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.element_orders)

    def conjugate(self, a: int, g: int) -> int:
        """Return ``g·a·g⁻¹``."""
        return self.table[self.table[g][a]][self.inverses[g]]


class GroupHom:
    """A homomorphism given by the images of all source elements."""

    def __init__(self, source, target, image: Sequence[int], check: bool = True) -> None:
        self.source = source
        self.target = target
        self.image = list(image)
        if check:
            self.verify()

    def verify(self) -> None:
        if len(self.image) != self.source.order:
            raise GroupError("image array has wrong length")
        if self.image[0] != 0:
            raise GroupError("identity is not mapped to identity")
        im, src, tgt = self.image, self.source, self.target
        for a in src.elements():
            for b in src.elements():
                if im[src.mul(a, b)] != tgt.mul(im[a], im[b]):
                    raise GroupError("map is not a homomorphism")

    def __call__(self, a: int) -> int:
        return self.image[a]

    @property
    def kernel(self) -> frozenset[int]:
        return frozenset(a for a, b in enumerate(self.image) if b == 0)

    def is_bijective(self) -> bool:
        return len(set(self.image)) == self.source.order == self.target.order


# --------------------------------------------------------------------------
# construction from permutations


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Product ``p·q`` acting on the right: first ``p``, then ``q``."""
    return tuple(q[i] for i in p)


def close_generators(
    degree: int,
    perm_gens: Sequence[Sequence[int]],
    name: str = "",
    cap: int = CLOSURE_CAP,
) -> FiniteGroup:
    """Close a set of permutations into a multiplication table.

    Elements are numbered in breadth-first discovery order from the
    identity, multiplying by the generators on the right.
    """
    gens = []
    for g in perm_gens:
        g = tuple(int(x) for x in g)
        if sorted(g) != list(range(degree)):
            raise GroupError(f"not a permutation of 0..{degree - 1}: {g}")
        gens.append(g)
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    labels = ["e"]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for k, g in enumerate(gens):
            y = _compose(x, g)
            if y not in index:
                if len(elems) >= cap:
                    raise GroupError(f"closure exceeds {cap} elements")
                index[y] = len(elems)
                elems.append(y)
                word = labels[index[x]]
                labels.append(f"g{k}" if word == "e" else f"{word}*g{k}")
                queue.append(y)
    table = [[index[_compose(x, y)] for y in elems] for x in elems]
    return FiniteGroup(table, labels=labels, name=name)


def table_from_elements(elements: Sequence, mul, labels=None, name: str = "") -> FiniteGroup:
    """Build a group from an explicit element list (identity first) and a product."""
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[mul(x, y)] for y in elements] for x in elements]
    return FiniteGroup(table, labels=labels or [str(x) for x in elements], name=name)


# --------------------------------------------------------------------------
# subgroups and structure


def subgroup_generated(G, subset: Iterable[int]) -> frozenset[int]:
    """Closure of ``subset ∪ {e}`` under multiplication (hence inverses)."""
    gens = [s for s in set(subset) if s != 0]
    seen = {0}
    frontier = [0]
    mul = G.mul
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def is_subgroup(G: FiniteGroup, subset: Iterable[int]) -> bool:
    s = set(subset)
    if 0 not in s:
        return False
    return all(G.mul(a, G.inv(b)) in s for a in s for b in s)


def is_normal(G: FiniteGroup, N: Iterable[int]) -> bool:
    n = set(N)
    return all(G.conjugate(x, g) in n for g in G.elements() for x in n)


def centralizer(G: FiniteGroup, a: int) -> frozenset[int]:
    row, t = G.table[a], G.table
    return frozenset(g for g in G.elements() if row[g] == t[g][a])


@dataclass(frozen=True)
class Structure:
    center: frozenset[int]
    commutator_subgroup: frozenset[int]
    is_abelian: bool
    element_orders: tuple[int, ...]


def commutator(G: FiniteGroup, a: int, b: int) -> int:
    """``[a, b] = a⁻¹b⁻¹ab``."""
    t, inv = G.table, G.inverses
    return t[t[inv[a]][inv[b]]][t[a][b]]


def commutator_subgroup(G: FiniteGroup) -> frozenset[int]:
    comms = {commutator(G, a, b) for a in G.elements() for b in G.elements()}
    return subgroup_generated(G, comms)


def center(G: FiniteGroup) -> frozenset[int]:
    t = G.array
    return frozenset(int(a) for a in np.nonzero((t == t.T).all(axis=1))[0])


def structure(G: FiniteGroup) -> Structure:
    comm = commutator_subgroup(G)
    return Structure(
        center=center(G),
        commutator_subgroup=comm,
        is_abelian=len(comm) == 1,
        element_orders=tuple(G.element_orders),
    )


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class SylowInfo:
    prime: int
    subgroup: frozenset[int]
    is_normal: bool
    is_cyclic_of_order_p: bool
    count: int


def sylow_info(G: FiniteGroup, p: int) -> SylowInfo:
    """One Sylow ``p``-subgroup of ``G`` together with its conjugate count."""
    if G.order % p:
        raise GroupError(f"{p} does not divide |G| = {G.order}")
    full = 1
    while G.order % (full * p) == 0:
        full *= p

    def is_p_power(n: int) -> bool:
        while n % p == 0:
            n //= p
        return n == 1

    p_elems = [a for a in G.elements() if a and is_p_power(G.element_orders[a])]
    p_elems.sort(key=lambda a: (-G.element_orders[a], a))
    P = subgroup_generated(G, p_elems[:1])
    while len(P) < full:
        for y in p_elems:
            if y in P:
                continue
            Q = subgroup_generated(G, set(P) | {y})
            if is_p_power(len(Q)):
                P = Q
                break
        else:  # pragma: no cover - Sylow's theorem guarantees progress
            raise GroupError("failed to extend p-subgroup")
    conjugates = {frozenset(G.conjugate(x, g) for x in P) for g in G.elements()}
    return SylowInfo(
        prime=p,
        subgroup=P,
        is_normal=len(conjugates) == 1,
        is_cyclic_of_order_p=len(P) == p,
        count=len(conjugates),
    )


def quotient(G: FiniteGroup, N: Iterable[int]) -> tuple[FiniteGroup, GroupHom]:
    """Quotient by a normal subgroup, cosets labelled by their least element."""
    N = frozenset(N)
    if not is_subgroup(G, N):
        raise GroupError("N is not a subgroup")
    if not is_normal(G, N):
        raise GroupError("N is not normal")
    rep_of = [-1] * G.order
    reps = []
    for a in G.elements():
        if rep_of[a] < 0:
            reps.append(a)
            for x in N:
                rep_of[G.mul(a, x)] = a
    coset_index = {r: i for i, r in enumerate(reps)}
    proj = [coset_index[rep_of[a]] for a in G.elements()]
    table = [[proj[G.mul(r, s)] for s in reps] for r in reps]
    Q = FiniteGroup(table, labels=[G.labels[r] + "N" for r in reps], name=f"{G.name}/N")
    return Q, GroupHom(G, Q, proj, check=False)


# --------------------------------------------------------------------------
# homomorphism search


def greedy_generators(G) -> list[int]:
    """A small irredundant generating set: repeatedly take the element that
    enlarges the current subgroup the most (ties by higher order, lower index)."""
    gens: list[int] = []
    H = frozenset({0})
    orders = G.element_orders
    candidates = sorted(range(1, G.order), key=lambda a: (-orders[a], a))
    while len(H) < G.order:
        best, best_size, best_H = None, 0, H
        for a in candidates:
            if a in H:
                continue
            K = subgroup_generated(G, gens + [a])
            if len(K) > best_size:
                best, best_size, best_H = a, len(K), K
                if best_size == G.order:
                    break
        gens.append(best)
        H = best_H
    return gens


def extend_to_hom(G, gens: Sequence[int], images: Sequence[int], H) -> Optional[list[int]]:
    """Extend generator images to a homomorphism on ``⟨gens⟩``.

    Returns the image array (``-1`` outside ``⟨gens⟩``) or ``None`` when the
    assignment is inconsistent.  Every edge ``x → x·g`` of the Cayley graph
    of the generated subgroup is checked, which is enough for a homomorphism.
    """
    img = [-1] * G.order
    img[0] = 0
    queue = [0]
    gmul, hmul = G.mul, H.mul
    pairs = list(zip(gens, images))
    for x in queue:
        fx = img[x]
        for g, h in pairs:
            y = gmul(x, g)
            fy = hmul(fx, h)
            if img[y] < 0:
                img[y] = fy
                queue.append(y)
            elif img[y] != fy:
                return None
    return img


def _element_signature(G: FiniteGroup) -> list[tuple]:
    orders = G.element_orders
    t = G.array
    comm = (t == t.T).sum(axis=1)
    sq = [G.table[a][a] for a in G.elements()]
    roots = [0] * G.order
    for s in sq:
        roots[s] += 1
    return [(orders[a], int(comm[a]), orders[sq[a]], roots[a]) for a in G.elements()]


def group_invariant(G: FiniteGroup) -> tuple:
    """A cheap isomorphism invariant used to bucket candidates."""
    sig = _element_signature(G)
    return (G.order, tuple(sorted(sig)), len(commutator_subgroup(G)))


def _hom_search(G, H, want_all: bool, bijective: bool) -> list[list[int]]:
    gens = greedy_generators(G)
    sig_g, sig_h = _element_signature(G), _element_signature(H)
    cands = []
    for g in gens:
        if bijective:
            cands.append([h for h in H.elements() if sig_h[h] == sig_g[g]])
        else:
            cands.append([h for h in H.elements() if G.element_orders[g] % H.element_orders[h] == 0])
    found: list[list[int]] = []
    chosen: list[int] = []

    def rec(i: int) -> bool:
        if i == len(gens):
            img = extend_to_hom(G, gens, chosen, H)
            if img is None:
                return False
            if bijective and len(set(img)) != G.order:
                return False
            found.append(img)
            return not want_all
        for h in cands[i]:
            if bijective and h in chosen:
                continue
            chosen.append(h)
            # prune on the subgroup generated so far
            if i + 1 < len(gens):
                part = extend_to_hom(G, gens[: i + 1], chosen, H)
                ok = part is not None and (
                    not bijective or len({v for v in part if v >= 0}) == sum(v >= 0 for v in part)
                )
            else:
                ok = True
            if ok and rec(i + 1):
                return True
            chosen.pop()
        return False

    rec(0)
    return found


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[GroupHom]:
    if G.order != H.order:
        return None
    if group_invariant(G) != group_invariant(H):
        return None
    found = _hom_search(G, H, want_all=False, bijective=True)
    return GroupHom(G, H, found[0], check=False) if found else None


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


_AUT_CACHE: dict[int, list[GroupHom]] = {}


def automorphisms(G: FiniteGroup) -> list[GroupHom]:
    """All automorphisms of ``G`` (cached per group object)."""
    key = id(G)
    cached = _AUT_CACHE.get(key)
    if cached is not None and cached[0].source is G:
        return cached
    found = _hom_search(G, G, want_all=True, bijective=True)
    auts = [GroupHom(G, G, img, check=False) for img in sorted(found)]
    _AUT_CACHE[key] = auts
    return auts


def homomorphisms(G: FiniteGroup, H: FiniteGroup) -> list[list[int]]:
    """All homomorphisms ``G → H`` as image arrays."""
    return sorted(_hom_search(G, H, want_all=True, bijective=False))


# --------------------------------------------------------------------------
# abelian characters


def cyclic_decomposition(A: FiniteGroup) -> list[tuple[int, int]]:
    """Split an abelian group into cyclic factors ``[(generator, order), ...]``.

    Repeatedly splits off an element of maximal order: with ``x`` of maximal
    order, decompose ``A/⟨x⟩`` and lift each factor generator to an element
    of the same order.
    """
    if not A.is_abelian:
        raise GroupError("cyclic decomposition needs an abelian group")
    if A.order == 1:
        return []
    orders = A.element_orders
    x = max(A.elements(), key=lambda a: (orders[a], -a))
    n = orders[x]
    X = subgroup_generated(A, [x])
    if len(X) == A.order:
        return [(x, n)]
    Q, proj = quotient(A, X)
    # quotient elements are cosets indexed by least representative
    reps = {}
    for a in A.elements():
        reps.setdefault(proj(a), a)
    x_power = {A.power(x, i): i for i in range(n)}
    factors = [(x, n)]
    for qg, d in cyclic_decomposition(Q):
        y = reps[qg]
        t = x_power[A.power(y, d)]
        # t is a multiple of d because n is the exponent of A
        y = A.mul(y, A.power(x, -(t // d)))
        factors.append((y, d))
    return factors


@dataclass(frozen=True)
class Character:
    """A homomorphism ``G → μ_m`` stored as exponents: ``g ↦ ζ_m^exponent[g]``."""

    group: FiniteGroup = field(compare=False, repr=False)
    order_m: int
    exponent: tuple[int, ...]

    def value_exponent(self, g: int) -> int:
        return self.exponent[g]

    def is_trivial_at(self, g: int) -> bool:
        return self.exponent[g] % self.order_m == 0

    def is_minus_one_at(self, g: int) -> bool:
        e = self.exponent[g] % self.order_m
        return e != 0 and (2 * e) % self.order_m == 0

    @property
    def is_trivial(self) -> bool:
        return self.order_m == 1

    @property
    def key(self) -> tuple:
        return (self.order_m, self.exponent)


def abelian_characters(G: FiniteGroup) -> list[Character]:
    """All ``|G/[G,G]|`` abelian characters, each with its exact order."""
    comm = commutator_subgroup(G)
    A, proj = quotient(G, comm)
    factors = cyclic_decomposition(A)
    M = math.lcm(*(d for _, d in factors)) if factors else 1
    # coordinates of each element of A in the decomposition
    coords = {0: (0,) * len(factors)}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for i, (g, d) in enumerate(factors):
                b = A.mul(a, g)
                if b not in coords:
                    c = list(coords[a])
                    c[i] = (c[i] + 1) % d
                    coords[b] = tuple(c)
                    nxt.append(b)
        frontier = nxt
    chars = []
    ranges = [range(d) for _, d in factors]
    import itertools

    for choice in itertools.product(*ranges):
        exps_A = [
            sum(c * (M // d) * e for c, (_, d), e in zip(choice, factors, coords[a])) % M
            for a in A.elements()
        ]
        m = M // math.gcd(M, *exps_A) if any(exps_A) else 1
        exps = tuple((exps_A[proj(g)] * m // M) % m for g in G.elements())
        chars.append(Character(G, m, exps))
    chars.sort(key=lambda c: (c.order_m, c.exponent))
    return chars


def is_character(G: FiniteGroup, m: int, exponent: Sequence[int]) -> bool:
    return exponent[0] % m == 0 and all(
        exponent[G.mul(a, b)] % m == (exponent[a] + exponent[b]) % m
        for a in G.elements()
        for b in G.elements()
    )


# --------------------------------------------------------------------------
# semidirect products


def least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise GroupError(f"{p} is not prime")


def root_of_unity_mod(p: int, m: int) -> int:
    """Image of ``ζ_m`` in ``Z_p^×`` under the least-primitive-root embedding."""
    if (p - 1) % m:
        raise GroupError(f"{m} does not divide {p} - 1")
    return pow(least_primitive_root(p), (p - 1) // m, p)


def twist_from_character(char: Character, p: int) -> list[int]:
    r = root_of_unity_mod(p, char.order_m)
    return [pow(r, e, p) for e in char.exponent]


class SemidirectGroup:
    """``Z_n ⋊_τ Ḡ`` on pairs ``(z, ḡ)`` with ``(z1,g1)(z2,g2) = (z1 + τ(g1)z2, g1g2)``.

    The pair ``(z, g)`` has index ``g·n + z``, so the identity is ``0``.
    Multiplication is arithmetic; :attr:`underlying` materializes the table.
    """

    def __init__(self, n: int, quotient: FiniteGroup, twist: Sequence[int], name: str = "") -> None:
        self.ring_modulus = n
        self.quotient = quotient
        self.twist = [int(t) % n for t in twist]
        self.order = n * quotient.order
        self.name = name or f"Z{n}:{quotient.name}"
        if len(self.twist) != quotient.order:
            raise GroupError("twist must give one unit per quotient element")
        if any(math.gcd(t, n) != 1 for t in self.twist):
            raise GroupError("twist values must be units")
        qt = quotient.table
        for a in quotient.elements():
            for b in quotient.elements():
                if self.twist[qt[a][b]] != (self.twist[a] * self.twist[b]) % n:
                    raise GroupError("twist is not multiplicative")
        self._qinv = quotient.inverses

    def __repr__(self) -> str:
        return f"<SemidirectGroup {self.name} order={self.order}>"

    def pair(self, x: int) -> tuple[int, int]:
        g, z = divmod(x, self.ring_modulus)
        return z, g

    def index(self, z: int, g: int) -> int:
        return g * self.ring_modulus + z % self.ring_modulus

    def mul(self, a: int, b: int) -> int:
        n = self.ring_modulus
        g1, z1 = divmod(a, n)
        g2, z2 = divmod(b, n)
        return self.quotient.table[g1][g2] * n + (z1 + self.twist[g1] * z2) % n

    def inv(self, a: int) -> int:
        n = self.ring_modulus
        g, z = divmod(a, n)
        gi = self._qinv[g]
        return gi * n + (-self.twist[gi] * z) % n

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def element_orders(self) -> list[int]:
        return [self.element_order(a) for a in self.elements()]

    def project(self, a: int) -> int:
        return a // self.ring_modulus

    def section(self, g: int) -> int:
        return g * self.ring_modulus

    @property
    def kernel(self) -> range:
        return range(self.ring_modulus)

    @cached_property
    def projection(self) -> GroupHom:
        return GroupHom(self.underlying, self.quotient, [self.project(a) for a in self.elements()], check=False)

    @cached_property
    def underlying(self) -> FiniteGroup:
        rows = [[self.mul(a, b) for b in self.elements()] for a in self.elements()]
        labels = [f"({z},{self.quotient.labels[g]})" for g in self.quotient.elements() for z in range(self.ring_modulus)]
        return FiniteGroup(rows, labels=labels, name=self.name, check=self.order <= 200)


def semidirect_zn(n: int, Gbar: FiniteGroup, twist: Sequence[int]) -> SemidirectGroup:
    return SemidirectGroup(n, Gbar, twist)


def semidirect_product(N: FiniteGroup, H: FiniteGroup, action: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """``N ⋊ H`` where ``action[h]`` is the automorphism of ``N`` (as an image
    array) by which ``h`` acts.  Element ``(x, h)`` has index ``h·|N| + x``."""
    nN, nH = N.order, H.order
    nt, ht = N.array, H.array
    act = np.asarray(action, dtype=np.int64)  # act[h, x]
    idx = np.arange(nN * nH)
    h, x = np.divmod(idx, nN)
    # (x1,h1)(x2,h2) = (x1 · act[h1](x2), h1 h2)
    x1, h1 = x[:, None], h[:, None]
    x2, h2 = x[None, :], h[None, :]
    prod_x = nt[x1, act[h1, x2]]
    prod_h = ht[h1, h2]
    table = prod_h * nN + prod_x
    return FiniteGroup(table.tolist(), name=name or f"{N.name}:{H.name}")


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str = "") -> FiniteGroup:
    ident = [list(range(A.order))] * B.order
    return semidirect_product(A, B, ident, name=name or f"{A.name}x{B.name}")
