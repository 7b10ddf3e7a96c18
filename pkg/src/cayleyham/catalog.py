"""A constructive catalog of small groups.

Groups of a given order are produced from a handful of explicit families
(cyclic, abelian, dihedral, dicyclic, A4, A5) together with every split
extension ``N ⋊ H`` of smaller catalog members, then deduplicated up to
isomorphism.  The per-order class count is checked against a reference
table; a mismatch is a hard error because it means a construction is
missing.

Orders outside the reach of the built-in constructions can be supplied as
JSON-lines files of permutation generators (see :func:`load_extension`).
"""

from __future__ import annotations

import itertools
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .groups import (
    FiniteGroup,
    GroupError,
    automorphisms,
    close_generators,
    direct_product,
    find_isomorphism,
    group_invariant,
    semidirect_product,
)

# number of isomorphism classes of groups of order n
REFERENCE_COUNTS: dict[int, int] = {
    1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2,
    11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5,
    21: 2, 22: 2, 23: 1, 24: 15, 25: 2, 26: 2, 27: 5, 28: 4, 29: 1, 30: 4,
    31: 1, 32: 51, 33: 1, 34: 2, 35: 1, 36: 14, 37: 1, 38: 2, 39: 2, 40: 14,
    41: 1, 42: 6, 43: 1, 44: 4, 45: 2, 46: 2, 47: 1, 48: 52, 49: 2, 50: 5,
    51: 1, 52: 5, 53: 1, 54: 15, 55: 2, 56: 13, 57: 2, 58: 2, 59: 1, 60: 13,
    61: 1, 62: 2, 63: 4, 64: 267, 121: 2, 132: 10,
}

DEFAULT_MAX_ORDER = 16


class CatalogError(GroupError):
    """Raised when a constructed order does not match the reference count."""


# --------------------------------------------------------------------------
# families


def cyclic(n: int) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, labels=[f"{a}" for a in range(n)], name=f"Z{n}")


def abelian(factors: Sequence[int]) -> FiniteGroup:
    """Direct product of cyclic groups with the given orders."""
    G = cyclic(factors[0]) if factors else cyclic(1)
    for f in factors[1:]:
        G = direct_product(G, cyclic(f))
    G.name = "x".join(f"Z{f}" for f in factors) if factors else "Z1"
    return G


def invariant_factor_lists(n: int) -> list[list[int]]:
    """All invariant-factor sequences d1 | d2 | ... with product n."""
    out: list[list[int]] = []

    def rec(rest: int, last: int, acc: list[int]) -> None:
        if rest == 1:
            out.append(acc[::-1])
            return
        for d in range(2, rest + 1):
            if rest % d == 0 and (last == 0 or last % d == 0):
                # acc is built from the largest factor down
                rec(rest // d, d, acc + [d])

    rec(n, 0, [])
    return [f for f in out if all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))]


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``: rotations ``0..n-1``, then reflections."""
    table = [[0] * (2 * n) for _ in range(2 * n)]
    for j in range(2):
        for i in range(n):
            for l in range(2):
                for k in range(n):
                    r = (i + (k if j == 0 else -k)) % n
                    table[j * n + i][l * n + k] = ((j + l) % 2) * n + r
    labels = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]
    return FiniteGroup(table, labels=labels, name=f"D{n}")


def dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order ``4n``: ``⟨a, x | a^{2n}, x² = a^n, x a x⁻¹ = a⁻¹⟩``.

    Element ``a^i x^j`` has index ``j·2n + i``.  ``dicyclic(2)`` is Q8 and
    ``dicyclic(2^k)`` is generalized quaternion.
    """
    m = 2 * n
    table = [[0] * (2 * m) for _ in range(2 * m)]
    for j in range(2):
        for i in range(m):
            for l in range(2):
                for k in range(m):
                    if j == 0:
                        e, x = i + k, l
                    elif l == 0:
                        e, x = i - k, 1
                    else:
                        e, x = i - k + n, 0
                    table[j * m + i][l * m + k] = x * m + e % m
    labels = [f"a{i}" for i in range(m)] + [f"a{i}x" for i in range(m)]
    return FiniteGroup(table, labels=labels, name=f"Dic{n}")


def alternating4() -> FiniteGroup:
    return close_generators(4, [[1, 2, 0, 3], [1, 0, 3, 2]], name="A4")


def alternating5() -> FiniteGroup:
    return close_generators(5, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]], name="A5")


def symmetric(n: int) -> FiniteGroup:
    cycle = list(range(1, n)) + [0]
    swap = [1, 0] + list(range(2, n))
    return close_generators(n, [cycle, swap], name=f"S{n}")


def family_members(n: int) -> list[FiniteGroup]:
    out = [abelian(f) for f in invariant_factor_lists(n)]
    if n % 2 == 0 and n >= 6:
        out.append(dihedral(n // 2))
    if n % 4 == 0 and n >= 8:
        out.append(dicyclic(n // 4))
    if n == 12:
        out.append(alternating4())
    if n == 60:
        out.append(alternating5())
    return out


# --------------------------------------------------------------------------
# split extensions


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """``a ∘ b``: apply ``b`` first."""
    return tuple(a[x] for x in b)


def _perm_order(a: tuple[int, ...]) -> int:
    ident = tuple(range(len(a)))
    x, k = a, 1
    while x != ident:
        x = _compose(a, x)
        k += 1
    return k


def action_homomorphisms(H: FiniteGroup, auts: Sequence[tuple[int, ...]]) -> list[list[tuple[int, ...]]]:
    """All homomorphisms ``H → Aut(N)``, each as a list of automorphism arrays
    indexed by the elements of ``H``."""
    from .groups import greedy_generators

    if H.order == 1:
        return [[auts[0]]]
    gens = greedy_generators(H)
    orders = [_perm_order(a) for a in auts]
    cands = [[a for a, o in zip(auts, orders) if H.element_orders[g] % o == 0] for g in gens]
    ident = tuple(range(len(auts[0])))
    found = []
    for choice in itertools.product(*cands):
        img: list[Optional[tuple[int, ...]]] = [None] * H.order
        img[0] = ident
        queue = [0]
        ok = True
        for x in queue:
            for g, a in zip(gens, choice):
                y = H.mul(x, g)
                v = _compose(img[x], a)
                if img[y] is None:
                    img[y] = v
                    queue.append(y)
                elif img[y] != v:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(img)
    return found


# --------------------------------------------------------------------------
# the catalog


class Catalog:
    """Lazily built, memoized catalog of groups by order."""

    def __init__(self, check_counts: bool = True) -> None:
        self.check_counts = check_counts
        self._by_order: dict[int, list[FiniteGroup]] = {}
        self._extra: dict[int, list[FiniteGroup]] = {}
        self._auts: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    def add_extension(self, groups: Iterable[FiniteGroup]) -> None:
        for G in groups:
            self._extra.setdefault(G.order, []).append(G)
            self._by_order.pop(G.order, None)

    def automorphism_arrays(self, G: FiniteGroup) -> list[tuple[int, ...]]:
        key = G.catalog_id
        if key is None or key not in self._auts:
            arrs = sorted(tuple(a.image) for a in automorphisms(G))
            if key is None:
                return arrs
            self._auts[key] = arrs
        return self._auts[key]

    def _candidates(self, n: int) -> Iterable[FiniteGroup]:
        yield from family_members(n)
        yield from self._extra.get(n, [])
        for d in range(2, n):
            if n % d:
                continue
            for N in self.groups(d):
                auts = self.automorphism_arrays(N)
                for H in self.groups(n // d):
                    for act in action_homomorphisms(H, auts):
                        yield semidirect_product(N, H, act, name=f"{N.name}:{H.name}")

    def groups(self, n: int) -> list[FiniteGroup]:
        """One representative per isomorphism class of groups of order ``n``."""
        if n in self._by_order:
            return self._by_order[n]
        if n == 1:
            reps = [cyclic(1)]
        else:
            reps = []
            buckets: dict[tuple, list[FiniteGroup]] = {}
            for G in self._candidates(n):
                key = group_invariant(G)
                bucket = buckets.setdefault(key, [])
                if any(find_isomorphism(G, R) is not None for R in bucket):
                    continue
                bucket.append(G)
                reps.append(G)
        for i, G in enumerate(reps, start=1):
            G.catalog_id = (n, i)
        expected = REFERENCE_COUNTS.get(n)
        if self.check_counts and expected is not None and len(reps) != expected:
            raise CatalogError(f"order {n}: built {len(reps)} classes, reference says {expected}")
        self._by_order[n] = reps
        return reps

    def get(self, catalog_id: Sequence[int]) -> FiniteGroup:
        n, i = catalog_id
        return self.groups(n)[i - 1]

    def find(self, G: FiniteGroup) -> FiniteGroup:
        """The catalog representative isomorphic to ``G``."""
        for R in self.groups(G.order):
            if find_isomorphism(G, R) is not None:
                return R
        raise CatalogError(f"no catalog group matches {G!r}")


_DEFAULT: Optional[Catalog] = None


def default_catalog() -> Catalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Catalog()
    return _DEFAULT


def build_catalog(max_order: int = DEFAULT_MAX_ORDER, catalog: Optional[Catalog] = None) -> list[FiniteGroup]:
    cat = catalog or default_catalog()
    out: list[FiniteGroup] = []
    for n in range(1, max_order + 1):
        out.extend(cat.groups(n))
    return out


def load_extension(path: str | Path) -> list[FiniteGroup]:
    """Read ``{"order", "name", "degree", "generators"}`` records, one per line."""
    groups = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            G = close_generators(int(rec["degree"]), rec["generators"], name=rec.get("name", ""))
            if G.order != int(rec["order"]):
                raise CatalogError(f"{path}:{lineno}: generators give order {G.order}, not {rec['order']}")
            groups.append(G)
    return groups


def largest_prime_factor(n: int) -> int:
    best, d = 1, 2
    while d * d <= n:
        while n % d == 0:
            best, n = d, n // d
        d += 1
    return max(best, n) if n > 1 else best


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))
