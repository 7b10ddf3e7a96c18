"""Irredundant generating sets up to automorphisms and inverse flips."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .groups import FiniteGroup, GroupHom, automorphisms, subgroup_generated


@dataclass(frozen=True)
class GenSet:
    group: FiniteGroup = field(compare=False, repr=False)
    elements: tuple[int, ...]

    @property
    def generating(self) -> bool:
        return is_generating(self.group, self.elements)

    @property
    def irredundant(self) -> bool:
        return is_irredundant(self.group, self.elements)

    def with_inverses(self) -> list[int]:
        """``S ∪ S⁻¹`` in increasing order."""
        inv = self.group.inv
        return sorted(set(self.elements) | {inv(s) for s in self.elements})

    def labels(self) -> list[str]:
        return [self.group.labels[s] for s in self.elements]


@dataclass(frozen=True)
class GenSetClass:
    representative: GenSet
    canonical_key: tuple[int, ...]
    orbit_size: int = 0


def is_generating(G: FiniteGroup, elements: Iterable[int]) -> bool:
    return len(subgroup_generated(G, elements)) == G.order


def is_irredundant(G: FiniteGroup, elements: Iterable[int]) -> bool:
    elems = list(dict.fromkeys(elements))
    if not is_generating(G, elems):
        return False
    return all(not is_generating(G, elems[:i] + elems[i + 1 :]) for i in range(len(elems)))


def _flip_min(G: FiniteGroup, x: int) -> int:
    y = G.inv(x)
    return x if x < y else y


def canonical_key(G: FiniteGroup, elements: Iterable[int], auts: Optional[Sequence[GroupHom]] = None) -> tuple[int, ...]:
    """Least sorted tuple over all automorphic images and inverse flips."""
    if auts is None:
        auts = automorphisms(G)
    elems = list(elements)
    inv = G.inverses
    best = None
    for a in auts:
        im = a.image
        key = tuple(sorted(min(im[s], inv[im[s]]) for s in elems))
        if best is None or key < best:
            best = key
    return best


def _is_independent_extension(G: FiniteGroup, base: Sequence[int], x: int) -> bool:
    """Whether ``base ∪ {x}`` is independent, given ``base`` is."""
    if x in subgroup_generated(G, base):
        return False
    for i, t in enumerate(base):
        others = list(base[:i]) + list(base[i + 1 :]) + [x]
        if t in subgroup_generated(G, others):
            return False
    return True


def irredundant_gensets_up_to_equiv(G: FiniteGroup, auts: Optional[Sequence[GroupHom]] = None) -> list[GenSetClass]:
    """One class per orbit of irredundant generating sets of ``G``.

    Works level by level through independent sets (no element lies in the
    subgroup generated by the others).  Irredundant generating sets are the
    independent sets that generate, and every subset of an independent set
    is independent, so extending one orbit representative per level reaches
    every orbit.  Generating sets are not extended further.
    """
    if auts is None:
        auts = automorphisms(G)
    if G.order == 1:
        return [GenSetClass(GenSet(G, ()), (), 1)]
    inv = G.inverses
    level = [()]
    found: dict[tuple[int, ...], None] = {}
    while level:
        next_level: dict[tuple[int, ...], None] = {}
        for base in level:
            for x in range(1, G.order):
                if x in base or inv[x] in base or inv[x] < x:
                    continue
                if not _is_independent_extension(G, base, x):
                    continue
                key = canonical_key(G, base + (x,), auts)
                if key in found or key in next_level:
                    continue
                if is_generating(G, key):
                    found[key] = None
                else:
                    next_level[key] = None
        level = sorted(next_level)
    classes = []
    for key in sorted(found, key=lambda k: (len(k), k)):
        classes.append(GenSetClass(GenSet(G, key), key, orbit_size(G, key, auts)))
    return classes


def equivalence_orbit(G: FiniteGroup, elements: Sequence[int], auts: Optional[Sequence[GroupHom]] = None) -> set[frozenset[int]]:
    """All sets obtainable from ``elements`` by an automorphism and inverse flips."""
    if auts is None:
        auts = automorphisms(G)
    out = set()
    for a in auts:
        imgs = [a.image[s] for s in elements]
        for mask in range(1 << len(imgs)):
            out.add(frozenset(G.inv(y) if mask >> i & 1 else y for i, y in enumerate(imgs)))
    return out


def orbit_size(G: FiniteGroup, elements: Sequence[int], auts: Optional[Sequence[GroupHom]] = None) -> int:
    return len(equivalence_orbit(G, elements, auts))
