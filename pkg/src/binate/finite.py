"""Finite permutation groups: closure, subgroups, conjugacy, derived series."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .perm import Permutation, commutator

DEFAULT_CAP = 10_000


class GroupTooLarge(RuntimeError):
    """Raised when an enumeration would exceed the configured element cap."""


class NotInGroup(ValueError):
    pass


class FiniteGroup:
    """Group generated by permutations of a common degree.

    Elements are enumerated on first use and kept sorted lexicographically by
    image sequence.
    """

    def __init__(
        self,
        generators: Iterable[Permutation],
        degree: int | None = None,
        cap: int = DEFAULT_CAP,
        name: str | None = None,
    ):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"degree mismatch: generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = gens
        self.cap = cap
        self.name = name

    def __repr__(self) -> str:
        label = self.name or ",".join(map(str, self.generators)) or "1"
        return f"<FiniteGroup {label} deg={self.degree}>"

    @cached_property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    @cached_property
    def elements(self) -> tuple[Permutation, ...]:
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for s in self.generators:
                y = s * x
                if y not in seen:
                    seen.add(y)
                    if len(seen) > self.cap:
                        raise GroupTooLarge(f"more than {self.cap} elements; too large for enumeration")
                    queue.append(y)
        return tuple(sorted(seen))

    @cached_property
    def element_set(self) -> frozenset[Permutation]:
        return frozenset(self.elements)

    @cached_property
    def _index(self) -> dict[Permutation, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def index(self, g: Permutation) -> int:
        return self._index[g]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self.element_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.degree == other.degree and self.element_set == other.element_set

    def __hash__(self) -> int:
        return hash((self.degree, self.element_set))

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)

    def is_perfect(self) -> bool:
        return derived_subgroup(self).order == self.order

    def subgroup(self, gens: Iterable[Permutation]) -> Subgroup:
        gens = list(gens)
        for g in gens:
            if g not in self:
                raise NotInGroup(f"{g} is not in {self!r}")
        return Subgroup(self, FiniteGroup(gens, self.degree, self.cap).element_set)

    def whole(self) -> Subgroup:
        return Subgroup(self, self.element_set)

    def trivial(self) -> Subgroup:
        return Subgroup(self, frozenset([self.identity]))

    # conjugacy

    @cached_property
    def _classes(self) -> tuple[tuple[Permutation, frozenset[Permutation]], ...]:
        assigned: set[Permutation] = set()
        classes = []
        for g in self.elements:
            if g in assigned:
                continue
            orbit = {g}
            queue = deque([g])
            while queue:
                y = queue.popleft()
                for s in self.generators:
                    z = s * y * s.inverse()
                    if z not in orbit:
                        orbit.add(z)
                        queue.append(z)
            assigned |= orbit
            # g is least: elements are scanned in sorted order
            classes.append((g, frozenset(orbit)))
        return tuple(classes)

    @cached_property
    def _class_rep(self) -> dict[Permutation, Permutation]:
        return {x: rep for rep, members in self._classes for x in members}

    def class_rep(self, g: Permutation) -> Permutation:
        """Least element of the conjugacy class of ``g``."""
        try:
            return self._class_rep[g]
        except KeyError:
            raise NotInGroup(f"{g} is not in {self!r}") from None

    @cached_property
    def _commutator_map(self) -> dict[Permutation, tuple[Permutation, Permutation]]:
        found: dict[Permutation, tuple[Permutation, Permutation]] = {}
        inv = {g: g.inverse() for g in self.elements}
        for a in self.elements:
            for b in self.elements:
                c = a * b * inv[a] * inv[b]
                if c not in found:
                    found[c] = (a, b)
        return found


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: frozenset[Permutation]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self.elements

    def __iter__(self) -> Iterator[Permutation]:
        return iter(sorted(self.elements))

    def sorted_elements(self) -> list[Permutation]:
        return sorted(self.elements)

    def is_abelian(self) -> bool:
        els = self.sorted_elements()
        return all(a * b == b * a for i, a in enumerate(els) for b in els[i + 1:])

    def is_closed(self) -> bool:
        """Post-hoc subgroup check: identity present, closed under product and inverse."""
        if self.parent.identity not in self.elements:
            return False
        return all(a * b.inverse() in self.elements for a in self.elements for b in self.elements)

    def as_group(self) -> FiniteGroup:
        return FiniteGroup(self.sorted_elements(), self.parent.degree, self.parent.cap)

    def sort_key(self) -> tuple:
        return (len(self.elements), sorted(self.elements))


def closure(
    generators: Iterable[Permutation], degree: int | None = None, cap: int = DEFAULT_CAP
) -> FiniteGroup:
    """The group generated by ``generators``, enumerated eagerly.

    Raises ``ValueError`` on degree mismatch and ``GroupTooLarge`` past ``cap``.
    """
    G = FiniteGroup(generators, degree, cap)
    G.elements
    return G


def centralizer(G: FiniteGroup, S: Iterable[Permutation]) -> Subgroup:
    S = list(S)
    for s in S:
        if s not in G:
            raise NotInGroup(f"{s} is not in {G!r}")
    return Subgroup(G, frozenset(g for g in G if all(g * s == s * g for s in S)))


def conjugacy_classes(G: FiniteGroup) -> list[frozenset[Permutation]]:
    """Classes ordered by their canonical (least) representative."""
    return [members for _, members in G._classes]


def class_representatives(G: FiniteGroup) -> list[Permutation]:
    return [rep for rep, _ in G._classes]


def normal_closure(G: FiniteGroup, S: Iterable[Permutation]) -> Subgroup:
    elems = set(FiniteGroup(list(S), G.degree, G.cap).elements)
    queue = deque(elems)
    gens = G.generators
    # closed under G-conjugation and multiplication by members
    while queue:
        x = queue.popleft()
        new = [s * x * s.inverse() for s in gens]
        for y in new:
            if y not in elems:
                elems = set(FiniteGroup(list(elems) + [y], G.degree, G.cap).elements)
                queue.extend(elems)
                break
    return Subgroup(G, frozenset(elems))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    gens = G.generators
    comms = [commutator(a, b) for a in gens for b in gens]
    return normal_closure(G, comms)


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    """``G = G^(0) > G^(1) > ...`` down to the first repeated term."""
    series = [G.whole()]
    current = G
    while True:
        D = derived_subgroup(current)
        if D.order == current.order:
            return series
        series.append(Subgroup(G, D.elements))
        current = D.as_group()


def perfect_radical(G: FiniteGroup) -> Subgroup:
    """Terminal term of the derived series.

    For finite groups this is the largest perfect subgroup: any perfect P
    satisfies P = P' <= G^(n) for every n.
    """
    return derived_series(G)[-1]


def _cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    seen = {}
    for g in G:
        els = frozenset(FiniteGroup([g], G.degree).elements)
        seen.setdefault(els, g)
    return [Subgroup(G, els) for els in seen]


def _join_all(G: FiniteGroup, abelian_only: bool) -> list[Subgroup]:
    cyclics = _cyclic_subgroups(G)
    found = {C.elements for C in cyclics}
    queue = deque(found)
    while queue:
        A = queue.popleft()
        for C in cyclics:
            if C.elements <= A:
                continue
            if abelian_only:
                gen = max(C.elements, key=lambda c: (c.order(), c))
                if any(gen * a != a * gen for a in A):
                    continue
                J = frozenset(a * c for a in A for c in C.elements)
            else:
                J = FiniteGroup(list(A | C.elements), G.degree, G.cap).element_set
            if J not in found:
                found.add(J)
                queue.append(J)
    return sorted((Subgroup(G, els) for els in found), key=Subgroup.sort_key)


def abelian_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every abelian subgroup once, trivial included, built from cyclic joins."""
    if G.order > G.cap:
        raise GroupTooLarge(f"order {G.order} exceeds cap {G.cap}")
    return _join_all(G, abelian_only=True)


def subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Full subgroup lattice by joining cyclic subgroups; desk scale only."""
    if G.order > G.cap:
        raise GroupTooLarge(f"order {G.order} exceeds cap {G.cap}")
    return _join_all(G, abelian_only=False)


def commutator_decompose(
    G: FiniteGroup, x: Permutation
) -> list[tuple[Permutation, Permutation]] | None:
    """Write ``x`` as a product of as few commutators ``[a, b]`` as possible.

    A single pair is tried first (first found in element order).  Returns
    ``None`` when ``x`` is not in the derived subgroup.  ``e`` gives ``[(e, e)]``.
    """
    if x not in G:
        raise NotInGroup(f"{x} is not in {G!r}")
    e = G.identity
    if x == e:
        return [(e, e)]
    cmap = G._commutator_map
    if x in cmap:
        return [cmap[x]]
    if x not in derived_subgroup(G):
        return None
    # breadth-first over products of k commutators
    reached: dict[Permutation, list[tuple[Permutation, Permutation]]] = {
        c: [pair] for c, pair in cmap.items()
    }
    frontier = dict(reached)
    while True:
        nxt: dict[Permutation, list[tuple[Permutation, Permutation]]] = {}
        for y, pairs in sorted(frontier.items()):
            for c, pair in sorted(cmap.items()):
                z = y * c
                if z not in reached and z not in nxt:
                    nxt[z] = pairs + [pair]
        if x in nxt:
            return nxt[x]
        if not nxt:
            return None
        reached.update(nxt)
        frontier = nxt
