"""Uniform element interface over the group backends.

A handle bundles multiplication, inversion, equality and text I/O for one
group.  Backends: finite permutation groups, free groups, direct products,
and HNN extensions (see ``hnn``).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Hashable, Sequence

from .finite import FiniteGroup, closure
from .perm import Permutation, PermutationError, parse_cycles
from .words import FreeWord, Gen, cyclic_normal_form, parse_word


class ConjugacyUnsupported(NotImplementedError):
    """The backend has no conjugacy decision procedure."""


class GroupHandle(ABC):
    has_canonical_form = True

    @property
    @abstractmethod
    def identity(self) -> Any: ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def inv(self, a: Any) -> Any: ...

    def equal(self, a: Any, b: Any) -> bool:
        return self.canonical(a) == self.canonical(b)

    def is_identity(self, a: Any) -> bool:
        return self.equal(a, self.identity)

    def canonical(self, a: Any) -> Hashable:
        """Key that is equal exactly for equal elements."""
        raise NotImplementedError(f"{type(self).__name__} has no canonical form")

    def conjugacy_key(self, a: Any) -> Hashable:
        raise ConjugacyUnsupported(f"conjugacy unsupported for {self}")

    def commutator(self, a: Any, b: Any) -> Any:
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def power(self, a: Any, n: int) -> Any:
        base = a if n >= 0 else self.inv(a)
        out = self.identity
        for _ in range(abs(n)):
            out = self.mul(out, base)
        return out

    def product(self, items: Sequence[Any]) -> Any:
        out = self.identity
        for x in items:
            out = self.mul(out, x)
        return out

    @abstractmethod
    def format(self, a: Any) -> str: ...

    @abstractmethod
    def parse(self, text: str) -> Any: ...


class FiniteHandle(GroupHandle):
    """Permutation group; ``names`` lets elements be written by name (e.g. ``g``)."""

    def __init__(self, group: FiniteGroup, names: dict[str, Permutation] | None = None):
        self.group = group
        self.names = dict(names or {})
        self._by_value = {v: k for k, v in self.names.items()}

    def __repr__(self) -> str:
        return f"FiniteHandle({self.group!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteHandle) and self.group == other.group

    def __hash__(self) -> int:
        return hash(self.group)

    @property
    def identity(self) -> Permutation:
        return self.group.identity

    def mul(self, a: Permutation, b: Permutation) -> Permutation:
        return a * b

    def inv(self, a: Permutation) -> Permutation:
        return a.inverse()

    def canonical(self, a: Permutation) -> Permutation:
        return a

    def is_identity(self, a: Permutation) -> bool:
        return a.is_identity()

    def conjugacy_key(self, a: Permutation) -> Permutation:
        return self.group.class_rep(a)

    def elements(self) -> tuple[Permutation, ...]:
        return self.group.elements

    def generators(self) -> list[Permutation]:
        return list(self.group.generators)

    def format(self, a: Permutation) -> str:
        if a.is_identity():
            return "1"
        return self._by_value.get(a, str(a))

    def parse(self, text: str) -> Permutation:
        s = text.strip()
        if s in ("1", "e", "()"):
            return self.identity
        if s in self.names:
            return self.names[s]
        if s.endswith("'") and s[:-1].strip() in self.names:
            return self.names[s[:-1].strip()].inverse()
        try:
            p = parse_cycles(s, self.group.degree)
        except PermutationError as exc:
            raise ValueError(f"cannot parse element {text!r}: {exc}") from None
        if p not in self.group:
            raise ValueError(f"{p} is not in {self.group!r}")
        return p


def trivial_handle() -> FiniteHandle:
    return FiniteHandle(closure([], degree=1))


class FreeHandle(GroupHandle):
    def __init__(self, generators: Sequence[Gen | str]):
        self.gens = tuple(Gen(g) if isinstance(g, str) else g for g in generators)

    def __repr__(self) -> str:
        return f"FreeHandle({', '.join(map(str, self.gens))})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeHandle) and self.gens == other.gens

    def __hash__(self) -> int:
        return hash(self.gens)

    @property
    def identity(self) -> FreeWord:
        return FreeWord()

    def mul(self, a: FreeWord, b: FreeWord) -> FreeWord:
        return a * b

    def inv(self, a: FreeWord) -> FreeWord:
        return a.inverse()

    def canonical(self, a: FreeWord) -> FreeWord:
        return a

    def conjugacy_key(self, a: FreeWord) -> FreeWord:
        return cyclic_normal_form(a)

    def generators(self) -> list[FreeWord]:
        return [FreeWord.gen(g) for g in self.gens]

    def format(self, a: FreeWord) -> str:
        return str(a)

    def parse(self, text: str) -> FreeWord:
        w = parse_word(text)
        extra = w.generators() - set(self.gens)
        if extra:
            raise ValueError(f"generators {sorted(map(str, extra))} not in {self!r}")
        return w


def split_top_level(text: str, sep: str = ",") -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


class ProductHandle(GroupHandle):
    """Direct product; elements are pairs, written ``(a,b)``."""

    def __init__(self, left: GroupHandle, right: GroupHandle):
        self.left = left
        self.right = right
        self.has_canonical_form = left.has_canonical_form and right.has_canonical_form

    def __repr__(self) -> str:
        return f"ProductHandle({self.left!r}, {self.right!r})"

    @property
    def identity(self) -> tuple:
        return (self.left.identity, self.right.identity)

    def mul(self, a: tuple, b: tuple) -> tuple:
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a: tuple) -> tuple:
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def equal(self, a: tuple, b: tuple) -> bool:
        return self.left.equal(a[0], b[0]) and self.right.equal(a[1], b[1])

    def is_identity(self, a: tuple) -> bool:
        return self.left.is_identity(a[0]) and self.right.is_identity(a[1])

    def canonical(self, a: tuple) -> tuple:
        return (self.left.canonical(a[0]), self.right.canonical(a[1]))

    def conjugacy_key(self, a: tuple) -> tuple:
        return (self.left.conjugacy_key(a[0]), self.right.conjugacy_key(a[1]))

    def format(self, a: tuple) -> str:
        return f"({self.left.format(a[0])},{self.right.format(a[1])})"

    def parse(self, text: str) -> tuple:
        s = text.strip()
        if s in ("1", "e"):
            return self.identity
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"expected a pair '(a,b)', got {text!r}")
        parts = split_top_level(s[1:-1])
        if len(parts) != 2:
            raise ValueError(f"expected exactly two components in {text!r}")
        return (self.left.parse(parts[0]), self.right.parse(parts[1]))
