"""Permutations on {1..n} with disjoint-cycle I/O.

Products compose right to left: ``(p * q)(i) == p(q(i))``.  Ordering is
lexicographic on image sequences, which gives every finite group a
deterministic element order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class PermutationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    # 0-based internally; printed 1-based
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise PermutationError(f"not a bijection: {self.images!r}")

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> Permutation:
        """Build from 1-based images, ``images[i-1]`` being the image of ``i``."""
        return cls(tuple(i - 1 for i in images))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        result = cls.identity(degree)
        for cyc in cycles:
            result = result * cls._cycle(cyc, degree)
        return result

    @classmethod
    def _cycle(cls, cyc: Sequence[int], degree: int) -> Permutation:
        if len(set(cyc)) != len(cyc):
            raise PermutationError(f"repeated point in cycle {tuple(cyc)}")
        img = list(range(degree))
        for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
            if not 1 <= a <= degree:
                raise PermutationError(f"point {a} outside 1..{degree}")
            img[a - 1] = b - 1
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise PermutationError(f"degree mismatch: {self.degree} vs {other.degree}")
        img = self.images
        return Permutation(tuple(img[j] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, n: int) -> Permutation:
        base = self if n >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(n)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        from math import lcm

        n = 1
        for cyc in self.cycles():
            n = lcm(n, len(cyc))
        return n

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point (1-based)."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i + 1)
                i = self.images[i]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({self})"


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """``a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> Permutation:
    """Parse disjoint-cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity.

    Cycles are multiplied right to left, so non-disjoint input is accepted
    and means the product.  Without ``degree`` the largest point is used.
    """
    s = text.strip()
    pos = 0
    cycles: list[tuple[int, ...]] = []
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(s, pos)
        if not m:
            raise PermutationError(f"bad cycle notation at column {pos + 1}: {text!r}")
        body = m.group(1).replace(",", " ").split()
        try:
            cycles.append(tuple(int(x) for x in body))
        except ValueError:
            raise PermutationError(f"non-integer point in {m.group(0)!r}") from None
        pos = m.end()
    if not s:
        raise PermutationError("empty permutation text")
    top = max((p for c in cycles for p in c), default=1)
    if degree is None:
        degree = top
    elif top > degree:
        raise PermutationError(f"point {top} exceeds degree {degree}")
    return Permutation.from_cycles(cycles, degree)


def parse_generators(text: str, degree: int | None = None) -> list[Permutation]:
    """Parse a comma-separated generator list like ``"(1 2),(1 2 3)"`` at a common degree."""
    parts = [p for p in _split_top_level(text) if p.strip()]
    if degree is None:
        perms = [parse_cycles(p) for p in parts]
        degree = max((p.degree for p in perms), default=1)
    return [parse_cycles(p, degree) for p in parts]


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts
