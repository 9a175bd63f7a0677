"""HNN extensions with a Britton-reduction word problem.

An edge carries decision procedures, not enumerated sets: membership tests
for the associated subgroups A and B and the isomorphism theta: A -> B, with
defining relations ``t a t^-1 = theta(a)`` for a in A.  When the base is
itself an HNN extension (or a product of them) the membership tests recurse
into the lower word problem, which is what makes binate towers decidable
level by level.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .handles import GroupHandle

DEFAULT_LETTER_BUDGET = 4096
DEFAULT_NESTING_CAP = 16


class ReductionBudgetExceeded(RuntimeError):
    """A word outgrew the configured stable-letter budget."""


class ReductionDepthError(RuntimeError):
    """Membership-oracle recursion went deeper than the nesting cap (configuration error)."""


@dataclass(frozen=True)
class Edge:
    label: str
    in_domain: Callable[[Any], bool]  # a in A
    in_image: Callable[[Any], bool]  # b in B
    theta: Callable[[Any], Any]  # A -> B
    theta_inv: Callable[[Any], Any]  # B -> A


@dataclass(frozen=True)
class HnnWord:
    """``b_0 t^e_1 b_1 ... t^e_m b_m``; ``letters[k] = (edge index, +-1)``."""

    bases: tuple
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if len(self.bases) != len(self.letters) + 1:
            raise ValueError("an HNN word needs one more base syllable than stable letters")

    @property
    def length(self) -> int:
        return len(self.letters)


_depth = threading.local()


class HnnExtension(GroupHandle):
    """HNN(base; A_i ~ B_i, t_i) with one stable letter per edge."""

    has_canonical_form = False

    def __init__(
        self,
        base: GroupHandle,
        edges: Sequence[Edge],
        letter_budget: int = DEFAULT_LETTER_BUDGET,
        nesting_cap: int = DEFAULT_NESTING_CAP,
        name: str | None = None,
    ):
        self.base = base
        self.edges = tuple(edges)
        labels = [e.label for e in self.edges]
        if len(set(labels)) != len(labels):
            raise ValueError("stable letter labels must be distinct")
        self._label_index = {lab: i for i, lab in enumerate(labels)}
        self.letter_budget = letter_budget
        self.nesting_cap = nesting_cap
        self.name = name

    def __repr__(self) -> str:
        return f"<HnnExtension {self.name or ''} over {self.base!r} with {len(self.edges)} edge(s)>"

    # construction

    @property
    def identity(self) -> HnnWord:
        return HnnWord((self.base.identity,))

    def embed(self, b: Any) -> HnnWord:
        return HnnWord((b,))

    def letter(self, edge: int | str, eps: int = 1) -> HnnWord:
        i = self._label_index[edge] if isinstance(edge, str) else edge
        e = self.base.identity
        return HnnWord((e, e), ((i, eps),))

    def stable_letters(self) -> list[HnnWord]:
        return [self.letter(i) for i in range(len(self.edges))]

    # group structure

    def mul(self, u: HnnWord, v: HnnWord) -> HnnWord:
        merged = self.base.mul(u.bases[-1], v.bases[0])
        w = HnnWord(u.bases[:-1] + (merged,) + v.bases[1:], u.letters + v.letters)
        return self.reduce(w)

    def inv(self, u: HnnWord) -> HnnWord:
        return HnnWord(
            tuple(self.base.inv(b) for b in reversed(u.bases)),
            tuple((i, -e) for i, e in reversed(u.letters)),
        )

    def reduce(self, w: HnnWord) -> HnnWord:
        """Britton reduction: remove pinches ``t a t^-1`` (a in A) and ``t^-1 b t`` (b in B).

        Letters are pushed left to right onto a stack, so the leftmost
        innermost pinch always goes first.  The result has no pinches; by
        Britton's lemma it is trivial iff it has no stable letters and a
        trivial base syllable.
        """
        if len(w.letters) > self.letter_budget:
            raise ReductionBudgetExceeded(
                f"{len(w.letters)} stable letters exceeds budget {self.letter_budget}"
            )
        level = getattr(_depth, "n", 0)
        if level >= self.nesting_cap:
            raise ReductionDepthError(f"membership recursion deeper than {self.nesting_cap}")
        _depth.n = level + 1
        try:
            base = self.base
            bases = [w.bases[0]]
            letters: list[tuple[int, int]] = []
            for (i, eps), b in zip(w.letters, w.bases[1:]):
                if letters and letters[-1][0] == i and letters[-1][1] == -eps:
                    mid = bases[-1]
                    edge = self.edges[i]
                    repl = None
                    if eps == -1 and edge.in_domain(mid):
                        repl = edge.theta(mid)
                    elif eps == 1 and edge.in_image(mid):
                        repl = edge.theta_inv(mid)
                    if repl is not None:
                        letters.pop()
                        bases.pop()
                        bases[-1] = base.mul(base.mul(bases[-1], repl), b)
                        continue
                letters.append((i, eps))
                bases.append(b)
            return HnnWord(tuple(bases), tuple(letters))
        finally:
            _depth.n = level

    def is_reduced(self, w: HnnWord) -> bool:
        for k in range(1, len(w.letters)):
            (i, e), (j, f) = w.letters[k - 1], w.letters[k]
            if i == j and e == -f:
                edge, mid = self.edges[i], w.bases[k]
                if (e == 1 and edge.in_domain(mid)) or (e == -1 and edge.in_image(mid)):
                    return False
        return True

    def is_identity(self, w: HnnWord) -> bool:
        r = self.reduce(w)
        return not r.letters and self.base.is_identity(r.bases[0])

    def equal(self, u: HnnWord, v: HnnWord) -> bool:
        return self.is_identity(self.mul(u, self.inv(v)))

    def canonical(self, w: HnnWord):
        raise NotImplementedError("HNN words have no canonical form here; use equal()")

    # text I/O

    def format(self, w: HnnWord) -> str:
        parts = []
        for k, b in enumerate(w.bases):
            if not self.base.is_identity(b):
                parts.append(self._wrap(self.base.format(b)))
            if k < len(w.letters):
                i, e = w.letters[k]
                parts.append(self.edges[i].label + ("" if e == 1 else "'"))
        return " ".join(parts) or "1"

    @staticmethod
    def _wrap(s: str) -> str:
        return s if s.startswith("(") and _balanced_outer(s) else f"[{s}]"

    def parse(self, text: str) -> HnnWord:
        """Stable letters by label (``u0``, ``t1'``, ``u0^-1``), base syllables in parentheses
        or square brackets using the base syntax; juxtaposition multiplies."""
        out = self.identity
        pos, s = 0, text.strip()
        if s in ("1", "e"):
            return out
        while pos < len(s):
            ch = s[pos]
            if ch.isspace():
                pos += 1
                continue
            if ch in "([":
                end = _match_bracket(s, pos)
                chunk = s[pos:end + 1]
                inner = chunk[1:-1] if ch == "[" else chunk
                x = self.embed(self.base.parse(inner))
                pos = end + 1
            else:
                m = re.match(r"[A-Za-z]\w*", s[pos:])
                if not m or m.group(0) not in self._label_index:
                    raise ValueError(f"unknown token at column {pos + 1} in {text!r}")
                x = self.letter(m.group(0))
                pos += m.end()
            m = re.match(r"\s*(?:(')|\^\s*(-?\d+))", s[pos:])
            if m:
                x = self.inv(x) if m.group(1) else self.power(x, int(m.group(2)))
                pos += m.end()
            out = self.mul(out, x)
        return out


def _match_bracket(s: str, start: int) -> int:
    depth = 0
    for k in range(start, len(s)):
        if s[k] in "([":
            depth += 1
        elif s[k] in ")]":
            depth -= 1
            if depth == 0:
                return k
    raise ValueError(f"unbalanced brackets in {s!r}")


def _balanced_outer(s: str) -> bool:
    try:
        return _match_bracket(s, 0) == len(s) - 1
    except ValueError:
        return False


def britton_reduce(E: HnnExtension, w: HnnWord) -> HnnWord:
    return E.reduce(w)


def is_trivial(E: GroupHandle, w: Any) -> bool:
    return E.is_identity(w)


def equal(E: GroupHandle, u: Any, v: Any) -> bool:
    return E.equal(u, v)


def element_order_bounded(E: GroupHandle, w: Any, bound: int) -> int | None:
    """Least n <= bound with w^n trivial, or None ("exceeds bound")."""
    x = w
    for n in range(1, bound + 1):
        if E.is_identity(x):
            return n
        x = E.mul(x, w)
    return None
