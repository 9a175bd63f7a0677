"""Free-group words in syllable (run-length) form.

A word is a tuple of ``(Gen, exponent)`` syllables with nonzero exponents and
distinct adjacent generators.  The commutator convention is
``[u, v] = u v u^-1 v^-1`` throughout the package.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence, TypeVar


class Gen(NamedTuple):
    name: str
    index: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.index:
            return self.name
        return self.name + "_" + "_".join(map(str, self.index))


Syllable = tuple[Gen, int]


def reduce(raw: Iterable[Syllable]) -> tuple[Syllable, ...]:
    """Freely reduce a syllable sequence (merge runs, drop zero exponents)."""
    out: list[list] = []
    for g, e in raw:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class FreeWord:
    syllables: tuple[Syllable, ...] = ()

    @classmethod
    def of(cls, raw: Iterable[Syllable]) -> FreeWord:
        return cls(reduce(raw))

    @classmethod
    def gen(cls, g: Gen | str, e: int = 1) -> FreeWord:
        if isinstance(g, str):
            g = Gen(g)
        return cls(reduce([(g, e)]))

    def __mul__(self, other: FreeWord) -> FreeWord:
        if not other.syllables:
            return self
        if not self.syllables:
            return other
        return FreeWord(reduce(self.syllables + other.syllables))

    def inverse(self) -> FreeWord:
        return FreeWord(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __invert__(self) -> FreeWord:
        return self.inverse()

    def __pow__(self, n: int) -> FreeWord:
        base = self if n >= 0 else self.inverse()
        out = FreeWord()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __len__(self) -> int:
        """Letter length."""
        return sum(abs(e) for _, e in self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def generators(self) -> set[Gen]:
        return {g for g, _ in self.syllables}

    def letters(self) -> list[tuple[Gen, int]]:
        out = []
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            out.extend([(g, s)] * abs(e))
        return out

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for g, e in self.syllables:
            parts.append(str(g) if e == 1 else f"{g}^{e}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"FreeWord({self})"


def multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    return u * v


def invert(u: FreeWord) -> FreeWord:
    return u.inverse()


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    return FreeWord(reduce(u.syllables + v.syllables + u.inverse().syllables + v.inverse().syllables))


def exponent_sum(w: FreeWord, g: Gen | str) -> int:
    if isinstance(g, str):
        g = Gen(g)
    return sum(e for h, e in w.syllables if h == g)


def cyclically_reduce(w: FreeWord) -> FreeWord:
    syl = list(w.syllables)
    while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
        g, e = syl[0][0], syl[0][1] + syl[-1][1]
        syl = syl[1:-1]
        if e:
            # merged syllable conjugated to the end; its neighbours differ from g
            syl = syl + [(g, e)]
            break
    return FreeWord(tuple(syl))


def _letter_key(w: tuple[Syllable, ...]) -> list[tuple]:
    key = []
    for g, e in w:
        key.extend([(g, 0 if e > 0 else 1)] * abs(e))
    return key


def cyclic_normal_form(w: FreeWord) -> FreeWord:
    """Cyclically reduce, then take the least rotation at a syllable boundary.

    Letters compare by generator then sign (``x < x^-1 < y``).  Two words are
    conjugate in the free group iff their normal forms are equal.
    """
    c = cyclically_reduce(w).syllables
    if len(c) <= 1:
        return FreeWord(c)
    rotations = [c[i:] + c[:i] for i in range(len(c))]
    return FreeWord(min(rotations, key=_letter_key))


def are_conjugate(u: FreeWord, v: FreeWord) -> bool:
    return cyclic_normal_form(u) == cyclic_normal_form(v)


T = TypeVar("T")


def evaluate(
    w: FreeWord,
    images: Mapping[Gen, T] | Callable[[Gen], T],
    mul: Callable[[T, T], T],
    inv: Callable[[T], T],
    identity: T,
) -> T:
    """Image of ``w`` under the homomorphism determined by generator images."""
    look = images if callable(images) else images.__getitem__
    out = identity
    for g, e in w.syllables:
        x = look(g)
        if e < 0:
            x = inv(x)
        for _ in range(abs(e)):
            out = mul(out, x)
    return out


def substitute(w: FreeWord, images: Mapping[Gen, FreeWord]) -> FreeWord:
    """Apply the free-group endomorphism sending ``g`` to ``images[g]`` (others fixed)."""
    raw: list[Syllable] = []
    for g, e in w.syllables:
        img = images.get(g)
        if img is None:
            raw.append((g, e))
            continue
        piece = img.syllables if e > 0 else img.inverse().syllables
        raw.extend(piece * abs(e))
    return FreeWord.of(raw)


def random_word(rng: random.Random, gens: Sequence[Gen], max_len: int) -> FreeWord:
    """Uniform length in ``0..max_len``, letters uniform over ``gens`` and signs; then reduced."""
    n = rng.randint(0, max_len)
    return FreeWord.of((rng.choice(gens), rng.choice((1, -1))) for _ in range(n))


# --- text syntax -----------------------------------------------------------


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.pos = pos
        self.line = line
        self.column = col


_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9]*(?:_\d+)*)|(?P<one>1)|(?P<pow>\^\s*-?\d+)|(?P<sym>['\[\](),]))"
)


def parse_gen(ident: str) -> Gen:
    """``x`` -> Gen('x'); ``x_0_1`` -> Gen('x', (0, 1))."""
    name, *idx = ident.split("_")
    return Gen(name, tuple(int(i) for i in idx))


class _Parser:
    def __init__(self, text: str, offset: int = 0, end: int | None = None, source: str | None = None):
        self.text = text
        self.pos = offset
        self.end = len(text) if end is None else end
        self.source = text if source is None else source

    def peek(self):
        m = _TOKEN.match(self.text, self.pos, self.end)
        if not m or m.end() == self.pos:
            rest = self.text[self.pos:self.end]
            if rest.strip():
                raise WordSyntaxError(f"unexpected character {rest.strip()[0]!r}", self.source,
                                      self.pos + len(rest) - len(rest.lstrip()))
            return None
        return m

    def error(self, msg: str, m=None):
        pos = m.start(m.lastgroup) if m else self.pos
        return WordSyntaxError(msg, self.source, pos)

    def word(self, stop: str = "") -> FreeWord:
        out = FreeWord()
        while True:
            m = self.peek()
            if m is None or (m.group("sym") and m.group("sym") in stop + ")]"):
                return out
            out = out * self.factor()

    def factor(self) -> FreeWord:
        m = self.peek()
        if m is None:
            raise self.error("unexpected end of input")
        self.pos = m.end()
        if m.group("ident"):
            w = FreeWord.gen(parse_gen(m.group("ident")))
        elif m.group("one"):
            w = FreeWord()
        elif m.group("sym") == "(":
            w = self.word()
            self.expect(")")
        elif m.group("sym") == "[":
            u = self.word(stop=",")
            self.expect(",")
            v = self.word()
            self.expect("]")
            w = commutator(u, v)
        else:
            raise self.error(f"unexpected {m.group(m.lastgroup)!r}", m)
        while True:
            m = self.peek()
            if m is None:
                return w
            if m.group("sym") == "'":
                w = w.inverse()
            elif m.group("pow"):
                w = w ** int(m.group("pow")[1:].strip())
            else:
                return w
            self.pos = m.end()

    def expect(self, sym: str) -> None:
        m = self.peek()
        if m is None or m.group("sym") != sym:
            raise self.error(f"expected {sym!r}", m)
        self.pos = m.end()

    def finish(self) -> None:
        m = self.peek()
        if m is not None:
            raise self.error(f"unexpected {m.group(m.lastgroup)!r}", m)


def parse_word(text: str) -> FreeWord:
    """Parse ``x y' [x, y^2] (x y)^-1``; ``'`` and ``^-1`` both invert, ``1`` is the identity."""
    p = _Parser(text)
    w = p.word()
    p.finish()
    return w


def parse_word_span(source: str, start: int, end: int) -> FreeWord:
    """Parse ``source[start:end]`` reporting errors against positions in ``source``."""
    p = _Parser(source, start, end, source)
    w = p.word()
    p.finish()
    return w
