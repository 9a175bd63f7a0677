"""Finite presentations: relation matrices, H_1, H_2 of the presentation complex, Fox calculus."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .snf import IntMatrix, SmithForm, smith_normal_form
from .words import (
    FreeWord,
    Gen,
    WordSyntaxError,
    commutator,
    exponent_sum,
    parse_gen,
    parse_word_span,
)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[Gen, ...]
    relators: tuple[FreeWord, ...] = ()
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator")
        declared = set(self.generators)
        for r in self.relators:
            extra = r.generators() - declared
            if extra:
                raise ValueError(f"relator {r} uses undeclared generators {sorted(map(str, extra))}")

    def __str__(self) -> str:
        gens = " ".join(map(str, self.generators))
        rels = ", ".join(map(str, self.relators))
        return f"< {gens} | {rels} >"


@dataclass(frozen=True)
class AbelianGroupShape:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(d <= 1 for d in self.torsion):
            raise ValueError("invariant factors must exceed 1")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("invariant factors must form a divisibility chain")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_infinite_cyclic(self) -> bool:
        return self.free_rank == 1 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}


def relation_matrix(P: Presentation) -> IntMatrix:
    """Row i, column j: exponent sum of generator j in relator i."""
    return IntMatrix.from_rows(
        [[exponent_sum(r, g) for g in P.generators] for r in P.relators],
        cols=len(P.generators),
    )


def _snf(P: Presentation) -> SmithForm:
    return smith_normal_form(relation_matrix(P))


def abelianization(P: Presentation) -> AbelianGroupShape:
    snf = _snf(P)
    nonzero = [d for d in snf.diagonal if d]
    return AbelianGroupShape(len(P.generators) - len(nonzero), tuple(d for d in nonzero if d > 1))


def h2_complex_rank(P: Presentation) -> int:
    """Rank of ker(d_2: Z^relators -> Z^generators) for the presentation 2-complex.

    This is H_2 of the complex; it equals H_2(G) only if the complex is aspherical.
    """
    return len(P.relators) - _snf(P).rank


def deficiency(P: Presentation) -> int:
    """Generators minus relators of this presentation (not the group invariant def(G))."""
    return len(P.generators) - len(P.relators)


def bg_hypothesis_h1(P: Presentation) -> bool:
    """H_1 half of the Baumslag-Gruenberg hypothesis: G_ab is infinite cyclic."""
    return abelianization(P).is_infinite_cyclic()


# --- Fox calculus ------------------------------------------------------------


@dataclass(frozen=True)
class FoxSum:
    """Finite integer combination of free-group words (an element of Z[F])."""

    terms: tuple[tuple[FreeWord, int], ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[tuple[FreeWord, int]]) -> FoxSum:
        acc: dict[FreeWord, int] = {}
        for w, c in pairs:
            acc[w] = acc.get(w, 0) + c
        return cls(tuple(sorted(((w, c) for w, c in acc.items() if c), key=lambda t: str(t[0]))))

    def as_dict(self) -> dict[FreeWord, int]:
        return dict(self.terms)

    def __add__(self, other: FoxSum) -> FoxSum:
        return FoxSum.of(self.terms + other.terms)

    def __neg__(self) -> FoxSum:
        return FoxSum(tuple((w, -c) for w, c in self.terms))

    def left_mul(self, u: FreeWord) -> FoxSum:
        return FoxSum.of((u * w, c) for w, c in self.terms)

    def augmentation(self) -> int:
        return sum(c for _, c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*({w})" for w, c in self.terms)


def fox_derivative(w: FreeWord, g: Gen | str) -> FoxSum:
    """Fox derivative d w / d g, from d(uv) = du + u dv.

    d(g^n)/dg = 1 + g + ... + g^(n-1) for n > 0 and -(g^-1 + ... + g^n) for n < 0.
    """
    if isinstance(g, str):
        g = Gen(g)
    out: list[tuple[FreeWord, int]] = []
    prefix = FreeWord()
    for h, e in w.syllables:
        if h == g:
            if e > 0:
                out.extend((prefix * FreeWord.gen(g, k), 1) for k in range(e))
            else:
                out.extend((prefix * FreeWord.gen(g, -k), -1) for k in range(1, -e + 1))
        prefix = prefix * FreeWord.gen(h, e)
    return FoxSum.of(out)


# --- fixtures ------------------------------------------------------------------


def _eq(lhs: FreeWord, rhs: FreeWord) -> FreeWord:
    # a = b is stored as a^-1 b
    return lhs.inverse() * rhs


def higman(k: int) -> Presentation:
    """< x_0..x_{k-1} | x_{i+1} = [x_i, x_{i+1}], i in Z/k >."""
    if k < 1:
        raise ValueError("higman(k) needs k >= 1")
    xs = [Gen("x", (i,)) for i in range(k)]
    rels = []
    for i in range(k):
        a, b = FreeWord.gen(xs[i]), FreeWord.gen(xs[(i + 1) % k])
        rels.append(_eq(b, commutator(a, b)))
    return Presentation(tuple(xs), tuple(rels), name=f"higman:{k}")


def epstein() -> Presentation:
    """< x, y | x = [x, y x^-1 y^-1][x, y^-1 x y] >."""
    x, y = FreeWord.gen("x"), FreeWord.gen("y")
    rhs = commutator(x, y * ~x * ~y) * commutator(x, ~y * x * y)
    return Presentation((Gen("x"), Gen("y")), (_eq(x, rhs),), name="epstein")


def higman_two_gen() -> Presentation:
    """< x, y | x [x, y x y^-1], [x, y^4] >, whose commutator subgroup is Higman's group."""
    x, y = FreeWord.gen("x"), FreeWord.gen("y")
    rels = (x * commutator(x, y * x * ~y), commutator(x, y ** 4))
    return Presentation((Gen("x"), Gen("y")), rels, name="higman_two_gen")


def torus() -> Presentation:
    x, y = FreeWord.gen("x"), FreeWord.gen("y")
    return Presentation((Gen("x"), Gen("y")), (commutator(x, y),), name="torus")


def free(n: int) -> Presentation:
    names = ["x", "y", "z"] if n <= 3 else [f"x{i}" for i in range(n)]
    return Presentation(tuple(Gen(s) for s in names[:n]), (), name=f"free:{n}")


def standard_presentation(name: str, k: int | None = None) -> Presentation:
    """Fixture lookup: ``higman`` (needs k), ``epstein``, ``higman_two_gen``, ``torus``, ``free`` (k gens).

    ``name`` may carry its parameter inline, as in ``"higman:4"``.
    """
    if ":" in name:
        name, arg = name.split(":", 1)
        k = int(arg)
    if name == "higman":
        if k is None:
            raise ValueError("higman needs a parameter k")
        return higman(k)
    if name == "epstein":
        return epstein()
    if name == "higman_two_gen":
        return higman_two_gen()
    if name == "torus":
        return torus()
    if name == "free":
        return free(1 if k is None else k)
    raise KeyError(f"unknown presentation {name!r}")


# --- DSL -----------------------------------------------------------------------


class PresentationSyntaxError(WordSyntaxError):
    pass


_STMT = re.compile(r"\s*(gens|rels)\s*:", re.A)


def _split(text: str, start: int, end: int, sep: str) -> list[tuple[int, int]]:
    """Top-level spans of text[start:end] separated by ``sep`` (brackets respected)."""
    spans, depth, s = [], 0, start
    for i in range(start, end):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            spans.append((s, i))
            s = i + 1
    spans.append((s, end))
    return spans


def parse_presentation(text: str) -> Presentation:
    """Parse ``gens: x y; rels: x = [x, y x' y'] [x, y' x y];``.

    Statements end with ``;``; relators are separated by top-level commas;
    ``a = b`` becomes the relator ``a^-1 b``; ``#`` starts a comment.
    Without a ``gens:`` statement generators are taken in order of appearance.
    """
    # blank out comments, keeping offsets for error positions
    src = re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)
    gens: list[Gen] | None = None
    rels: list[tuple[FreeWord, int, int]] = []
    seen: dict[Gen, int] = {}  # generator -> first position in a relator
    for s, e in _split(src, 0, len(src), ";"):
        if not src[s:e].strip():
            continue
        m = _STMT.match(src, s, e)
        if not m:
            lead = s + len(src[s:e]) - len(src[s:e].lstrip())
            raise PresentationSyntaxError("expected 'gens:' or 'rels:'", text, lead)
        if m.group(1) == "gens":
            gens = gens or []
            for tok in re.finditer(r"[^\s,]+", src[m.end():e]):
                ident = tok.group(0)
                if not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*(?:_\d+)*", ident):
                    raise PresentationSyntaxError(f"bad generator name {ident!r}", text, m.end() + tok.start())
                gens.append(parse_gen(ident))
        else:
            for rs, re_ in _split(src, m.end(), e, ","):
                if not src[rs:re_].strip():
                    raise PresentationSyntaxError("empty relator", text, rs)
                sides = _split(src, rs, re_, "=")
                if len(sides) > 2:
                    raise PresentationSyntaxError("more than one '=' in relation", text, sides[2][0] - 1)
                try:
                    words = [parse_word_span(src, a, b) for a, b in sides]
                except WordSyntaxError as exc:
                    raise PresentationSyntaxError(exc.message, text, exc.pos) from None
                w = words[0] if len(words) == 1 else _eq(words[0], words[1])
                rels.append((w, rs, re_))
                for g in re.finditer(r"[A-Za-z][A-Za-z0-9]*(?:_\d+)*", src[rs:re_]):
                    seen.setdefault(parse_gen(g.group(0)), rs + g.start())
    if gens is None:
        gens = list(seen)
    declared = set(gens)
    for g, pos in seen.items():
        if g not in declared:
            raise PresentationSyntaxError(f"undeclared generator {str(g)!r}", text, pos)
    try:
        return Presentation(tuple(gens), tuple(w for w, _, _ in rels))
    except ValueError as exc:
        raise PresentationSyntaxError(str(exc), text, 0) from None


def format_presentation(P: Presentation) -> str:
    gens = " ".join(map(str, P.generators))
    rels = ", ".join(_dsl_word(r) for r in P.relators)
    return f"gens: {gens}; rels: {rels};"


def _dsl_word(w: FreeWord) -> str:
    return str(w) if w else "1"


# --- report --------------------------------------------------------------------


def homology_report(P: Presentation) -> dict:
    snf = _snf(P)
    ab = abelianization(P)
    return {
        "presentation": format_presentation(P),
        "name": P.name,
        "h1": ab.to_json(),
        "h1_text": str(ab),
        "h2_complex": h2_complex_rank(P),
        "aspherical_assumed": False,
        "deficiency": deficiency(P),
        "snf_diag": snf.diagonal,
        "snf_verified": snf.verify(),
        "bg_hypothesis_h1": ab.is_infinite_cyclic(),
    }


def presentation_from_table(
    elements: list, mul, name_of: Mapping | None = None, prefix: str = "g"
) -> Presentation:
    """Multiplication-table presentation: one generator per non-identity element."""
    ident = next(x for x in elements if all(mul(x, y) == y for y in elements))
    others = [x for x in elements if x != ident]
    gen = {x: Gen(prefix, (i,)) for i, x in enumerate(others)}

    def word(x) -> FreeWord:
        return FreeWord() if x == ident else FreeWord.gen(gen[x])

    rels = []
    for a in others:
        for b in others:
            r = word(a) * word(b) * word(mul(a, b)).inverse()
            if r:
                rels.append(r)
    return Presentation(tuple(gen[x] for x in others), tuple(rels))
