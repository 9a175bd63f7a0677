"""Minimal grope levels, the F_{n,r} direct systems, and Heller certificates.

Level bases are free, so a homomorphism out of a level is just an assignment
of its basis.  Infinite limits are never built; everything takes an explicit
depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Sequence

from .finite import FiniteGroup, NotInGroup, commutator_decompose, perfect_radical
from .perm import Permutation, parse_cycles
from .snf import IntMatrix
from .words import FreeWord, Gen, commutator, evaluate, parse_gen, parse_word


class NotInPerfectRadical(ValueError):
    pass


# --- minimal grope ---------------------------------------------------------------


def grope_gen(w: Sequence[int] | str) -> Gen:
    """``x_w`` for a bit string ``w`` (``"01"`` or ``(0, 1)``)."""
    bits = tuple(int(b) for b in w)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a bit string: {w!r}")
    return Gen("x", bits)


def grope_level(n: int) -> list[Gen]:
    """Basis of level n: ``x_w`` for all 2^n bit strings of length n."""
    return [Gen("x", bits) for bits in product((0, 1), repeat=n)]


def grope_inclusion_word(g: Gen) -> FreeWord:
    """``x_w -> [x_{w0}, x_{w1}]``."""
    w = g.index
    return commutator(FreeWord.gen(Gen("x", w + (0,))), FreeWord.gen(Gen("x", w + (1,))))


def grope_expand(g: Gen, depth: int) -> FreeWord:
    """Image of ``x_w`` in the level ``depth`` steps further down."""
    if depth == 0:
        return FreeWord.gen(g)
    a = grope_expand(Gen("x", g.index + (0,)), depth - 1)
    b = grope_expand(Gen("x", g.index + (1,)), depth - 1)
    return commutator(a, b)


# --- F_{n,r} -------------------------------------------------------------------


def f_gen(r: int, eps: Sequence[int], idx: Sequence[int]) -> Gen:
    """``x_r(eps_1..eps_r; i_1..i_r)``."""
    return Gen(f"x{r}", tuple(eps) + tuple(idx))


def _split_f_gen(g: Gen) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    if not g.name.startswith("x") or not g.name[1:].isdigit():
        raise ValueError(f"{g} is not an F-system generator")
    r = int(g.name[1:])
    if len(g.index) != 2 * r:
        raise ValueError(f"{g} has malformed index for level {r}")
    return r, g.index[:r], g.index[r:]


def f_system_level(prefix: Sequence[int], r: int) -> list[Gen]:
    """Basis of F_{n,r}: 2^r * n_1 ... n_r symbols."""
    if r > len(prefix):
        raise ValueError(f"level {r} needs n_1..n_{r}; only {len(prefix)} given")
    if any(k < 1 for k in prefix[:r]):
        raise ValueError("sequence entries must be positive")
    ranges = [range(1, k + 1) for k in prefix[:r]]
    return [
        f_gen(r, eps, idx)
        for eps in product((0, 1), repeat=r)
        for idx in product(*ranges)
    ]


def f_system_phi(prefix: Sequence[int], r: int, g: Gen) -> FreeWord:
    """phi_r(x_r(e; i)) = prod_{k=1}^{n_{r+1}} [x_{r+1}(e,0; i,k), x_{r+1}(e,1; i,k)]."""
    lvl, eps, idx = _split_f_gen(g)
    if lvl != r:
        raise ValueError(f"{g} is not on level {r}")
    if r + 1 > len(prefix):
        raise ValueError(f"phi_{r} needs n_{r + 1}")
    for i, n in zip(idx, prefix):
        if not 1 <= i <= n:
            raise IndexError(f"index {i} out of range 1..{n} in {g}")
    if any(e not in (0, 1) for e in eps):
        raise IndexError(f"epsilon outside {{0,1}} in {g}")
    out = FreeWord()
    for k in range(1, prefix[r] + 1):
        a = FreeWord.gen(f_gen(r + 1, eps + (0,), idx + (k,)))
        b = FreeWord.gen(f_gen(r + 1, eps + (1,), idx + (k,)))
        out = out * commutator(a, b)
    return out


def f_system_size(prefix: Sequence[int], r: int) -> int:
    return 2 ** r * prod(prefix[:r])


# --- abelianized connecting maps ------------------------------------------------


def abelianized_connecting_map(source: Sequence[Gen], target: Sequence[Gen], phi) -> IntMatrix:
    """Matrix of the induced map on abelianizations (row = source generator)."""
    col = {t: j for j, t in enumerate(target)}
    rows = []
    for s in source:
        row = [0] * len(target)
        for g, e in phi(s).syllables:
            row[col[g]] += e
        rows.append(row)
    return IntMatrix.from_rows(rows, cols=len(target))


def grope_connecting_map(n: int) -> IntMatrix:
    return abelianized_connecting_map(grope_level(n), grope_level(n + 1), grope_inclusion_word)


def f_system_connecting_map(prefix: Sequence[int], r: int) -> IntMatrix:
    return abelianized_connecting_map(
        f_system_level(prefix, r),
        f_system_level(prefix, r + 1),
        lambda g: f_system_phi(prefix, r, g),
    )


def images_disjoint(words: Sequence[FreeWord]) -> bool:
    """No generator occurs in the images of two different source generators."""
    seen: set[Gen] = set()
    for w in words:
        gens = w.generators()
        if gens & seen:
            return False
        seen |= gens
    return True


# --- Heller certificates ----------------------------------------------------------


@dataclass(frozen=True)
class CertNode:
    level: int
    generator: Gen
    word: FreeWord | None  # phi-image over the next level; None on the last level
    assigned_image: Permutation


@dataclass(frozen=True)
class HellerCertificate:
    """A homomorphism F_{n,d} -> P (the level-d assignment) sending x_0 to ``target``.

    ``nodes`` records, for every generator of levels 0..d, its phi-word and
    the value it takes; only the level-d values are needed to verify.
    """

    degree: int
    target: Permutation
    depth: int
    sequence: tuple[int, ...]
    nodes: tuple[CertNode, ...]

    def raw_assignment(self) -> dict[Gen, Permutation]:
        return {n.generator: n.assigned_image for n in self.nodes if n.level == self.depth}

    def to_json(self) -> dict:
        return {
            "target": str(self.target),
            "degree": self.degree,
            "depth": self.depth,
            "sequence": list(self.sequence),
            "nodes": [
                {
                    "level": n.level,
                    "generator": str(n.generator),
                    "word": None if n.word is None else str(n.word),
                    "assigned_image": str(n.assigned_image),
                }
                for n in self.nodes
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> HellerCertificate:
        deg = data["degree"]
        nodes = tuple(
            CertNode(
                n["level"],
                parse_gen(n["generator"]),
                None if n["word"] is None else parse_word(n["word"]),
                parse_cycles(n["assigned_image"], deg),
            )
            for n in data["nodes"]
        )
        return cls(deg, parse_cycles(data["target"], deg), data["depth"], tuple(data["sequence"]), nodes)


def heller_certificate(P: FiniteGroup, x: Permutation, depth: int) -> HellerCertificate:
    """Depth-``depth`` certificate that ``x`` lies in the image of some F_n -> P.

    Each value is split into the fewest commutators inside the perfect radical;
    n_{r+1} is the largest count needed on level r, shorter products padded
    with [e, e].
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if x not in P:
        raise NotInGroup(f"{x} is not in {P!r}")
    R = perfect_radical(P)
    if x not in R:
        raise NotInPerfectRadical(f"{x} not in perfect radical")
    Rg = R.as_group()
    e = P.identity
    decomp_cache: dict[Permutation, list[tuple[Permutation, Permutation]]] = {}

    def decompose(v: Permutation) -> list[tuple[Permutation, Permutation]]:
        if v not in decomp_cache:
            pairs = commutator_decompose(Rg, v)
            if pairs is None:
                raise NotInPerfectRadical(f"{v} not in perfect radical")
            decomp_cache[v] = pairs
        return decomp_cache[v]

    level_vals: dict[Gen, Permutation] = {f_gen(0, (), ()): x}
    sequence: list[int] = []
    nodes: list[CertNode] = []
    for r in range(depth):
        splits = {g: decompose(v) for g, v in level_vals.items()}
        n_next = max(len(p) for p in splits.values())
        sequence.append(n_next)
        nxt: dict[Gen, Permutation] = {}
        for g, v in level_vals.items():
            pairs = splits[g] + [(e, e)] * (n_next - len(splits[g]))
            _, eps, idx = _split_f_gen(g)
            for k, (a, b) in enumerate(pairs, start=1):
                nxt[f_gen(r + 1, eps + (0,), idx + (k,))] = a
                nxt[f_gen(r + 1, eps + (1,), idx + (k,))] = b
            nodes.append(CertNode(r, g, f_system_phi(sequence, r, g), v))
        level_vals = nxt
    for g, v in level_vals.items():
        nodes.append(CertNode(depth, g, None, v))
    return HellerCertificate(P.degree, x, depth, tuple(sequence), tuple(nodes))


def verify_certificate(cert: HellerCertificate) -> bool:
    """Re-evaluate every recorded word from the level-d assignment alone.

    Checks that each level is complete, that every phi-word is the one the
    F-system prescribes, that the words evaluate to the recorded values, and
    that x_0 goes to the target.
    """
    deg, seq, d = cert.degree, cert.sequence, cert.depth
    if len(seq) != d:
        return False
    raw = cert.raw_assignment()
    if set(raw) != set(f_system_level(seq, d)):
        return False
    ident = Permutation.identity(deg)
    values = dict(raw)
    by_level: dict[int, list[CertNode]] = {}
    for n in cert.nodes:
        by_level.setdefault(n.level, []).append(n)
    for r in range(d - 1, -1, -1):
        nodes = by_level.get(r, [])
        if {n.generator for n in nodes} != set(f_system_level(seq, r)):
            return False
        for n in nodes:
            if n.word is None or n.word != f_system_phi(seq, r, n.generator):
                return False
            val = evaluate(n.word, values, lambda a, b: a * b, Permutation.inverse, ident)
            if val != n.assigned_image:
                return False
            values[n.generator] = val
    return values.get(f_gen(0, (), ())) == cert.target


def perfect_radical_cover(P: FiniteGroup, depth: int) -> list[HellerCertificate]:
    """One certificate per element of the perfect radical.

    Taken together (disjoint alphabets, one free factor per element) they
    exhibit the radical as the image of a free product of F_n systems.
    """
    return [heller_certificate(P, x, depth) for x in perfect_radical(P).sorted_elements()]
