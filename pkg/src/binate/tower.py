"""Universal binate tower over a finite base group.

H_{i+1} = < H_i x H_i, u_i | (g,g) = u_i (1,g) u_i^-1 >, with H_i sitting in
H_{i+1} as H_i x 1 and structure map phi_i(g) = (1,g).  Every check here is a
statement about a materialized finite level, never about the limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Sequence

from .finite import FiniteGroup
from .handles import FiniteHandle, GroupHandle, ProductHandle
from .hnn import DEFAULT_LETTER_BUDGET, Edge, HnnExtension, HnnWord
from .presentation import Presentation, presentation_from_table
from .words import FreeWord, Gen, commutator

DEFAULT_DEPTH_CAP = 3


class TowerDepthExceeded(ValueError):
    pass


def tower_edge(H: GroupHandle, label: str) -> Edge:
    """A = 1 x H, B = diagonal of H, theta(1,g) = (g,g)."""
    return Edge(
        label=label,
        in_domain=lambda p: H.is_identity(p[0]),
        in_image=lambda p: H.equal(p[0], p[1]),
        theta=lambda p: (p[1], p[1]),
        theta_inv=lambda p: (H.identity, p[1]),
    )


@dataclass
class BinateTower:
    base: FiniteHandle
    levels: list[HnnExtension] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def group(self, i: int) -> GroupHandle:
        """H_i (H_0 is the base)."""
        if not 0 <= i <= self.depth:
            raise IndexError(f"level {i} not materialized (depth {self.depth})")
        return self.base if i == 0 else self.levels[i - 1]

    def include(self, x: Any, i: int, j: int) -> Any:
        """Image of x in H_i under the embeddings H_i -> H_{i+1} -> ... -> H_j, g -> (g,1)."""
        if j < i:
            raise ValueError("can only include upwards")
        for k in range(i, j):
            H = self.group(k)
            x = self.levels[k].embed((x, H.identity))
        return x

    def phi(self, i: int, x: Any) -> HnnWord:
        """Structure map phi_i: H_i -> H_{i+1}, g -> (1,g)."""
        H = self.group(i)
        return self.levels[i].embed((H.identity, x))

    def u(self, i: int) -> HnnWord:
        return self.levels[i].letter(0)

    def base_elements(self) -> tuple:
        return self.base.elements()


def build_binate_tower(
    H0: FiniteGroup | FiniteHandle,
    depth: int,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    letter_budget: int = DEFAULT_LETTER_BUDGET,
) -> BinateTower:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > depth_cap:
        raise TowerDepthExceeded(f"depth {depth} exceeds cap {depth_cap}")
    base = H0 if isinstance(H0, FiniteHandle) else FiniteHandle(H0)
    if base.group.order == 1:
        raise ValueError("base group must be nontrivial")
    T = BinateTower(base)
    H: GroupHandle = base
    for i in range(depth):
        E = HnnExtension(
            ProductHandle(H, H), [tower_edge(H, f"u{i}")], letter_budget=letter_budget, name=f"H{i + 1}"
        )
        T.levels.append(E)
        H = E
    return T


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def verify_binate(T: BinateTower, level: int, h: Any) -> bool:
    """h = [u_i, phi_i(h)] in H_{i+1}, for h in H_level."""
    E = T.levels[level]
    lhs = E.embed((h, T.group(level).identity))
    rhs = E.commutator(T.u(level), T.phi(level, h))
    return E.equal(lhs, rhs)


def verify_structure_lemma(T: BinateTower, level: int, elements: Sequence[Any]) -> dict:
    """phi_i is injective on ``elements`` and [H, phi_i(H)] = 1 on them."""
    E = T.levels[level]
    H = T.group(level)
    xs = [E.embed((h, H.identity)) for h in elements]
    ys = [T.phi(level, h) for h in elements]
    commuting = all(E.is_identity(E.commutator(x, y)) for x in xs for y in ys)
    injective = all(
        E.equal(ys[a], ys[b]) == H.equal(elements[a], elements[b])
        for a in range(len(elements))
        for b in range(a + 1, len(elements))
    )
    return {"commuting": commuting, "injective": injective}


def tower_report(T: BinateTower) -> dict:
    """Binate equation for every base element at every level, nontrivial u_i,
    and the structure-lemma facts on the base."""
    els = list(T.base_elements())
    checks = []
    for i in range(T.depth):
        H_i = T.group(i)
        lifted = [T.include(h, 0, i) for h in els]
        ok = all(verify_binate(T, i, h) for h in lifted)
        checks.append({"name": f"binate_equation_level{i}", "verdict": _verdict(ok)})
        if i >= 1:
            # the previous structure element is an element of H_i too
            ok_u = verify_binate(T, i, T.u(i - 1))
            checks.append({"name": f"binate_equation_level{i}_u{i - 1}", "verdict": _verdict(ok_u)})
        nontrivial = not T.levels[i].is_identity(T.u(i))
        checks.append({"name": f"u{i}_nontrivial", "verdict": _verdict(nontrivial)})
        lemma = verify_structure_lemma(T, i, lifted)
        checks.append({"name": f"phi{i}_injective", "verdict": _verdict(lemma["injective"])})
        checks.append({"name": f"phi{i}_commutes", "verdict": _verdict(lemma["commuting"])})
        del H_i
    return {"level": T.depth, "scope": "level-n facts", "checks": checks}


def verify_pairwise_structure(
    T: BinateTower, i: int, j: int, gens: Sequence[Any] | None = None
) -> dict:
    """In H_{j+1}: [phi_i(x), phi_j(y)] = 1 for generator pairs, and phi_i(x) != phi_j(y)
    whenever x, y != e (all base elements)."""
    if not 0 <= i < j < T.depth:
        raise ValueError(f"need 0 <= i < j < depth, got i={i}, j={j}, depth={T.depth}")
    B = T.base
    E = T.levels[j]
    gens = list(gens) if gens is not None else B.generators()

    def phi_i(x):
        return T.include(T.phi(i, T.include(x, 0, i)), i + 1, j + 1)

    def phi_j(y):
        return T.phi(j, T.include(y, 0, j))

    commute = all(E.is_identity(E.commutator(phi_i(x), phi_j(y))) for x in gens for y in gens)
    nonid = [x for x in B.elements() if not x.is_identity()]
    distinct = all(not E.equal(phi_i(x), phi_j(y)) for x in nonid for y in nonid)
    degenerate = E.equal(phi_i(B.identity), phi_j(B.identity)) and E.is_identity(phi_i(B.identity))
    return {
        "i": i,
        "j": j,
        "checks": [
            {"name": "commuting_images", "verdict": _verdict(commute)},
            {"name": "images_meet_trivially", "verdict": _verdict(distinct)},
            {"name": "identity_images_agree", "verdict": _verdict(degenerate)},
        ],
    }


def abelian_witness(T: BinateTower, x: Any, d: int, bound: int) -> dict:
    """a_i = phi_i(x) in H_d for i < d: pairwise commuting, and a_i^m = a_j^n
    (0 < |m|, |n| <= bound, i < j) only when both sides are trivial."""
    if x.is_identity():
        raise ValueError("x must be nontrivial")
    if not 1 <= d <= T.depth:
        raise ValueError(f"d must be in 1..{T.depth}")
    E = T.group(d)
    a = [T.include(T.phi(i, T.include(x, 0, i)), i + 1, d) for i in range(d)]
    commuting = all(E.is_identity(E.commutator(a[i], a[j])) for i in range(d) for j in range(i + 1, d))
    exps = [k for k in range(-bound, bound + 1) if k]
    powers = [{m: E.power(a[i], m) for m in exps} for i in range(d)]
    relations = []
    dichotomy = True
    for i in range(d):
        for j in range(i + 1, d):
            for m, n in product(exps, exps):
                if E.equal(powers[i][m], powers[j][n]):
                    both_trivial = E.is_identity(powers[i][m])
                    relations.append({"i": i, "j": j, "m": m, "n": n, "trivial": both_trivial})
                    dichotomy &= both_trivial
    # the mechanism behind the dichotomy: u_i commutes with a_j for j > i
    u_commutes = all(
        E.is_identity(E.commutator(T.include(T.u(i), i + 1, d), a[j]))
        for i in range(d)
        for j in range(i + 1, d)
    )
    return {
        "x": T.base.format(x),
        "d": d,
        "bound": bound,
        "checks": [
            {"name": "pairwise_commuting", "verdict": _verdict(commuting)},
            {"name": "power_dichotomy", "verdict": _verdict(dichotomy)},
            {"name": "structure_elements_commute", "verdict": _verdict(u_commutes)},
        ],
        "relations_found": relations,
    }


# --- explicit finite presentations of tower levels -------------------------------


def tower_level_presentation(H0: FiniteGroup, level: int) -> Presentation:
    """Finite presentation of H_level from the multiplication table of H0.

    Level i+1: two copies of the level-i generators, their relators, the
    commutators between copies, and (l_g r_g)^-1 u r_g u^-1 for each level-i
    generator g.  Generator-only relations suffice since both sides of
    (g,g) = u (1,g) u^-1 are homomorphic in g.
    """
    els = list(H0.elements)
    P = presentation_from_table(els, lambda a, b: a * b, prefix="g")
    for i in range(level):
        def copy(tag: str, w: FreeWord) -> FreeWord:
            return FreeWord(tuple((Gen(tag + g.name, g.index), e) for g, e in w.syllables))

        L = [Gen("l" + g.name, g.index) for g in P.generators]
        R = [Gen("r" + g.name, g.index) for g in P.generators]
        u = FreeWord.gen(Gen("u", (i,)))
        rels = [copy("l", r) for r in P.relators] + [copy("r", r) for r in P.relators]
        rels += [commutator(FreeWord.gen(a), FreeWord.gen(b)) for a in L for b in R]
        for a, b in zip(L, R):
            lg, rg = FreeWord.gen(a), FreeWord.gen(b)
            rels.append((lg * rg).inverse() * u * rg * u.inverse())
        P = Presentation(tuple(L + R + [Gen("u", (i,))]), tuple(rels))
    return P
