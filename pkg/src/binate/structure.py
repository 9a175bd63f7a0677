"""Exhaustive structure-map harness over small finite groups.

For a subgroup H of G, an element u and a set function phi: H -> G with
h = [u, phi(h)] for every h, compare "phi is a homomorphism" against
"phi is injective and [H, phi(H)] = 1".

The candidates for phi(h) form a single left coset c C(u), since
[u, v] = [u, w] iff w^-1 v centralizes u.  So the commutator set
{[u, v]} = u Cl(u^-1) bounds |H|, and the search stays small.

Alongside the literal equivalence, the harness also checks the forward
implication and the variant with "injective" replaced by
"<phi(H)> meets C(u) trivially", which is what makes the converse go through.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .finite import FiniteGroup, subgroups
from .fixtures import small_groups


@dataclass
class Table:
    """Integer multiplication table of a finite group; index 0 is the identity."""

    group: FiniteGroup
    mul: list[list[int]]
    inv: list[int]

    @classmethod
    def of(cls, G: FiniteGroup) -> Table:
        els = list(G.elements)
        els.sort(key=lambda g: not g.is_identity())
        idx = {g: i for i, g in enumerate(els)}
        mul = [[idx[a * b] for b in els] for a in els]
        inv = [idx[a.inverse()] for a in els]
        t = cls(G, mul, inv)
        t.elements = els
        t.index = idx
        return t

    def comm(self, a: int, b: int) -> int:
        m, i = self.mul, self.inv
        return m[m[a][b]][m[i[a]][i[b]]]

    def generated(self, xs: Iterable[int]) -> frozenset[int]:
        seen = {0}
        frontier = [0]
        gens = list(set(xs))
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = self.mul[a][g]
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return frozenset(seen)


@dataclass
class LemmaTally:
    group: str
    triples: int = 0
    homomorphisms: int = 0
    literal_counterexamples: int = 0
    forward_counterexamples: int = 0
    refined_counterexamples: int = 0
    first_counterexample: dict | None = None


def _classify(t: Table, H: list[int], u: int, phi: dict[int, int], Cu: frozenset[int]):
    m = t.mul
    hom = all(m[phi[a]][phi[b]] == phi[m[a][b]] for a in H for b in H)
    injective = len(set(phi.values())) == len(H)
    commuting = all(t.comm(a, phi[b]) == 0 for a in H for b in H)
    meets_trivially = t.generated(phi.values()) & Cu == {0}
    return hom, injective, commuting, meets_trivially


def check_group(G: FiniteGroup, name: str | None = None, limit: int = 1 << 16) -> LemmaTally:
    t = Table.of(G)
    n = len(t.elements)
    tally = LemmaTally(name or G.name or repr(G))
    Hs = [sorted(t.index[g] for g in S.elements) for S in subgroups(G)]
    for u in range(n):
        Cu = frozenset(c for c in range(n) if t.mul[u][c] == t.mul[c][u])
        solutions: dict[int, list[int]] = {}
        for c in range(n):
            solutions.setdefault(t.comm(u, c), []).append(c)
        for H in Hs:
            if any(h not in solutions for h in H):
                continue
            choices = [solutions[h] for h in H]
            size = 1
            for c in choices:
                size *= len(c)
            if size > limit:
                raise RuntimeError(f"{size} set functions for one (H, u) in {tally.group}")
            for values in product(*choices):
                phi = dict(zip(H, values))
                hom, inj, comm, trivial_meet = _classify(t, H, u, phi, Cu)
                tally.triples += 1
                tally.homomorphisms += hom
                if hom != (inj and comm):
                    tally.literal_counterexamples += 1
                    if tally.first_counterexample is None:
                        tally.first_counterexample = {
                            "H": [str(t.elements[h]) for h in H],
                            "u": str(t.elements[u]),
                            "phi": {str(t.elements[h]): str(t.elements[v]) for h, v in phi.items()},
                            "homomorphism": hom,
                            "injective": inj,
                            "commuting": comm,
                        }
                if hom and not (inj and comm):
                    tally.forward_counterexamples += 1
                if hom != (comm and trivial_meet):
                    tally.refined_counterexamples += 1
    return tally


def structure_lemma_report(max_order: int = 16) -> dict:
    tallies = [check_group(G, name) for name, G in small_groups(max_order)]
    literal = sum(t.literal_counterexamples for t in tallies)
    forward = sum(t.forward_counterexamples for t in tallies)
    refined = sum(t.refined_counterexamples for t in tallies)
    first = next((t.first_counterexample | {"group": t.group} for t in tallies if t.first_counterexample), None)
    return {
        "groups": len(tallies),
        "triples": sum(t.triples for t in tallies),
        "homomorphisms": sum(t.homomorphisms for t in tallies),
        "literal_counterexamples": literal,
        "forward_counterexamples": forward,
        "refined_counterexamples": refined,
        "first_counterexample": first,
        "per_group": [
            {
                "group": t.group,
                "triples": t.triples,
                "homomorphisms": t.homomorphisms,
                "literal_counterexamples": t.literal_counterexamples,
            }
            for t in tallies
        ],
        "verdicts": {
            "hom_iff_injective_and_commuting": "pass" if literal == 0 else "fail",
            "hom_implies_injective_and_commuting": "pass" if forward == 0 else "fail",
            "hom_iff_commuting_and_trivial_centralizer_meet": "pass" if refined == 0 else "fail",
        },
    }
