from itertools import product

import pytest

from binate.a1 import UnsupportedConstruction, a1_report, build_a, build_a1, verify_edge
from binate.finite import closure
from binate.fixtures import alternating, quaternion, symmetric
from binate.hnn import element_order_bounded


@pytest.fixture(scope="module")
def s3_a1():
    return build_a1(symmetric(3))


def _subgroup_of_pairs(G, gens):
    """Subgroup of G x G generated by ``gens``, by closure (independent of the closed forms)."""
    seen = {(G.identity, G.identity)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = (a[0] * g[0], a[1] * g[1])
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def test_edge_count_is_number_of_abelian_subgroups(s3_a1):
    assert len(s3_a1.edges) == 5
    assert sorted(e.F.order for e in s3_a1.edges) == [1, 2, 2, 2, 3]


def test_associated_subgroups_by_generation(s3_a1):
    G = s3_a1.G
    for edge in s3_a1.edges:
        one_F = [(G.identity, f) for f in edge.F]
        diag_C = [(k, k) for k in edge.C]
        P = _subgroup_of_pairs(G, one_F + diag_C)
        diag_F = [(f.inverse(), f) for f in edge.F]
        one_C = [(G.identity, k) for k in edge.C]
        Q = _subgroup_of_pairs(G, diag_F + one_C)
        assert P == edge.enumerate_P()
        assert Q == edge.enumerate_Q()
        for p in product(G.elements, G.elements):
            assert edge.in_P(p) == (p in P)
            assert edge.in_Q(p) == (p in Q)


def test_defining_relation(s3_a1):
    # (k, fk) = t (f^-1, fk) t^-1
    E = s3_a1.extension
    for i, edge in enumerate(s3_a1.edges):
        t = E.letter(i)
        for f in edge.F:
            for k in edge.C:
                lhs = E.embed((k, f * k))
                rhs = E.mul(E.mul(t, E.embed((f.inverse(), f * k))), E.inv(t))
                assert E.equal(lhs, rhs)


def test_trivial_F_edge(s3_a1):
    G = s3_a1.G
    edge = next(e for e in s3_a1.edges if e.F.order == 1)
    assert edge.enumerate_P() == {(g, g) for g in G}
    assert edge.enumerate_Q() == {(G.identity, g) for g in G}
    for g in G:
        assert edge.p_to_q((g, g)) == (G.identity, g)


@pytest.mark.parametrize("G", [symmetric(3), quaternion(), alternating(4)], ids=str)
def test_every_edge_verifies(G):
    r = a1_report(G)
    assert all(e["ok"] for e in r["edges"])
    assert all(v == "pass" for v in r["verdicts"].values())


def test_embedding_and_orders(s3_a1):
    E = s3_a1.extension
    for g in s3_a1.G:
        assert E.is_identity(s3_a1.embed(g)) == g.is_identity()
        assert element_order_bounded(E, s3_a1.embed(g), 10) == g.order()
    for t in E.stable_letters():
        assert element_order_bounded(E, t, 101) is None


def test_broken_theta_is_caught(s3_a1):
    edge = next(e for e in s3_a1.edges if e.F.order == 3)
    broken = type(edge)(edge.label, edge.F, edge.C)
    broken.p_to_q = lambda p: (p[0], p[1])
    assert not verify_edge(s3_a1.G, broken)["ok"]


def test_higher_levels_rejected():
    with pytest.raises(UnsupportedConstruction):
        build_a(symmetric(3), 2)
    assert build_a(closure([], degree=1), 1).extension.edges
