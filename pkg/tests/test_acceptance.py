"""Acceptance criteria, one check per criterion, one PASS/FAIL line each.

Criteria that cannot hold as stated are still asserted verbatim and marked
strict xfail, so their FAIL lines stay visible while the suite stays green.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from binate.a1 import a1_report, build_a1
from binate.cli import main
from binate.finite import abelian_subgroups
from binate.fixtures import alternating, symmetric, z2_with_name
from binate.grope import (
    f_system_connecting_map,
    f_system_level,
    f_system_size,
    grope_connecting_map,
    grope_level,
    heller_certificate,
    verify_certificate,
)
from binate.handles import FiniteHandle
from binate.hnn import element_order_bounded
from binate.presentation import abelianization, deficiency, standard_presentation
from binate.ring import (
    augmentation,
    bass_search,
    f2_handle,
    fixture_homomorphisms,
    half_idempotent,
    hs_trace_element,
    hs_trace_matrix,
    kaplansky_trace,
    lambda_member,
    naturality_check,
    random_element,
    random_idempotent,
    random_invertible,
    z2_handle,
)
from binate.structure import structure_lemma_report
from binate.tower import abelian_witness, build_binate_tower, tower_report, verify_pairwise_structure
from binate.words import Gen, commutator, random_word

LINES: list[str] = []


def record(n, ok: bool, detail: str) -> bool:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    LINES.append(line)
    print(line)
    return ok


def _cli_json(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def test_criterion_1_higman_acyclicity(capsys):
    t0 = time.perf_counter()
    code, r = _cli_json(capsys, "homology", "--fixture", "higman:4")
    elapsed = time.perf_counter() - t0
    small = {k: str(abelianization(standard_presentation("higman", k))) for k in (1, 2, 3)}
    ok = (
        code == 0
        and r["results"]["h1_text"] == "0"
        and r["results"]["h2_complex"] == 0
        and elapsed < 1.0
        and all(v == "0" for v in small.values())
    )
    record(1, ok, f"higman:4 H1={r['results']['h1_text']} H2_complex={r['results']['h2_complex']} "
                  f"in {elapsed:.3f}s; higman:1-3 H1={list(small.values())}")
    assert ok


def test_criterion_2_abelianization_gate(capsys):
    _, ep = _cli_json(capsys, "homology", "--fixture", "epstein")
    _, two = _cli_json(capsys, "homology", "--fixture", "higman_two_gen")
    ok = (
        ep["results"]["h1_text"] == "Z"
        and two["results"]["h1_text"] == "Z"
        and two["results"]["deficiency"] == 0
        and deficiency(standard_presentation("higman_two_gen")) == 0
    )
    record(2, ok, f"epstein H1={ep['results']['h1_text']}; higman_two_gen H1={two['results']['h1_text']} "
                  f"deficiency={two['results']['deficiency']}")
    assert ok


def test_criterion_3_commutator_identity():
    rng = random.Random(7)
    gens = [Gen("x"), Gen("y"), Gen("z")]
    failures = 0
    for _ in range(1000):
        u, a, b = (random_word(rng, gens, 12) for _ in range(3))
        lhs = commutator(u, a * b)
        rhs = commutator(u, a) * commutator(u, b) * commutator(commutator(b, u), a)
        failures += not (lhs.inverse() * rhs).is_identity()
    ok = failures == 0
    record(3, ok, f"1000 seeded triples (seed 7, length <= 12), {failures} failures")
    assert ok


@pytest.mark.xfail(strict=True, reason="the literal equivalence has counterexamples (e.g. H = 1, phi(e) in C(u) \\ 1)")
def test_criterion_4_structure_map_equivalence():
    t0 = time.perf_counter()
    r = structure_lemma_report(16)
    elapsed = time.perf_counter() - t0
    ok = r["literal_counterexamples"] == 0 and elapsed < 60
    ce = r["first_counterexample"]
    record(4, ok, f"{r['groups']} groups, {r['triples']} triples (H, u, phi), "
                  f"{r['literal_counterexamples']} counterexamples to hom <=> (injective and commuting) "
                  f"in {elapsed:.1f}s; first: group {ce['group'] if ce else '-'}, H={ce['H'] if ce else '-'}, "
                  f"u={ce['u'] if ce else '-'}, phi={ce['phi'] if ce else '-'}; "
                  f"forward implication counterexamples {r['forward_counterexamples']}, "
                  f"corrected-form counterexamples {r['refined_counterexamples']}")
    assert ok


def test_criterion_5_binate_towers():
    t0 = time.perf_counter()
    Z2, names = z2_with_name()
    S3 = symmetric(3)
    verdicts = {}
    for label, base, x in (
        ("Z2", FiniteHandle(Z2, names), names["g"]),
        ("S3", FiniteHandle(S3), next(g for g in S3 if g.order() == 3)),
    ):
        T = build_binate_tower(base, 2)
        checks = tower_report(T)["checks"]
        checks += verify_pairwise_structure(T, 0, 1, base.generators())["checks"]
        checks += abelian_witness(T, x, 2, 3)["checks"]
        verdicts[label] = all(c["verdict"] == "pass" for c in checks)
        nontrivial = [c for c in checks if c["name"] in ("u0_nontrivial", "u1_nontrivial")]
        verdicts[label] &= len(nontrivial) == 2
    elapsed = time.perf_counter() - t0
    ok = all(verdicts.values()) and elapsed < 120
    record(5, ok, f"depth-2 towers {verdicts}: binate equation, u0/u1 nontrivial, pairwise structure, "
                  f"abelian witness N=3, in {elapsed:.2f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason="S3 has 5 abelian subgroups (1, three of order 2, one of order 3), not 6")
def test_criterion_6_a1_abelian_subgroup_count():
    n = len(abelian_subgroups(symmetric(3)))
    ok = n == 6
    record("6 (count)", ok, f"A_1(S3) has {n} abelian subgroups / edges; required exactly 6")
    assert ok


def test_criterion_6_a1_edges_embedding_orders():
    S3 = symmetric(3)
    r = a1_report(S3, order_bound=100)
    A = build_a1(S3)
    E = A.extension
    orders = [element_order_bounded(E, t, 101) for t in E.stable_letters()]
    ok = (
        all(e["ok"] for e in r["edges"])
        and r["verdicts"]["embedding_injective"] == "pass"
        and all(o is None for o in orders)
        and r["verdicts"]["embedded_orders_preserved"] == "pass"
    )
    record("6 (edges)", ok, f"{len(r['edges'])} theta_i exhaustively bijective homomorphisms; "
                            f"g -> (g,1) injective; every t_i order > 100; embedded orders preserved")
    assert ok


def test_criterion_7_grope_counts():
    sizes = all(len(grope_level(n)) == 2 ** n for n in range(11))
    zero = all(grope_connecting_map(n).is_zero() for n in range(11))
    seqs = [(1, 1, 1, 1, 1, 1), (2, 1, 3, 1, 2, 1), (2, 2, 2, 2, 2, 2), (3, 2, 1, 1, 2, 3)]
    f_sizes = True
    for s in seqs:
        for r in range(6):
            expect = 2 ** r
            for k in s[:r]:
                expect *= k
            f_sizes &= len(f_system_level(s, r)) == f_system_size(s, r) == expect
    f_zero = all(f_system_connecting_map(s, r).is_zero() for s in seqs for r in range(5))
    ok = sizes and zero and f_sizes and f_zero
    record(7, ok, f"grope sizes 2^n (n <= 10) {sizes}, maps zero {zero}; "
                  f"F-system sizes (r <= 5) {f_sizes}, maps zero {f_zero}")
    assert ok


def test_criterion_8_heller_a5():
    t0 = time.perf_counter()
    A5 = alternating(5)
    verified = sum(verify_certificate(heller_certificate(A5, x, 2)) for x in A5)
    elapsed = time.perf_counter() - t0
    ok = verified == 60 and elapsed < 30
    record(8, ok, f"{verified}/60 elements of A5 with re-verified depth-2 certificates in {elapsed:.2f}s")
    assert ok


def test_criterion_9_traces():
    rng = random.Random(9)
    Z2, F2 = z2_handle(), f2_handle()
    S3 = FiniteHandle(symmetric(3))
    backends = [Z2, S3, F2]
    dens = (1, 2, 3)
    partition = all(
        hs_trace_element(M).total() == augmentation(M)
        for M in (random_element(rng, backends[k % 3], denominators=dens) for k in range(1000))
    )
    comm = True
    for k in range(500):
        B = backends[k % 3]
        M, N = random_element(rng, B, denominators=dens), random_element(rng, B, denominators=dens)
        comm &= hs_trace_element(M * N - N * M).values == ()
    invariance = True
    for B in (Z2, F2):
        for _ in range(100):
            P = random_idempotent(rng, B, 2, terms=2, word_len=2, height=2)
            U, Ui = random_invertible(rng, B, 3, steps=2, terms=2, word_len=2, height=2)
            h = hs_trace_matrix(P)
            invariance &= h == hs_trace_matrix(P.stabilize()) == hs_trace_matrix(U @ P.stabilize() @ Ui)
    homs = fixture_homomorphisms()
    natural = len(homs) == 3 and all(naturality_check(a, M) for a, M in homs)
    e = half_idempotent(Z2)
    hs = hs_trace_element(e).to_json()
    kappa = kaplansky_trace(e)
    exact = e * e == e and hs == {"[e]": "1/2", "[g]": "1/2"} and kappa == Fraction(1, 2)
    lam = lambda_member(kappa, [2])
    ok = partition and comm and invariance and natural and exact and lam
    record(9, ok, f"partition(1000) {partition}; HS(MN-NM)=0 (500) {comm}; "
                  f"stabilization/conjugation (100 over Q[Z/2], 100 over Z[F2]) {invariance}; "
                  f"naturality (3 homs) {natural}; HS((1+g)/2)={hs}, kappa={kappa}, Lambda({{2}}) {lam}")
    assert ok


def test_criterion_10_bass_probe_honesty():
    r = bass_search(2, 2)
    small = bass_search(1, 2)
    ok = (
        not r["violations"]
        and r["status"] == "consistent"
        and r["nontrivial"] > 0
        and small["status"] == "no nontrivial witnesses found"
    )
    record(10, ok, f"Z[Z/2] size <= 2 height <= 2: {r['idempotents']} idempotents "
                   f"({r['nontrivial']} not diagonal 0/1), all HS in Z[e], status '{r['status']}'; "
                   f"size 1 search reports '{small['status']}'")
    assert ok
