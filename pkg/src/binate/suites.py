"""Named verification suites; each property yields one verdict."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product
from typing import Any, Callable

from .a1 import a1_report
from .finite import GroupTooLarge, perfect_radical
from .fixtures import alternating, symmetric, z2_with_name
from .grope import (
    f_system_connecting_map,
    f_system_level,
    f_system_size,
    grope_connecting_map,
    grope_level,
    heller_certificate,
    verify_certificate,
)
from .hnn import HnnWord, ReductionBudgetExceeded
from .presentation import homology_report, standard_presentation
from .ring import (
    augmentation,
    bass_probe,
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
    standard_f2_idempotents,
    z2_handle,
)
from .structure import structure_lemma_report
from .tower import abelian_witness, build_binate_tower, tower_report, verify_pairwise_structure
from .words import Gen, commutator, random_word

DEFAULT_SEED = 7


def prop(name: str, ok: bool | str, **details: Any) -> dict:
    verdict = ok if isinstance(ok, str) else ("pass" if ok else "fail")
    return {"name": name, "verdict": verdict, **({"details": details} if details else {})}


# --- presentations ----------------------------------------------------------------------


def suite_higman(**_) -> list[dict]:
    out = []
    for k in (1, 2, 3, 4):
        r = homology_report(standard_presentation("higman", k))
        out.append(prop(f"higman:{k} H1 trivial", r["h1_text"] == "0", h1=r["h1_text"]))
        if k == 4:
            out.append(prop("higman:4 H2 complex rank 0", r["h2_complex"] == 0, h2_complex=r["h2_complex"]))
            out.append(prop("higman:4 deficiency 0", r["deficiency"] == 0))
    ep = homology_report(standard_presentation("epstein"))
    out.append(prop("epstein H1 = Z", ep["h1_text"] == "Z", h1=ep["h1_text"]))
    two = homology_report(standard_presentation("higman_two_gen"))
    out.append(prop("higman_two_gen H1 = Z", two["h1_text"] == "Z", h1=two["h1_text"]))
    out.append(prop("higman_two_gen deficiency 0", two["deficiency"] == 0, deficiency=two["deficiency"]))
    return out


# --- words ------------------------------------------------------------------------------


def commutator_identity_failures(samples: int, seed: int, max_len: int = 12) -> int:
    """Count triples where [u, ab] != [u,a][u,b][[b,u],a] after free reduction."""
    rng = random.Random(seed)
    gens = [Gen("x"), Gen("y"), Gen("z")]
    bad = 0
    for _ in range(samples):
        u, a, b = (random_word(rng, gens, max_len) for _ in range(3))
        lhs = commutator(u, a * b)
        rhs = commutator(u, a) * commutator(u, b) * commutator(commutator(b, u), a)
        bad += (lhs.inverse() * rhs).is_identity() is False
    return bad


def suite_commutator_identity(samples: int = 1000, seed: int = DEFAULT_SEED, **_) -> list[dict]:
    bad = commutator_identity_failures(samples, seed)
    return [prop("[u,ab] = [u,a][u,b][[b,u],a]", bad == 0, samples=samples, failures=bad)]


# --- structure maps ---------------------------------------------------------------------


def suite_lemma_structure_maps(**_) -> list[dict]:
    r = structure_lemma_report(16)
    names = {
        "hom_iff_injective_and_commuting": "hom <=> injective and [H, phi(H)] = 1",
        "hom_implies_injective_and_commuting": "hom => injective and [H, phi(H)] = 1",
        "hom_iff_commuting_and_trivial_centralizer_meet": "hom <=> [H, phi(H)] = 1 and <phi(H)> meets C(u) trivially",
    }
    counts = {
        "hom_iff_injective_and_commuting": r["literal_counterexamples"],
        "hom_implies_injective_and_commuting": r["forward_counterexamples"],
        "hom_iff_commuting_and_trivial_centralizer_meet": r["refined_counterexamples"],
    }
    out = []
    for key, verdict in r["verdicts"].items():
        details = {"groups": r["groups"], "triples": r["triples"], "counterexamples": counts[key]}
        if key == "hom_iff_injective_and_commuting" and r["first_counterexample"]:
            details["first_counterexample"] = r["first_counterexample"]
        out.append(prop(names[key], verdict, **details))
    return out


# --- towers -----------------------------------------------------------------------------


def _tower_checks(base_name: str, G, witness_x, depth: int = 2, bound: int = 3) -> list[dict]:
    T = build_binate_tower(G, depth)
    out = [prop(f"{base_name}: {c['name']}", c["verdict"]) for c in tower_report(T)["checks"]]
    for c in verify_pairwise_structure(T, 0, 1)["checks"]:
        out.append(prop(f"{base_name}: pairwise {c['name']}", c["verdict"]))
    w = abelian_witness(T, witness_x, depth, bound)
    for c in w["checks"]:
        out.append(prop(f"{base_name}: witness {c['name']}", c["verdict"], bound=bound))
    return out


def suite_tower(**_) -> list[dict]:
    Z2, names = z2_with_name()
    S3 = symmetric(3)
    three_cycle = next(g for g in S3 if g.order() == 3)
    try:
        return _tower_checks("Z2", Z2, names["g"]) + _tower_checks("S3", S3, three_cycle)
    except ReductionBudgetExceeded as exc:
        return [prop("tower", "capped", reason=str(exc))]


def _level1_homs(max_degree: int = 6) -> list[tuple[tuple, tuple, tuple, tuple]]:
    """Images (A, B, U, U^-1) in S_n of (g,1), (1,g), u0 for homomorphisms
    of the level-1 tower group over Z/2: A, B commuting involutions (or 1),
    U B U^-1 = A B."""

    def comp(p, q):
        return tuple(p[i] for i in q)

    def inv(p):
        r = [0] * len(p)
        for i, x in enumerate(p):
            r[x] = i
        return tuple(r)

    homs = []
    for n in range(2, max_degree + 1):
        S = list(permutations(range(n)))
        ident = tuple(range(n))
        invol = [p for p in S if comp(p, p) == ident]
        for A, B in product(invol, invol):
            AB = comp(A, B)
            if AB != comp(B, A):
                continue
            for U in S:
                if comp(comp(U, B), inv(U)) == AB:
                    homs.append((A, B, U, inv(U)))
    return homs


def britton_oracle(max_letters: int = 4, max_degree: int = 6) -> dict:
    """Compare Britton verdicts with finite quotients on every level-1 word over Z/2.

    A word Britton calls nontrivial needs a quotient where it survives; a
    word Britton calls trivial must die in every quotient tried.
    """
    G, names = z2_with_name()
    g, e = names["g"], G.identity
    E = build_binate_tower(G, 1).levels[0]
    homs = _level1_homs(max_degree)
    base = [(a, b) for a in (e, g) for b in (e, g)]

    def image(h, w: HnnWord):
        A, B, U, Ui = h
        n = len(A)
        ident = tuple(range(n))

        def b_img(p):
            r = ident
            if not p[0].is_identity():
                r = tuple(r[i] for i in A)
            if not p[1].is_identity():
                r = tuple(r[i] for i in B)
            return r

        r = b_img(w.bases[0])
        for (_, eps), b in zip(w.letters, w.bases[1:]):
            s = U if eps == 1 else Ui
            r = tuple(r[i] for i in s)
            r = tuple(r[i] for i in b_img(b))
        return r, ident

    words = trivial = 0
    unwitnessed, disagreements = [], []
    for m in range(max_letters + 1):
        for bs in product(base, repeat=m + 1):
            for eps in product((1, -1), repeat=m):
                w = HnnWord(bs, tuple((0, x) for x in eps))
                words += 1
                if E.is_identity(w):
                    trivial += 1
                    if any(r != i for r, i in (image(h, w) for h in homs[::25])):
                        disagreements.append(E.format(w))
                elif not any(r != i for r, i in (image(h, w) for h in homs)):
                    unwitnessed.append(E.format(w))
    return {
        "words": words,
        "trivial": trivial,
        "quotients": len(homs),
        "unwitnessed_nontrivial": unwitnessed[:10],
        "trivial_but_nonzero_image": disagreements[:10],
        "ok": not unwitnessed and not disagreements,
    }


def suite_britton_oracle(**_) -> list[dict]:
    r = britton_oracle()
    ok = r.pop("ok")
    return [prop("Britton verdicts agree with finite quotients", ok, **r)]


# --- A_1 ----------------------------------------------------------------------------------


def suite_a1(**_) -> list[dict]:
    S3 = symmetric(3)
    r = a1_report(S3)
    brute = _abelian_subgroup_count_bruteforce(S3)
    out = [prop("abelian subgroup count matches subset enumeration",
                r["abelian_subgroups"] == brute, found=r["abelian_subgroups"], brute_force=brute)]
    out += [prop(f"S3: {k}", v) for k, v in r["verdicts"].items()]
    return out


def _abelian_subgroup_count_bruteforce(G) -> int:
    els = list(G.elements)
    e = G.identity
    others = [g for g in els if g != e]
    count = 0
    for mask in range(1 << len(others)):
        S = {e} | {others[i] for i in range(len(others)) if mask >> i & 1}
        if all(a * b in S and a * b == b * a for a in S for b in S):
            count += 1
    return count


# --- gropes and certificates ------------------------------------------------------------------


def suite_grope_counts(**_) -> list[dict]:
    sizes = all(len(grope_level(n)) == 2 ** n for n in range(11))
    zero = all(grope_connecting_map(n).is_zero() for n in range(10))
    seqs = [(1, 1, 1, 1, 1, 1), (2, 1, 3, 1, 2, 1), (2, 2, 2, 2, 2, 2), (3, 1, 1, 2, 1, 1)]
    f_sizes = all(
        len(f_system_level(s, r)) == f_system_size(s, r) == 2 ** r * _prod(s[:r])
        for s in seqs
        for r in range(6)
    )
    f_zero = all(f_system_connecting_map(s, r).is_zero() for s in seqs for r in range(5))
    return [
        prop("grope basis sizes 2^n, n <= 10", sizes),
        prop("grope connecting maps abelianize to zero", zero),
        prop("F-system basis sizes 2^r n_1...n_r, r <= 5", f_sizes, sequences=[list(s) for s in seqs]),
        prop("F-system connecting maps abelianize to zero", f_zero),
    ]


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def suite_heller_a5(depth: int = 2, **_) -> list[dict]:
    A5 = alternating(5)
    radical_is_all = perfect_radical(A5).order == A5.order
    certs = [heller_certificate(A5, x, depth) for x in A5.elements]
    verified = sum(verify_certificate(c) for c in certs)
    return [
        prop("perfect radical of A5 is A5", radical_is_all),
        prop(f"every element of A5 has a verified depth-{depth} certificate",
             verified == A5.order, elements=A5.order, verified=verified),
    ]


# --- traces -----------------------------------------------------------------------------------


def suite_traces(samples: int = 1000, seed: int = DEFAULT_SEED, **_) -> list[dict]:
    rng = random.Random(seed)
    S3 = _s3_handle()
    F2, Z2 = f2_handle(), z2_handle()
    backends = [Z2, S3, F2]
    dens = (1, 1, 2, 3)

    partition = all(
        hs_trace_element(M).total() == augmentation(M)
        for M in (random_element(rng, backends[k % 3], denominators=dens) for k in range(samples))
    )
    comm_samples = max(1, samples // 2)
    comm_zero = True
    for k in range(comm_samples):
        B = backends[k % 3]
        M, N = random_element(rng, B, denominators=dens), random_element(rng, B, denominators=dens)
        comm_zero &= hs_trace_element(M * N - N * M) == hs_trace_element(M - M)
    kap = all(
        kaplansky_trace(M) == hs_trace_element(M).identity_part()
        for M in (random_element(rng, backends[k % 3]) for k in range(100))
    )

    inv_ok = add_ok = True
    n_idem = 100
    for k in range(n_idem):
        B = Z2 if k % 2 == 0 else F2
        P = random_idempotent(rng, B, 2, terms=2, word_len=2, height=2)
        h = hs_trace_matrix(P)
        U, Ui = random_invertible(rng, B, 3, steps=2, terms=2, word_len=2, height=2)
        inv_ok &= h == hs_trace_matrix(P.stabilize()) == hs_trace_matrix(U @ P.stabilize() @ Ui)
        if k % 10 == 0:
            Q = random_idempotent(rng, B, 1, terms=2, word_len=2, height=2)
            add_ok &= hs_trace_matrix(P.block_sum(Q)) == h + hs_trace_matrix(Q)

    nat = [(a.name, naturality_check(a, M)) for a, M in fixture_homomorphisms()]
    half = half_idempotent(Z2)
    hs_half = hs_trace_element(half).to_json()
    kappa = kaplansky_trace(half)
    return [
        prop("partial augmentations sum to augmentation", partition, samples=samples),
        prop("HS(MN - NM) = 0", comm_zero, samples=comm_samples),
        prop("Kaplansky trace is the [e] coefficient", kap, samples=100),
        prop("HS invariant under stabilization and conjugation", inv_ok, matrices=n_idem,
             rings=["Q[Z/2]", "Z[F2]"]),
        prop("HS additive on block sums", add_ok),
        prop("naturality squares commute", all(ok for _, ok in nat), homomorphisms=[n for n, _ in nat]),
        prop("(1+g)/2 idempotent in Q[Z/2]", half * half == half),
        prop("HS((1+g)/2) = {[e]: 1/2, [g]: 1/2}", hs_half == {"[e]": "1/2", "[g]": "1/2"}, hs=hs_half),
        prop("kappa((1+g)/2) = 1/2", kappa == Fraction(1, 2), kappa=str(kappa)),
        prop("1/2 in Lambda for orders {2}", lambda_member(kappa, [2])),
    ]


def _s3_handle():
    from .handles import FiniteHandle

    return FiniteHandle(symmetric(3))


def suite_bass_probe(**_) -> list[dict]:
    search = bass_search(2, 2)
    f2 = [bass_probe(P) for P in standard_f2_idempotents()]
    return [
        prop("Z[Z/2] idempotents (size <= 2, height <= 2) have HS in Z[e]",
             search["status"] != "violation", status=search["status"],
             idempotents=search["idempotents"], nontrivial=search["nontrivial"]),
        prop("Z[F2] constructed idempotents have HS in Z[e]", all(p["consistent"] for p in f2),
             witnesses=len(f2), status="consistent" if f2 else "no nontrivial witnesses found"),
    ]


SUITES: dict[str, Callable[..., list[dict]]] = {
    "higman": suite_higman,
    "commutator-identity": suite_commutator_identity,
    "lemma-structure-maps": suite_lemma_structure_maps,
    "tower": suite_tower,
    "britton-oracle": suite_britton_oracle,
    "a1": suite_a1,
    "grope-counts": suite_grope_counts,
    "heller-a5": suite_heller_a5,
    "traces": suite_traces,
    "bass-probe": suite_bass_probe,
}


def run_suite(name: str, samples: int | None = None, seed: int = DEFAULT_SEED) -> list[dict]:
    kw: dict[str, Any] = {"seed": seed}
    if samples is not None:
        kw["samples"] = samples
    if name == "all":
        out = []
        for key, fn in SUITES.items():
            out += [dict(p, suite=key) for p in _guarded(fn, kw)]
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}, all")
    return _guarded(SUITES[name], kw)


def _guarded(fn: Callable[..., list[dict]], kw: dict) -> list[dict]:
    try:
        return fn(**kw)
    except (GroupTooLarge, ReductionBudgetExceeded) as exc:
        return [prop(fn.__name__.removeprefix("suite_"), "capped", reason=str(exc))]
